#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "gapcount/errors.hpp"

namespace gapcount {

// Area of {x > d} inside a disc of radius r centered on the y-axis origin.
inline double disc_segment_area(double r, double d) {
    if (r <= 0.0) return 0.0;
    if (d <= -r) return M_PI * r * r;
    if (d >= r) return 0.0;
    return r * r * std::acos(d / r) - d * std::sqrt(r * r - d * d);
}

enum class RegionKind { Rect, Disc, Polygon };

struct BBox {
    double xlo, xhi, ylo, yhi;
    double diam() const { return std::hypot(xhi - xlo, yhi - ylo); }
};

struct Region {
    RegionKind kind;
    double x1 = 0, x2 = 0, y1 = 0, y2 = 0;  // rect
    double cx = 0, cy = 0, R = 0;           // disc
    std::vector<std::array<double, 2>> pts;  // polygon, CCW or CW
};

inline Region make_rect(double x1, double x2, double y1, double y2) {
    if (!(x1 < x2) || !(y1 < y2)) throw ConfigError("region.rect: need x1 < x2 and y1 < y2");
    Region r;
    r.kind = RegionKind::Rect;
    r.x1 = x1; r.x2 = x2; r.y1 = y1; r.y2 = y2;
    return r;
}

inline Region make_disc(double cx, double cy, double R) {
    if (!(R > 0.0)) throw ConfigError("region.disc: radius must be positive");
    Region r;
    r.kind = RegionKind::Disc;
    r.cx = cx; r.cy = cy; r.R = R;
    return r;
}

namespace detail {
inline double cross(double ox, double oy, double ax, double ay, double bx, double by) {
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

inline bool segments_intersect(const std::array<double, 2>& p1, const std::array<double, 2>& p2,
                               const std::array<double, 2>& q1, const std::array<double, 2>& q2) {
    double d1 = cross(q1[0], q1[1], q2[0], q2[1], p1[0], p1[1]);
    double d2 = cross(q1[0], q1[1], q2[0], q2[1], p2[0], p2[1]);
    double d3 = cross(p1[0], p1[1], p2[0], p2[1], q1[0], q1[1]);
    double d4 = cross(p1[0], p1[1], p2[0], p2[1], q2[0], q2[1]);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}
}  // namespace detail

inline Region make_polygon(std::vector<std::array<double, 2>> pts) {
    size_t n = pts.size();
    if (n < 3) throw ConfigError("region.polygon: need at least 3 vertices");
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (detail::segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]))
                throw ConfigError("region.polygon: edges must not cross");
        }
    }
    Region r;
    r.kind = RegionKind::Polygon;
    r.pts = std::move(pts);
    return r;
}

inline BBox bbox(const Region& r) {
    switch (r.kind) {
        case RegionKind::Rect: return {r.x1, r.x2, r.y1, r.y2};
        case RegionKind::Disc: return {r.cx - r.R, r.cx + r.R, r.cy - r.R, r.cy + r.R};
        case RegionKind::Polygon: {
            BBox b{r.pts[0][0], r.pts[0][0], r.pts[0][1], r.pts[0][1]};
            for (const auto& p : r.pts) {
                b.xlo = std::min(b.xlo, p[0]);
                b.xhi = std::max(b.xhi, p[0]);
                b.ylo = std::min(b.ylo, p[1]);
                b.yhi = std::max(b.yhi, p[1]);
            }
            return b;
        }
    }
    throw NumericsError("region: unknown kind");
}

inline bool region_contains(const Region& r, double x, double y) {
    switch (r.kind) {
        case RegionKind::Rect: return x >= r.x1 && x <= r.x2 && y >= r.y1 && y <= r.y2;
        case RegionKind::Disc: return (x - r.cx) * (x - r.cx) + (y - r.cy) * (y - r.cy) <= r.R * r.R;
        case RegionKind::Polygon: {
            bool in = false;
            size_t n = r.pts.size();
            for (size_t i = 0, j = n - 1; i < n; j = i++) {
                double xi = r.pts[i][0], yi = r.pts[i][1];
                double xj = r.pts[j][0], yj = r.pts[j][1];
                if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) in = !in;
            }
            return in;
        }
    }
    throw NumericsError("region: unknown kind");
}

// Maximal intervals of {y : (x,y) in region}, sorted.
inline std::vector<std::array<double, 2>> vertical_section(const Region& r, double x) {
    std::vector<std::array<double, 2>> out;
    switch (r.kind) {
        case RegionKind::Rect:
            if (x >= r.x1 && x <= r.x2) out.push_back({r.y1, r.y2});
            return out;
        case RegionKind::Disc: {
            double s = r.R * r.R - (x - r.cx) * (x - r.cx);
            if (s > 0.0) {
                double h = std::sqrt(s);
                out.push_back({r.cy - h, r.cy + h});
            }
            return out;
        }
        case RegionKind::Polygon: {
            size_t n = r.pts.size();
            for (const auto& p : r.pts)
                if (p[0] == x) x += 1e-12 * (1.0 + std::abs(x));
            std::vector<double> ys;
            for (size_t i = 0, j = n - 1; i < n; j = i++) {
                double xi = r.pts[i][0], xj = r.pts[j][0];
                if ((xi < x) == (xj < x)) continue;
                double t = (x - xj) / (xi - xj);
                ys.push_back(r.pts[j][1] + t * (r.pts[i][1] - r.pts[j][1]));
            }
            std::sort(ys.begin(), ys.end());
            for (size_t i = 0; i + 1 < ys.size(); i += 2) out.push_back({ys[i], ys[i + 1]});
            return out;
        }
    }
    throw NumericsError("region: unknown kind");
}

// Longest vertical segment contained in the region restricted to {x > s}.
inline double c_minus_clipped(const Region& r, double s) {
    switch (r.kind) {
        case RegionKind::Rect:
            return r.x2 > s ? r.y2 - r.y1 : 0.0;
        case RegionKind::Disc: {
            if (r.cx + r.R <= s) return 0.0;
            double xc = std::max(r.cx, s);
            double q = r.R * r.R - (xc - r.cx) * (xc - r.cx);
            return q > 0.0 ? 2.0 * std::sqrt(q) : 0.0;
        }
        case RegionKind::Polygon: {
            BBox b = bbox(r);
            double lo = std::max(b.xlo, s);
            if (lo >= b.xhi) return 0.0;
            const int nsweep = 8192;
            double best = 0.0;
            for (int i = 0; i <= nsweep; ++i) {
                double x = lo + (b.xhi - lo) * i / nsweep;
                for (const auto& iv : vertical_section(r, x)) best = std::max(best, iv[1] - iv[0]);
            }
            return best;
        }
    }
    throw NumericsError("region: unknown kind");
}

inline double c_minus(const Region& r) {
    return c_minus_clipped(r, -std::numeric_limits<double>::infinity());
}

inline bool clipped_empty(const Region& r, double s) {
    return bbox(r).xhi <= s;
}

// Clip a polygon against the halfplane {x >= s}.
inline std::vector<std::array<double, 2>> clip_polygon_halfplane(
    const std::vector<std::array<double, 2>>& pts, double s) {
    std::vector<std::array<double, 2>> out;
    size_t n = pts.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& cur = pts[i];
        const auto& prev = pts[j];
        bool cin = cur[0] >= s, pin = prev[0] >= s;
        if (cin != pin) {
            double t = (s - prev[0]) / (cur[0] - prev[0]);
            out.push_back({s, prev[1] + t * (cur[1] - prev[1])});
        }
        if (cin) out.push_back(cur);
    }
    return out;
}

inline double polygon_area(const std::vector<std::array<double, 2>>& pts) {
    double a = 0.0;
    size_t n = pts.size();
    for (size_t i = 0, j = n ? n - 1 : 0; i < n; j = i++)
        a += pts[j][0] * pts[i][1] - pts[i][0] * pts[j][1];
    return 0.5 * std::abs(a);
}

inline double area_clipped(const Region& r, double s) {
    switch (r.kind) {
        case RegionKind::Rect: {
            double lo = std::max(r.x1, s);
            return lo < r.x2 ? (r.x2 - lo) * (r.y2 - r.y1) : 0.0;
        }
        case RegionKind::Disc:
            return disc_segment_area(r.R, s - r.cx);
        case RegionKind::Polygon:
            return polygon_area(clip_polygon_halfplane(r.pts, s));
    }
    throw NumericsError("region: unknown kind");
}

inline double region_area(const Region& r) {
    return area_clipped(r, -std::numeric_limits<double>::infinity());
}

// sup over region intersect {x >= s} of distance to (px, py); 0 if the clip is empty.
inline double max_dist_clipped(const Region& r, double s, double px, double py) {
    if (clipped_empty(r, s)) return 0.0;
    switch (r.kind) {
        case RegionKind::Rect: {
            double lo = std::max(r.x1, s);
            double best = 0.0;
            for (double x : {lo, r.x2})
                for (double y : {r.y1, r.y2}) best = std::max(best, std::hypot(x - px, y - py));
            return best;
        }
        case RegionKind::Disc: {
            double d = s - r.cx;
            double best = 0.0;
            if (d < r.R && d > -r.R) {
                double h = std::sqrt(r.R * r.R - d * d);
                best = std::max(std::hypot(s - px, r.cy - h - py), std::hypot(s - px, r.cy + h - py));
            }
            double dc = std::hypot(r.cx - px, r.cy - py);
            double fx, fy;
            if (dc == 0.0) {
                fx = r.cx + r.R;
                fy = r.cy;
            } else {
                fx = r.cx + r.R * (r.cx - px) / dc;
                fy = r.cy + r.R * (r.cy - py) / dc;
            }
            if (fx >= s) best = std::max(best, std::hypot(fx - px, fy - py));
            return best;
        }
        case RegionKind::Polygon: {
            auto clipped = clip_polygon_halfplane(r.pts, s);
            double best = 0.0;
            for (const auto& p : clipped) best = std::max(best, std::hypot(p[0] - px, p[1] - py));
            return best;
        }
    }
    throw NumericsError("region: unknown kind");
}

inline double max_dist(const Region& r, double px, double py) {
    return max_dist_clipped(r, -std::numeric_limits<double>::infinity(), px, py);
}

}  // namespace gapcount
