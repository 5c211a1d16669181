#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gapcount/errors.hpp"
#include "gapcount/potential.hpp"
#include "gapcount/region.hpp"

namespace gapcount {

// kappa(s) = sup{t > 0 : t ln t < s}, the root of t ln t = s on [1, inf).
inline double kappa(double s) {
    if (s < 0.0) throw ConfigError("kappa: argument must be nonnegative");
    if (s == 0.0) return 1.0;
    double lo = 1.0, hi = s + 3.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid * std::log(mid) < s)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace detail {
inline double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}
}  // namespace detail

// Minimal enclosing radius of the clipped region over discs centered at x = cx.
inline double min_radius_at(const Region& omega, double a, double cx, double* eta_out = nullptr) {
    BBox b = bbox(omega);
    auto f = [&](double eta) { return max_dist_clipped(omega, a, cx, eta); };
    double tol = 1e-11 * (1.0 + b.diam());
    double eta = b.ylo == b.yhi ? b.ylo : detail::golden_min(f, b.ylo, b.yhi, tol);
    if (eta_out) *eta_out = eta;
    return f(eta);
}

// inf over discs enclosing omega intersect {x > a} of R kappa((cx - a)_+ / (e R)).
inline double c_plus(const Region& omega, double a) {
    if (!std::isfinite(a)) throw ConfigError("c_plus: wall position must be finite");
    if (clipped_empty(omega, a)) return 0.0;
    BBox b = bbox(omega);
    double span = std::max(b.diam(), 1e-9);
    double lo = std::min(b.xlo, a) - span, hi = b.xhi + span;
    auto objective = [&](double cx) {
        double R = min_radius_at(omega, a, cx);
        if (!(R > 0.0)) return 0.0;
        return R * kappa(std::max(cx - a, 0.0) / (M_E * R));
    };
    const int ngrid = 200;
    double best_cx = lo, best = objective(lo);
    for (int i = 1; i <= ngrid; ++i) {
        double cx = lo + (hi - lo) * i / ngrid;
        double v = objective(cx);
        if (v < best) {
            best = v;
            best_cx = cx;
        }
    }
    double step = (hi - lo) / ngrid;
    double refined = detail::golden_min(objective, best_cx - step, best_cx + step, 1e-10 * (1.0 + span));
    return std::min(best, objective(refined));
}

struct CorridorConstants {
    double C_minus = 0.0;
    double C_plus = 0.0;
    bool lower_degenerate = false;
};

// Sandwich constants for the sqrt-log counting law in the spectral corridor.
inline CorridorConstants corridor_constants(const Region& lower, const Region& upper, double Bp,
                                            double xplus) {
    if (!(Bp > 0.0)) throw ConfigError("field.B_plus: must be positive");
    if (!std::isfinite(xplus))
        throw ConfigError("field: corridor constants need a finite saturation point");
    CorridorConstants c;
    double cm = c_minus_clipped(lower, xplus);
    if (cm <= 0.0) {
        c.lower_degenerate = true;
        c.C_minus = 0.0;
    } else {
        c.C_minus = std::sqrt(Bp) * cm / (2.0 * M_PI);
    }
    c.C_plus = M_E * std::sqrt(Bp) * c_plus(upper, xplus);
    return c;
}

// Semiclassical phase-space volume (2 pi)^-1 |{V > lambda, x > s}|, exact per family.
inline double volume_N(double lambda, const PotentialV& V, double s) {
    if (!(lambda > 0.0)) throw ConfigError("lambda_grid: lambda must be positive");
    if (lambda >= V.sup()) return 0.0;
    const double inv2pi = 1.0 / (2.0 * M_PI);
    if (V.kind() == "indicator") {
        const auto& I = static_cast<const IndicatorV&>(V);
        return inv2pi * area_clipped(I.region(), s);
    }
    if (V.kind() == "gauss") {
        double xlo, xhi;
        V.x_interval(lambda, xlo, xhi);
        double r = 0.5 * (xhi - xlo);
        double cx = 0.5 * (xhi + xlo);
        return inv2pi * disc_segment_area(r, s - cx);
    }
    if (V.kind() == "power-law") {
        const auto& P = static_cast<const PowerLawV&>(V);
        double r = std::sqrt(std::pow(lambda, -2.0 / P.exponent()) - 1.0);
        return inv2pi * disc_segment_area(r, s - P.center_x());
    }
    throw ConfigError("potential: unknown kind for volume_N");
}

// Midpoint-counting comparison value on an n x n cell grid.
inline double volume_N_grid(double lambda, const PotentialV& V, double s, int n) {
    if (lambda >= V.sup()) return 0.0;
    double xlo, xhi;
    if (!V.x_interval(lambda, xlo, xhi)) return 0.0;
    xlo = std::max(xlo, s);
    if (!(xhi > xlo)) return 0.0;
    double ye = V.xi_extent(lambda);
    double ylo = -ye, yhi = ye;
    if (V.kind() == "indicator") {
        BBox b = bbox(static_cast<const IndicatorV&>(V).region());
        ylo = b.ylo;
        yhi = b.yhi;
    }
    double hx = (xhi - xlo) / n, hy = (yhi - ylo) / n;
    long hits = 0;
    for (int i = 0; i < n; ++i) {
        double x = xlo + hx * (i + 0.5);
        for (int j = 0; j < n; ++j)
            if (V.eval(x, ylo + hy * (j + 0.5)) > lambda) ++hits;
    }
    return hits * hx * hy / (2.0 * M_PI);
}

// lambda^{2/m} (N(lambda(1-eps)) - N(lambda(1+eps))), the scale-invariance probe.
inline double homogeneity_defect(const PowerLawV& V, double lambda, double s, double eps) {
    double lo = lambda * (1.0 - eps), hi = lambda * (1.0 + eps);
    return std::pow(lambda, 2.0 / V.exponent()) * (volume_N(lo, V, s) - volume_N(hi, V, s));
}

struct SqrtLogFit {
    double coefficient = 0.0;
    double residual_norm = 0.0;
    int points_used = 0;
    bool flagged = false;
};

// Least-squares slope of (count averages) against sqrt|ln lambda| over the
// deep-lambda third of the curve.
inline SqrtLogFit fit_sqrt_log(const std::vector<double>& lambdas, const std::vector<int>& lower,
                               const std::vector<int>& upper) {
    size_t n = lambdas.size();
    if (n == 0 || lower.size() != n || upper.size() != n)
        throw ConfigError("lambda_grid: fit inputs must be same nonempty length");
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        return std::abs(std::log(lambdas[a])) > std::abs(std::log(lambdas[b]));
    });
    size_t take = (n + 2) / 3;
    SqrtLogFit f;
    f.points_used = static_cast<int>(take);
    if (take < 5) f.flagged = true;
    double sgg = 0.0, sag = 0.0;
    for (size_t t = 0; t < take; ++t) {
        size_t i = idx[t];
        double g = std::sqrt(std::abs(std::log(lambdas[i])));
        double avg = 0.5 * (lower[i] + upper[i]);
        sgg += g * g;
        sag += avg * g;
    }
    if (sgg <= 0.0) {
        f.flagged = true;
        return f;
    }
    f.coefficient = sag / sgg;
    double r2 = 0.0;
    for (size_t t = 0; t < take; ++t) {
        size_t i = idx[t];
        double g = std::sqrt(std::abs(std::log(lambdas[i])));
        double avg = 0.5 * (lower[i] + upper[i]);
        r2 += (avg - f.coefficient * g) * (avg - f.coefficient * g);
    }
    f.residual_norm = std::sqrt(r2);
    if (f.coefficient == 0.0) f.flagged = true;
    return f;
}

struct VolumeRatioFit {
    std::vector<double> ratios;
    double terminal = 0.0;
    bool trend_ok = false;
};

// ratios count/(B_+ N); the trend asks |ratio - 1| to be nonincreasing along
// the given marks (ordered toward small lambda).
inline VolumeRatioFit fit_volume_ratio(const std::vector<double>& lambdas,
                                       const std::vector<double>& counts,
                                       const std::vector<double>& volumes, double Bp,
                                       std::vector<size_t> marks = {}) {
    size_t n = lambdas.size();
    if (n == 0 || counts.size() != n || volumes.size() != n)
        throw ConfigError("lambda_grid: ratio inputs must be same nonempty length");
    VolumeRatioFit f;
    f.ratios.resize(n);
    for (size_t i = 0; i < n; ++i) {
        if (!(volumes[i] > 0.0)) throw NumericsError("volume ratio: vanishing volume term");
        f.ratios[i] = counts[i] / (Bp * volumes[i]);
    }
    size_t imin = 0;
    for (size_t i = 1; i < n; ++i)
        if (lambdas[i] < lambdas[imin]) imin = i;
    f.terminal = f.ratios[imin];
    if (marks.empty()) {
        marks.resize(n);
        for (size_t i = 0; i < n; ++i) marks[i] = i;
        std::sort(marks.begin(), marks.end(),
                  [&](size_t a, size_t b) { return lambdas[a] > lambdas[b]; });
    }
    f.trend_ok = true;
    for (size_t t = 0; t + 1 < marks.size(); ++t) {
        if (marks[t] >= n || marks[t + 1] >= n) throw ConfigError("lambda_grid: trend mark out of range");
        double a = std::abs(f.ratios[marks[t]] - 1.0);
        double b = std::abs(f.ratios[marks[t + 1]] - 1.0);
        if (b > a + 1e-12) f.trend_ok = false;
    }
    return f;
}

}  // namespace gapcount
