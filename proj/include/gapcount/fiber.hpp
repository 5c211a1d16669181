#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "gapcount/errors.hpp"
#include "gapcount/field.hpp"
#include "gapcount/hermite.hpp"
#include "gapcount/tridiag.hpp"

namespace gapcount {

struct Grid1D {
    double L;
    int n;
    double h() const { return 2.0 * L / (n + 1); }
    double x(int i) const { return -L + h() * (i + 1); }  // interior points, Dirichlet at +-L
};

// Dirichlet truncation radius: quadratic confinement keeps the error
// exponentially small beyond the turning points of band j_max.
inline double margin_rule(double Bm, double Bp, int jmax) {
    return std::max(12.0 / std::sqrt(Bm), 12.0 * std::sqrt(2.0 * jmax + 1.0) / std::sqrt(Bp));
}

inline Grid1D fiber_grid(const PotentialB& pot, double k, int n, int jmax) {
    double L = std::abs(pot.binv(k)) + margin_rule(pot.B_minus(), pot.B_plus(), jmax);
    return Grid1D{L, n};
}

// h(k) = -d^2/dx^2 + (b(x)-k)^2 on the grid, 3-point stencil.
inline Tridiag assemble_fiber(const PotentialB& pot, const Grid1D& grid, double k) {
    double need = std::abs(pot.binv(k)) + 6.0 / std::sqrt(pot.B_plus());
    if (grid.L < need)
        throw ConfigError("fiber grid: L below the truncation-margin rule for this k");
    const int n = grid.n;
    if (n < 3) throw ConfigError("fiber grid: n must be >= 3");
    double h = grid.h();
    Tridiag T;
    T.d.resize(n);
    T.e.assign(n - 1, -1.0 / (h * h));
    for (int i = 0; i < n; ++i) {
        double w = pot.b(grid.x(i)) - k;
        T.d[i] = 2.0 / (h * h) + w * w;
    }
    return T;
}

struct BandEigen {
    double E;
    std::vector<double> vec;  // unit norm, sign-fixed
};

inline BandEigen eigen_band(const Tridiag& T, int j) {
    BandEigen out;
    out.E = eigen_k(T, j);
    out.vec = inverse_iteration(T, out.E);
    return out;
}

// Plain finite-difference band value; the Richardson variant combines (n, n/2)
// as (4 E_n - E_{n/2}) / 3 for accuracy-critical paths.
inline double band_value(const PotentialB& pot, double k, int n, int j, bool richardson) {
    Grid1D g = fiber_grid(pot, k, n, j);
    double En = eigen_k(assemble_fiber(pot, g, k), j);
    if (!richardson) return En;
    Grid1D g2{g.L, n / 2};
    double Eh = eigen_k(assemble_fiber(pot, g2, k), j);
    return (4.0 * En - Eh) / 3.0;
}

inline double band_supremum(const PotentialB& pot, int j) { return pot.B_plus() * (2 * j - 1); }

struct BandTable {
    std::vector<double> k_grid;
    int j_max = 0;
    int n_fiber = 0;
    bool richardson = false;
    // bands[j-1][ik]
    std::vector<std::vector<double>> bands;
    // vectors[j-1][ik] on grids[ik] (only when built with vectors)
    std::vector<std::vector<std::vector<double>>> vectors;
    std::vector<Grid1D> grids;

    double E(int j, int ik) const { return bands[j - 1][ik]; }
};

inline BandTable build_band_table(const PotentialB& pot, const std::vector<double>& ks, int jmax,
                                  int n, bool richardson, bool with_vectors) {
    BandTable t;
    t.k_grid = ks;
    t.j_max = jmax;
    t.n_fiber = n;
    t.richardson = richardson;
    t.bands.assign(jmax, std::vector<double>(ks.size()));
    if (with_vectors) {
        t.vectors.assign(jmax, std::vector<std::vector<double>>(ks.size()));
        t.grids.resize(ks.size());
    }
    for (size_t ik = 0; ik < ks.size(); ++ik) {
        double k = ks[ik];
        Grid1D g = fiber_grid(pot, k, n, jmax);
        Tridiag T = assemble_fiber(pot, g, k);
        for (int j = 1; j <= jmax; ++j) {
            double Eraw = eigen_k(T, j);
            if (with_vectors) t.vectors[j - 1][ik] = inverse_iteration(T, Eraw);
            double E = Eraw;
            if (richardson) {
                Grid1D g2{g.L, n / 2};
                double Eh = eigen_k(assemble_fiber(pot, g2, k), j);
                E = (4.0 * Eraw - Eh) / 3.0;
            }
            t.bands[j - 1][ik] = E;
        }
        if (with_vectors) t.grids[ik] = g;
        for (int j = 1; j <= jmax; ++j) {
            double E = t.bands[j - 1][ik];
            double lo = pot.B_minus() * (2 * j - 1), hi = band_supremum(pot, j);
            double tol = (richardson ? 1e-5 : 1e-2) * (1.0 + std::abs(hi));
            if (E < lo - tol || E > hi + tol)
                throw NumericsError("band table: confinement bound violated at k=" + std::to_string(k));
            if (j > 1 && E <= t.bands[j - 2][ik])
                throw NumericsError("band table: band ordering violated");
        }
    }
    return t;
}

// Grid samples of B_+^{1/4} phi_j(sqrt(B_+)(x - binv(k))), unit grid norm.
inline std::vector<double> oscillator_state(int j, double k, const PotentialB& pot, const Grid1D& grid) {
    double c = pot.binv(k);
    if (c <= -grid.L || c >= grid.L) throw ConfigError("oscillator_state: center outside the grid");
    double rt = std::sqrt(pot.B_plus());
    std::vector<double> v(grid.n);
    for (int i = 0; i < grid.n; ++i) v[i] = hermite_phi(j, rt * (grid.x(i) - c));
    double nv = norm2(v);
    if (!(nv > 0.0)) throw NumericsError("oscillator_state: zero norm on the grid");
    for (auto& x : v) x /= nv;
    int imax = 0;
    for (int i = 1; i < grid.n; ++i)
        if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (v[imax] < 0.0)
        for (auto& x : v) x = -x;
    return v;
}

// ||pi - pi_inf|| for rank-one projections onto unit vectors u, v.
inline double projection_distance(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) throw ConfigError("projection_distance: dimension mismatch");
    double dot = 0.0;
    for (size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
    double s = 1.0 - dot * dot;
    return std::sqrt(std::max(0.0, s));
}

// Theorem-style ratio ||pi - pi_inf|| / sqrt(gap); nullopt marks gap saturation.
inline std::optional<double> convergence_ratio(const BandTable& t, const PotentialB& pot, int j, int ik) {
    double gap = band_supremum(pot, j) - t.E(j, ik);
    if (gap < 1e-14) return std::nullopt;
    if (t.vectors.empty()) throw ConfigError("convergence_ratio: table built without vectors");
    std::vector<double> osc = oscillator_state(j, t.k_grid[ik], pot, t.grids[ik]);
    return projection_distance(t.vectors[j - 1][ik], osc) / std::sqrt(gap);
}

// Min-max comparison E_j(k, b1) <= E_j(b2(b1^{-1}(k)), b2) for B1 <= B2.
inline bool comparison_check(const PotentialB& p1, const PotentialB& p2, double k, int j, int n,
                             double slack = 1e-8) {
    double x = p1.binv(k);
    if (p1.B_minus() > p2.B_minus() + 1e-12 || p1.B_plus() > p2.B_plus() + 1e-12)
        throw ConfigError("comparison_check: requires B1 <= B2");
    double a1, b1, a2, b2;
    p1.field().variable_span(a1, b1);
    p2.field().variable_span(a2, b2);
    double lo = std::min(a1, a2), hi = std::max(b1, b2);
    for (int i = 0; i <= 64; ++i) {
        double s = lo + (hi - lo) * i / 64.0;
        if (p1.field().B(s) > p2.field().B(s) + 1e-12)
            throw ConfigError("comparison_check: requires B1 <= B2");
    }
    double E1 = band_value(p1, k, n, j, true);
    double E2 = band_value(p2, p2.b(x), n, j, true);
    return E1 <= E2 + slack + 1e-6 * std::abs(E2);
}

}  // namespace gapcount
