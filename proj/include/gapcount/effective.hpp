#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gapcount/errors.hpp"
#include "gapcount/fiber.hpp"
#include "gapcount/field.hpp"
#include "gapcount/lapack.hpp"
#include "gapcount/potential.hpp"
#include "gapcount/quadrature.hpp"

namespace gapcount {

struct KGrid {
    double kmin = 0.0;
    double dk = 0.0;
    int nk = 0;
    double k(int i) const { return kmin + dk * i; }
    double kmax() const { return k(nk - 1); }
};

// Truncation level of the symbol used for grid sizing, per decay family.
inline double kgrid_level(const PotentialV& V, double lambda_min) {
    if (V.kind() == "indicator") return 0.0;
    if (V.kind() == "gauss") return 1e-6 * V.sup();
    return 0.5 * lambda_min;
}

// Momentum grid sized so the symbol's xi-oscillations are resolved (dk rule)
// and every state that can contribute to the count is covered (k range rule).
// Overrides <= 0 or NaN mean "apply the rule".
inline KGrid make_kgrid(const PotentialB& pot, const PotentialV& V, int j, double lambda_min,
                        double dk_override = 0.0, double kmin_override = std::nan(""),
                        double kmax_override = std::nan("")) {
    if (!(lambda_min > 0.0)) throw ConfigError("lambda_grid: smallest lambda must be positive");
    double level = kgrid_level(V, lambda_min);
    double xi_max = V.xi_extent(level);
    double dk = dk_override > 0.0 ? dk_override : (M_PI / 4.0) / std::max(xi_max, 1e-6);
    double Bp = pot.B_plus();

    double kmin, kmax;
    double xp = pot.x_plus();
    if (!std::isfinite(xp)) xp = 0.0;
    if (V.kind() == "power-law") {
        const auto& P = static_cast<const PowerLawV&>(V);
        double drop = pot.B_plus() - pot.B_minus();
        double r_block = drop > 0.0 && drop < 1.0
                             ? std::sqrt(std::pow(drop, -2.0 / P.exponent()) - 1.0)
                             : 0.0;
        kmin = pot.b(P.center_x() - r_block - 6.0 / std::sqrt(Bp));
        double r_cov = std::sqrt(std::pow(lambda_min, -2.0 / P.exponent()) - 1.0);
        kmax = pot.b(P.center_x() + r_cov + 6.0 / std::sqrt(Bp));
    } else {
        double xlo, xhi;
        if (!V.x_interval(level, xlo, xhi))
            throw ConfigError("potential: empty support at the truncation level");
        kmin = pot.b(xp) - 6.0 / std::sqrt(Bp) - (xhi - xlo);
        // States centered past the support keep contributing while their
        // Gaussian tails can lift them by more than lambda_min.
        double strip = std::sqrt(std::max(std::abs(std::log(lambda_min)), 1.0) / Bp);
        kmax = pot.b(xhi + strip + 6.0 / std::sqrt(Bp));
    }
    if (std::isfinite(kmin_override)) kmin = kmin_override;
    if (std::isfinite(kmax_override)) {
        kmax = kmax_override;
    } else {
        // Extend until the band has pressed against its supremum well below
        // the smallest lambda resolved.  The measured gap bottoms out at the
        // discretization residual, so a stalled gap also terminates.
        double target = 0.1 * lambda_min;
        double limit = kmax + 50.0 / std::sqrt(Bp);
        double sup = band_supremum(pot, j);
        double prev = sup - band_value(pot, kmax, 1200, j, true);
        while (prev >= target) {
            double next = kmax + 16.0 * dk;
            if (next > limit)
                throw NumericsError("k grid: band gap did not close within the extension window");
            double cur = sup - band_value(pot, next, 1200, j, true);
            kmax = next;
            if (cur >= 0.95 * prev) break;
            prev = cur;
        }
    }
    if (!(kmax > kmin)) throw ConfigError("k grid: empty range");
    KGrid g;
    g.kmin = kmin;
    g.dk = dk;
    g.nk = static_cast<int>(std::ceil((kmax - kmin) / dk)) + 1;
    return g;
}

struct EffectiveModel {
    KGrid grid;
    int j = 1;
    double Eplus = 0.0;
    std::vector<double> E;  // band values on the grid
    std::vector<double> M;  // quantized symbol, dense symmetric nk x nk
};

// Matrix of the anti-Wick quantization of V in the band-j frame:
// M_il = dk/(2 pi) * int Phi_i(x) Phi_l(x) [int V(x,.) cos((k_i-k_l) .)] dx.
inline std::vector<double> antiwick_kernel(const PotentialB& pot, const PotentialV& V,
                                           const KGrid& grid, int j, double lambda_min,
                                           int xpanels_mult = 1) {
    const int nk = grid.nk;
    const double Bp = pot.B_plus();
    const double rt = std::sqrt(Bp);
    const double amp = std::pow(Bp, 0.25);

    std::vector<double> centers(nk);
    for (int i = 0; i < nk; ++i) centers[i] = pot.binv(grid.k(i));

    double level = kgrid_level(V, lambda_min);
    double vlo, vhi;
    if (!V.x_interval(level, vlo, vhi))
        throw ConfigError("potential: empty support at the truncation level");
    double marg = 6.0 * std::sqrt(2.0 * j - 1.0) / rt;
    double qlo = std::max(vlo, centers.front() - marg);
    double qhi = std::min(vhi, centers.back() + marg);
    if (!(qhi > qlo)) throw ConfigError("k grid: states do not reach the potential support");

    int npanels = std::max(1, static_cast<int>(std::ceil((qhi - qlo) / (1.4 / rt)))) *
                  std::max(1, xpanels_mult);
    PanelRule q = composite_gl(qlo, qhi, npanels, 12);
    const int nq = static_cast<int>(q.x.size());

    // P[i*nq + r] = Phi_i(x_r), Pw additionally carries the quadrature weight.
    std::vector<double> P(static_cast<size_t>(nk) * nq), Pw(static_cast<size_t>(nk) * nq);
    for (int i = 0; i < nk; ++i)
        for (int r = 0; r < nq; ++r) {
            double v = amp * hermite_phi(j, rt * (q.x[r] - centers[i]));
            P[static_cast<size_t>(i) * nq + r] = v;
            Pw[static_cast<size_t>(i) * nq + r] = v * q.w[r];
        }

    std::vector<double> M(static_cast<size_t>(nk) * nk, 0.0);
    const double pref = grid.dk / (2.0 * M_PI);
    const double tol = 1e-16 * (1.0 + V.sup());
    std::vector<double> fx(nq);
    int quiet = 0;
    for (int d = 0; d < nk; ++d) {
        double qq = d * grid.dk;
        for (int r = 0; r < nq; ++r) fx[r] = V.xi_integral(qq, q.x[r]);
        double vmax = 0.0;
        for (int i = 0; i + d < nk; ++i) {
            const double* a = &Pw[static_cast<size_t>(i) * nq];
            const double* b = &P[static_cast<size_t>(i + d) * nq];
            double s = 0.0;
            for (int r = 0; r < nq; ++r) s += a[r] * fx[r] * b[r];
            s *= pref;
            M[static_cast<size_t>(i) * nk + (i + d)] = s;
            M[static_cast<size_t>(i + d) * nk + i] = s;
            vmax = std::max(vmax, std::abs(s));
        }
        if (vmax < tol)
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 3 && qq > 8.0) break;
    }
    return M;
}

inline EffectiveModel build_effective_model(const PotentialB& pot, const PotentialV& V,
                                            const KGrid& grid, int j, double lambda_min,
                                            int n_fiber, int xpanels_mult = 1) {
    EffectiveModel m;
    m.grid = grid;
    m.j = j;
    m.Eplus = band_supremum(pot, j);
    m.E.resize(grid.nk);
    for (int i = 0; i < grid.nk; ++i) m.E[i] = band_value(pot, grid.k(i), n_fiber, j, true);
    m.M = antiwick_kernel(pot, V, grid, j, lambda_min, xpanels_mult);
    return m;
}

inline double gap_width(const PotentialB& pot, int j) {
    return pot.B_minus() * (2 * j + 1) - pot.B_plus() * (2 * j - 1);
}

// Eigenvalues of diag(E) + c M once, then one threshold scan per lambda.
inline std::vector<int> effective_count(const EffectiveModel& m, const PotentialB& pot,
                                        const std::vector<double>& lambdas, double c) {
    double gw = gap_width(pot, m.j);
    for (double l : lambdas)
        if (!(l > 0.0) || !(l < gw))
            throw ConfigError("lambda_grid: each lambda must lie in (0, gap width)");
    const int n = m.grid.nk;
    std::vector<double> a(m.M.size());
    for (size_t t = 0; t < a.size(); ++t) a[t] = c * m.M[t];
    for (int i = 0; i < n; ++i) a[static_cast<size_t>(i) * n + i] += m.E[i];
    std::vector<double> w = sym_eigenvalues(a, n);
    std::vector<int> out(lambdas.size());
    for (size_t t = 0; t < lambdas.size(); ++t) {
        double thr = m.Eplus + lambdas[t] + 1e-12;
        out[t] = static_cast<int>(w.end() - std::upper_bound(w.begin(), w.end(), thr));
    }
    return out;
}

struct CountingCurve {
    std::vector<double> lambdas;
    std::vector<int> lower, upper;
};

inline CountingCurve counting_curve(const EffectiveModel& m, const PotentialB& pot,
                                    const std::vector<double>& lambdas, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0)) throw ConfigError("delta: need 0 < delta < 1");
    CountingCurve c;
    c.lambdas = lambdas;
    c.lower = effective_count(m, pot, lambdas, 1.0 - delta);
    c.upper = effective_count(m, pot, lambdas, 1.0 + delta);
    return c;
}

struct FinitenessProbe {
    bool constant = false;
    int terminal_count = 0;
};

// The corridor count is finite iff the upper curve freezes as lambda drops;
// probe the last two decades at the small end.
inline FinitenessProbe finiteness_probe(const CountingCurve& c) {
    if (c.lambdas.empty()) throw ConfigError("lambda_grid: empty");
    double lmin = *std::min_element(c.lambdas.begin(), c.lambdas.end());
    FinitenessProbe p;
    bool first = true;
    int ref = 0;
    bool ok = true;
    for (size_t t = 0; t < c.lambdas.size(); ++t) {
        if (c.lambdas[t] > 100.0 * lmin) continue;
        if (first) {
            ref = c.upper[t];
            first = false;
        } else if (c.upper[t] != ref) {
            ok = false;
        }
    }
    p.constant = !first && ok;
    p.terminal_count = ref;
    return p;
}

}  // namespace gapcount
