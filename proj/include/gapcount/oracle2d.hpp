#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "gapcount/errors.hpp"
#include "gapcount/field.hpp"
#include "gapcount/lapack.hpp"
#include "gapcount/potential.hpp"

namespace gapcount {

// Dirichlet box centered at (cx, cy) with half-widths Lx, Ly and an
// nx * ny interior grid, x-major ordering.
struct Box2D {
    double cx = 0.0, cy = 0.0;
    double Lx = 0.0, Ly = 0.0;
    int nx = 0, ny = 0;
    double hx() const { return 2.0 * Lx / (nx + 1); }
    double hy() const { return 2.0 * Ly / (ny + 1); }
    double x(int i) const { return cx - Lx + hx() * (i + 1); }
    double y(int j) const { return cy - Ly + hy() * (j + 1); }
    int n() const { return nx * ny; }
};

inline void check_box(const Box2D& box, int cap = 4900) {
    if (box.nx < 2 || box.ny < 2) throw ConfigError("oracle.box: need nx, ny >= 2");
    if (!(box.Lx > 0.0) || !(box.Ly > 0.0)) throw ConfigError("oracle.box: half-widths must be positive");
    if (box.n() > cap)
        throw ConfigError("oracle.box: nx*ny exceeds the dense-solver cap of " + std::to_string(cap));
}

// Dense 2D discretization of (-i d/dy - b(x) + gauge_c)^2 - d^2/dx^2 + V with
// Peierls phases on the y-hops, column-major, both triangles filled.
inline std::vector<std::complex<double>> assemble_H(const PotentialB& pot, const PotentialV* V,
                                                    const Box2D& box, double gauge_c) {
    check_box(box);
    const int nx = box.nx, ny = box.ny, n = box.n();
    const double hx = box.hx(), hy = box.hy();
    const double ax = 1.0 / (hx * hx), ay = 1.0 / (hy * hy);
    std::vector<std::complex<double>> A(static_cast<size_t>(n) * n, 0.0);
    auto at = [&](int r, int c) -> std::complex<double>& {
        return A[static_cast<size_t>(c) * n + r];
    };
    for (int i = 0; i < nx; ++i) {
        double bt = pot.b(box.x(i)) - gauge_c;
        std::complex<double> hop = -std::exp(std::complex<double>(0.0, bt * hy)) * ay;
        for (int j = 0; j < ny; ++j) {
            int r = i * ny + j;
            double v = V ? V->eval(box.x(i), box.y(j)) : 0.0;
            at(r, r) = 2.0 * ax + 2.0 * ay + v;
            if (j + 1 < ny) {
                at(r + 1, r) = hop;
                at(r, r + 1) = std::conj(hop);
            }
            if (i + 1 < nx) {
                at(r + ny, r) = -ax;
                at(r, r + ny) = -ax;
            }
        }
    }
    return A;
}

inline double hermiticity_defect(const std::vector<std::complex<double>>& A, int n) {
    double worst = 0.0;
    for (int c = 0; c < n; ++c)
        for (int r = 0; r <= c; ++r)
            worst = std::max(worst, std::abs(A[static_cast<size_t>(c) * n + r] -
                                            std::conj(A[static_cast<size_t>(r) * n + c])));
    return worst;
}

inline std::vector<double> oracle_spectrum(const PotentialB& pot, const PotentialV* V,
                                           const Box2D& box, double gauge_c) {
    std::vector<std::complex<double>> A = assemble_H(pot, V, box, gauge_c);
    return herm_eigenvalues(A, box.n());
}

struct OracleCounts {
    int count_H = 0;
    int count_H0 = 0;
    int diff = 0;
};

// Eigenvalues strictly inside (a, b) for the perturbed and free spectra.
inline OracleCounts oracle_count(const std::vector<double>& sH, const std::vector<double>& sH0,
                                 double a, double b) {
    OracleCounts c;
    for (double w : sH)
        if (w > a && w < b) ++c.count_H;
    for (double w : sH0)
        if (w > a && w < b) ++c.count_H0;
    c.diff = std::max(0, c.count_H - c.count_H0);
    return c;
}

struct RefinementRow {
    Box2D box;
    std::vector<int> diffs;  // one per lambda
};

// Same counts across a family of boxes; agreement across rows is the
// discretization-stability evidence for the oracle.
inline std::vector<RefinementRow> refinement_study(const PotentialB& pot, const PotentialV& V,
                                                   const std::vector<Box2D>& boxes, double gauge_c,
                                                   double Eplus, double top,
                                                   const std::vector<double>& lambdas) {
    std::vector<RefinementRow> out;
    for (const auto& box : boxes) {
        std::vector<double> sH = oracle_spectrum(pot, &V, box, gauge_c);
        std::vector<double> sH0 = oracle_spectrum(pot, nullptr, box, gauge_c);
        RefinementRow row;
        row.box = box;
        for (double l : lambdas) row.diffs.push_back(oracle_count(sH, sH0, Eplus + l, top).diff);
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace gapcount
