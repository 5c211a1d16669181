#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gapcount/errors.hpp"

namespace gapcount {

// Symmetric tridiagonal (d: diagonal, e: off-diagonal, e.size() == d.size()-1).
struct Tridiag {
    std::vector<double> d;
    std::vector<double> e;
    int n() const { return static_cast<int>(d.size()); }
};

// Number of eigenvalues strictly below x (Sturm sequence with underflow guard).
inline int sturm_count(const Tridiag& T, double x) {
    const int n = T.n();
    int cnt = 0;
    double q = T.d[0] - x;
    if (q < 0.0) ++cnt;
    for (int i = 1; i < n; ++i) {
        double den = q;
        if (std::abs(den) < 1e-300) den = den < 0.0 ? -1e-300 : 1e-300;
        q = T.d[i] - x - T.e[i - 1] * T.e[i - 1] / den;
        if (q < 0.0) ++cnt;
    }
    return cnt;
}

inline void gershgorin(const Tridiag& T, double& lo, double& hi) {
    const int n = T.n();
    lo = hi = T.d[0];
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(T.e[i - 1]);
        if (i < n - 1) r += std::abs(T.e[i]);
        lo = std::min(lo, T.d[i] - r);
        hi = std::max(hi, T.d[i] + r);
    }
}

// j-th smallest eigenvalue, j 1-based; bisection to abs_tol.
inline double eigen_k(const Tridiag& T, int j, double abs_tol = 1e-12) {
    if (j < 1 || j > T.n()) throw ConfigError("eigen_k: band index out of range");
    double lo, hi;
    gershgorin(T, lo, hi);
    for (int it = 0; it < 200 && hi - lo > abs_tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (sturm_count(T, mid) >= j)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Tridiagonal solve (T - shift I) v = rhs with partial pivoting; in-place rhs.
inline void shifted_solve(const Tridiag& T, double shift, std::vector<double>& rhs) {
    const int n = T.n();
    std::vector<double> a(n), b(n, 0.0), c(n, 0.0);
    for (int i = 0; i < n; ++i) a[i] = T.d[i] - shift;
    for (int i = 0; i + 1 < n; ++i) b[i] = T.e[i];
    std::vector<double> sub(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) sub[i + 1] = T.e[i];
    for (int i = 0; i + 1 < n; ++i) {
        if (std::abs(sub[i + 1]) > std::abs(a[i])) {
            std::swap(a[i], sub[i + 1]);
            std::swap(b[i], a[i + 1]);
            std::swap(c[i], b[i + 1]);
            std::swap(rhs[i], rhs[i + 1]);
        }
        double piv = a[i];
        if (std::abs(piv) < 1e-300) piv = piv < 0.0 ? -1e-300 : 1e-300;
        double m = sub[i + 1] / piv;
        a[i + 1] -= m * b[i];
        b[i + 1] -= m * c[i];
        rhs[i + 1] -= m * rhs[i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        if (i + 1 < n) s -= b[i] * rhs[i + 1];
        if (i + 2 < n) s -= c[i] * rhs[i + 2];
        double piv = a[i];
        if (std::abs(piv) < 1e-300) piv = piv < 0.0 ? -1e-300 : 1e-300;
        rhs[i] = s / piv;
    }
}

inline double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Eigenvector by inverse iteration at a converged eigenvalue; deterministic
// seeded start, sign fixed so the largest-magnitude entry is positive.
inline std::vector<double> inverse_iteration(const Tridiag& T, double lambda, int sweeps = 2) {
    const int n = T.n();
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = u(rng);
    double nv = norm2(v);
    for (int i = 0; i < n; ++i) v[i] /= nv;
    for (int s = 0; s < sweeps; ++s) {
        shifted_solve(T, lambda, v);
        nv = norm2(v);
        if (!(nv > 0.0) || !std::isfinite(nv)) throw NumericsError("inverse_iteration: breakdown");
        for (int i = 0; i < n; ++i) v[i] /= nv;
    }
    double resid = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = T.d[i] * v[i] - lambda * v[i];
        if (i > 0) r += T.e[i - 1] * v[i - 1];
        if (i + 1 < n) r += T.e[i] * v[i + 1];
        resid += r * r;
        scale = std::max(scale, std::abs(T.d[i]));
    }
    resid = std::sqrt(resid);
    if (resid > 1e-6 * std::max(1.0, scale))
        throw NumericsError("inverse_iteration: residual " + std::to_string(resid) + " too large");
    int imax = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (v[imax] < 0.0)
        for (int i = 0; i < n; ++i) v[i] = -v[i];
    return v;
}

}  // namespace gapcount
