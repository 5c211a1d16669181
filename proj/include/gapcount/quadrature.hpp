#pragma once

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "gapcount/errors.hpp"

namespace gapcount {

struct QuadRule {
    std::vector<double> x;  // nodes on [-1,1]
    std::vector<double> w;
};

// Gauss-Legendre nodes by Newton on P_n; nodes accurate to ~1e-15.
inline const QuadRule& gauss_legendre(int n) {
    static std::map<int, QuadRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw ConfigError("gauss_legendre: order must be >= 1");
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = t;
            for (int q = 2; q <= n; ++q) {
                double p2 = ((2 * q - 1) * t * p1 - (q - 1) * p0) / q;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        r.x[i] = -t;
        r.x[n - 1 - i] = t;
        double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        r.w[i] = wi;
        r.w[n - 1 - i] = wi;
    }
    return cache.emplace(n, std::move(r)).first->second;
}

// Composite rule over [a,b] with npanels equal panels of the given order.
struct PanelRule {
    std::vector<double> x;
    std::vector<double> w;
};

inline PanelRule composite_gl(double a, double b, int npanels, int order) {
    const QuadRule& g = gauss_legendre(order);
    PanelRule r;
    r.x.reserve(npanels * order);
    r.w.reserve(npanels * order);
    double pw = (b - a) / npanels;
    for (int p = 0; p < npanels; ++p) {
        double lo = a + p * pw;
        for (int i = 0; i < order; ++i) {
            r.x.push_back(lo + 0.5 * pw * (1.0 + g.x[i]));
            r.w.push_back(0.5 * pw * g.w[i]);
        }
    }
    return r;
}

}  // namespace gapcount
