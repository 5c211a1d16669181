// Acceptance gate: one line per criterion, exit status counts failures.
#include <gapcount/asympt.hpp>
#include <gapcount/config.hpp>
#include <gapcount/effective.hpp>
#include <gapcount/fiber.hpp>
#include <gapcount/field.hpp>
#include <gapcount/lapack.hpp>
#include <gapcount/oracle2d.hpp>
#include <gapcount/pipeline.hpp>
#include <gapcount/potential.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

using namespace gapcount;

namespace {

int failures = 0;

void report(int num, const char* label, bool pass) {
    std::printf("%s criterion-%02d %s\n", pass ? "PASS" : "FAIL", num, label);
    if (!pass) ++failures;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

std::vector<double> geomspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, double(i) / (n - 1));
    return v;
}

PotentialB constant_pot(double B) { return PotentialB(std::make_shared<ConstantField>(B)); }

PotentialB step_pot(double Bm, double Bp, double x0, double w) {
    return PotentialB(std::make_shared<SmoothStepField>(Bm, Bp, x0, w));
}

bool flat_ladder() {
    PotentialB pot = constant_pot(1.0);
    auto ks = linspace(-5.0, 5.0, 21);
    BandTable t = build_band_table(pot, ks, 3, 2000, true, false);
    for (int j = 1; j <= 3; ++j) {
        double target = 2.0 * j - 1.0;
        for (size_t ik = 0; ik < ks.size(); ++ik)
            if (std::abs(t.E(j, static_cast<int>(ik)) - target) > 1e-6 * target) return false;
    }
    return true;
}

bool strict_confinement() {
    PotentialB pot = step_pot(0.5, 1.0, 0.0, 0.05);
    auto ks = linspace(-1.0, 8.6, 200);
    BandTable t = build_band_table(pot, ks, 3, 1500, false, false);
    for (int j = 1; j <= 3; ++j) {
        double lo = pot.B_minus() * (2 * j - 1);
        double hi = band_supremum(pot, j);
        for (size_t ik = 0; ik < ks.size(); ++ik) {
            double E = t.E(j, static_cast<int>(ik));
            if (!(E > lo + 5e-3)) return false;
            if (!(E < hi - 1e-5)) return false;
        }
    }
    double terminal = band_supremum(pot, 1) - t.E(1, 199);
    return terminal > 0.0 && terminal < 1e-3;
}

bool projection_decay() {
    PotentialB pot = step_pot(0.5, 1.0, 0.0, 0.05);
    std::vector<double> ks = {1.3, 1.8385, 2.6};
    BandTable t = build_band_table(pot, ks, 1, 4000, true, true);
    std::vector<double> r;
    for (int ik = 0; ik < 3; ++ik) {
        auto v = convergence_ratio(t, pot, 1, ik);
        if (!v) return false;
        r.push_back(*v);
    }
    return r[0] > r[1] && r[1] > r[2] && r[2] < 0.1;
}

bool gap_gaussian_decay() {
    PotentialB pot = step_pot(0.5, 1.0, 0.0, 0.05);
    auto ks = linspace(2.1, 3.5, 12);
    double sup = band_supremum(pot, 1);
    // Least squares of log gap against {k^2, log k, 1}.
    double A[3][3] = {};
    double rhs[3] = {};
    for (double k : ks) {
        double gap = sup - band_value(pot, k, 4000, 1, true);
        if (!(gap > 0.0)) return false;
        double f[3] = {k * k, std::log(k), 1.0};
        double y = std::log(gap);
        for (int a = 0; a < 3; ++a) {
            rhs[a] += f[a] * y;
            for (int b = 0; b < 3; ++b) A[a][b] += f[a] * f[b];
        }
    }
    // Cramer solve for the k^2 coefficient.
    auto det3 = [](double m[3][3]) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    double D = det3(A);
    double A0[3][3];
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) A0[a][b] = (b == 0) ? rhs[a] : A[a][b];
    double alpha = det3(A0) / D;
    return alpha > -1.15 && alpha < -0.85;
}

bool antiwick_bounds() {
    PotentialB pot = constant_pot(1.0);
    auto eigs = [&](const PotentialV& V, double kmin, double dk, int nk, int mult) {
        KGrid g;
        g.kmin = kmin;
        g.dk = dk;
        g.nk = nk;
        auto M = antiwick_kernel(pot, V, g, 1, 1e-6, mult);
        auto w = sym_eigenvalues(M, g.nk);
        std::sort(w.begin(), w.end());
        return w;
    };
    {
        IndicatorV V(0.7, make_rect(-12.0, 12.0, -40.0, 40.0));
        auto w = eigs(V, -2.0, (M_PI / 4.0) / 40.0, 204, 1);
        if (!(w.front() > -1e-12)) return false;
        if (!(w.back() < 0.7 + 1e-10 && w.back() > 0.7 - 1e-4)) return false;
    }
    {
        GaussV V(0.3, 2.5, 0.0, 1.0);
        auto w = eigs(V, -0.5, (M_PI / 4.0) / 5.26, 55, 1);
        if (!(w.front() > -1e-12)) return false;
        if (!(w.back() < 0.3 && w.back() > 0.140 && w.back() < 0.158)) return false;
    }
    {
        IndicatorV V(0.3, make_rect(1.5, 3.5, 0.0, 10.0));
        auto w = eigs(V, -1.0, (M_PI / 4.0) / 10.0, 80, 1);
        if (!(w.front() > -1e-12)) return false;
        if (!(w.back() < 0.3 && w.back() > 0.115 && w.back() < 0.135)) return false;
        KGrid g;
        g.kmin = -1.0;
        g.dk = (M_PI / 4.0) / 10.0;
        g.nk = 80;
        auto M1 = antiwick_kernel(pot, V, g, 1, 1e-6, 1);
        auto M2 = antiwick_kernel(pot, V, g, 1, 1e-6, 2);
        for (size_t i = 0; i < M1.size(); ++i)
            if (std::abs(M1[i] - M2[i]) > 1e-10) return false;
    }
    return true;
}

bool corridor_vs_oracle() {
    PotentialB pot = step_pot(0.32, 0.4, -3.2, 0.03);
    GaussV V(0.35, 0.0, 0.0, 1.1);
    auto lambdas = geomspace(0.005, 0.4, 5);
    KGrid g = make_kgrid(pot, V, 1, lambdas.front());
    EffectiveModel m = build_effective_model(pot, V, g, 1, lambdas.front(), 2000, 1);
    CountingCurve c = counting_curve(m, pot, lambdas, 0.1);
    const std::vector<int> expect = {3, 2, 1, 0, 0};
    for (size_t i = 0; i < 5; ++i)
        if (c.lower[i] != expect[i] || c.upper[i] != expect[i]) return false;

    Box2D box{0.0, 0.0, 6.5, 7.0, 52, 94};
    double gauge = pot.b(0.0);
    auto sH = oracle_spectrum(pot, &V, box, gauge);
    auto sH0 = oracle_spectrum(pot, nullptr, box, gauge);
    double Eplus = band_supremum(pot, 1);
    double top = pot.B_minus() * 3.0;
    const std::vector<int> expect_diff = {2, 3, 2, 0, 0};
    for (size_t i = 0; i < 5; ++i) {
        OracleCounts oc = oracle_count(sH, sH0, Eplus + lambdas[i], top);
        if (oc.diff != expect_diff[i]) return false;
        if (oc.diff < c.lower[i] - 3 || oc.diff > c.upper[i] + 3) return false;
    }
    return true;
}

CountingCurve right_box_curve() {
    PotentialB pot = step_pot(0.5, 1.0, 0.0, 0.05);
    IndicatorV V(0.3, make_rect(1.5, 3.5, 0.0, 10.0));
    auto lambdas = geomspace(1e-6, 1e-2, 25);
    KGrid g = make_kgrid(pot, V, 1, lambdas.front());
    EffectiveModel m = build_effective_model(pot, V, g, 1, lambdas.front(), 2000, 1);
    return counting_curve(m, pot, lambdas, 0.1);
}

bool gap_finiteness(const CountingCurve& right) {
    PotentialB pot = step_pot(0.5, 1.0, 0.0, 0.05);
    IndicatorV V(0.1, make_rect(-2.5, -0.5, 0.0, 10.0));
    auto lambdas = geomspace(1e-6, 1e-2, 25);
    KGrid g = make_kgrid(pot, V, 1, lambdas.front());
    EffectiveModel m = build_effective_model(pot, V, g, 1, lambdas.front(), 2000, 1);
    CountingCurve left = counting_curve(m, pot, lambdas, 0.1);
    FinitenessProbe p = finiteness_probe(left);
    if (!p.constant || p.terminal_count != 0) return false;

    int deep = right.upper.front();
    int shallow = right.upper.back();
    return deep - shallow >= 2;
}

bool sqrt_log_sandwich(const CountingCurve& right) {
    SqrtLogFit f = fit_sqrt_log(right.lambdas, right.lower, right.upper);
    Region box = make_rect(1.5, 3.5, 0.0, 10.0);
    CorridorConstants cc = corridor_constants(box, box, 1.0, 0.5);
    if (!(cc.C_minus < cc.C_plus)) return false;
    return f.coefficient >= 0.5 * cc.C_minus && f.coefficient <= 2.0 * cc.C_plus;
}

bool volume_law() {
    PotentialB pot = step_pot(0.15, 0.2, 0.0, 0.05);
    PowerLawV V(2.0, 0.0, 0.0);
    auto lambdas = geomspace(1e-4, 1e-1, 7);
    KGrid g = make_kgrid(pot, V, 1, lambdas.front());
    EffectiveModel m = build_effective_model(pot, V, g, 1, lambdas.front(), 2000, 1);
    CountingCurve c = counting_curve(m, pot, lambdas, 0.1);
    std::vector<double> mid(lambdas.size()), vols(lambdas.size());
    for (size_t i = 0; i < lambdas.size(); ++i) {
        mid[i] = 0.5 * (c.lower[i] + c.upper[i]);
        vols[i] = volume_N(lambdas[i], V, 0.0);
        if (!(vols[i] > 0.0)) return false;
    }
    VolumeRatioFit f = fit_volume_ratio(lambdas, mid, vols, pot.B_plus(), {6, 4, 2, 0});
    if (!(f.terminal > 0.7 && f.terminal < 1.3)) return false;
    if (!f.trend_ok) return false;

    double eps = 0.05;
    double d = homogeneity_defect(V, 1e-3, -50.0, eps);
    return std::abs(d - eps / (1.0 - eps * eps)) < 1e-4;
}

bool geometry_identities() {
    if (std::abs(kappa(0.0) - 1.0) > 1e-10) return false;
    double e = std::exp(1.0);
    if (std::abs(kappa(e) - e) > 1e-10) return false;
    if (std::abs(c_minus(make_rect(1.0, 3.0, 2.0, 7.0)) - 5.0) > 1e-12) return false;
    if (std::abs(c_minus(make_disc(0.0, 0.0, 2.0)) - 4.0) > 1e-12) return false;
    double c1 = c_plus(make_disc(5.0, 1.0, 2.0), 0.0);
    double c2 = c_plus(make_disc(9.0, 1.0, 2.0), 4.0);
    if (std::abs(c1 - c2) > 1e-8) return false;
    GaussV G(0.5, 1.0, 0.0, 2.0);
    double exact = volume_N(0.01, G, 1.0);
    double g1 = volume_N_grid(0.01, G, 1.0, 1024);
    double g2 = volume_N_grid(0.01, G, 1.0, 2048);
    double rich = (4.0 * g2 - g1) / 3.0;
    return std::abs(rich - exact) < 0.01 * exact;
}

bool determinism() {
    const char* text = R"(
[field]
kind = constant
B = 1

[potential]
kind = gauss
amp = 0.3
sigma = 1
center_x = 2.5
center_xi = 0

[grid]
j = 1
j_max = 2
n_fiber = 600
k_samples = 41
k_min = -3
k_max = 6

[lambda]
min = 1e-3
max = 1e-1
count = 5
)";
    RunConfig cfg = parse_config(text);
    namespace fs = std::filesystem;
    fs::remove_all("acc_det_a");
    fs::remove_all("acc_det_b");
    if (run_pipeline(cfg, "report", "acc_det_a") != 0) return false;
    if (run_pipeline(cfg, "report", "acc_det_b") != 0) return false;
    for (const char* name : {"bands.csv", "counting.csv", "fits.csv", "report.txt"}) {
        std::ifstream a(fs::path("acc_det_a") / name, std::ios::binary);
        std::ifstream b(fs::path("acc_det_b") / name, std::ios::binary);
        if (!a.good() || !b.good()) return false;
        std::ostringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        if (sa.str() != sb.str() || sa.str().empty()) return false;
    }
    return true;
}

}  // namespace

template <class F>
void checked(int num, const char* label, F f) {
    bool pass = false;
    try {
        pass = f();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "criterion-%02d raised: %s\n", num, e.what());
    }
    report(num, label, pass);
}

int main() {
    checked(1, "flat-field-ladder", flat_ladder);
    checked(2, "strict-band-confinement", strict_confinement);
    checked(3, "projection-convergence", projection_decay);
    checked(4, "gap-gaussian-decay", gap_gaussian_decay);
    checked(5, "antiwick-bounds", antiwick_bounds);
    checked(6, "corridor-vs-oracle", corridor_vs_oracle);
    bool have_right = false;
    CountingCurve right;
    try {
        right = right_box_curve();
        have_right = true;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "shared counting curve raised: %s\n", e.what());
    }
    checked(7, "gap-finiteness", [&] { return have_right && gap_finiteness(right); });
    checked(8, "sqrt-log-sandwich", [&] { return have_right && sqrt_log_sandwich(right); });
    checked(9, "volume-law", volume_law);
    checked(10, "geometry-identities", geometry_identities);
    checked(11, "deterministic-artifacts", determinism);
    return failures;
}
