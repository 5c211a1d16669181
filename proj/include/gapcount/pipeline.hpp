#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "gapcount/asympt.hpp"
#include "gapcount/config.hpp"
#include "gapcount/csv.hpp"
#include "gapcount/effective.hpp"
#include "gapcount/errors.hpp"
#include "gapcount/fiber.hpp"
#include "gapcount/oracle2d.hpp"

namespace gapcount {

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

inline std::vector<double> geomspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = n == 1 ? a : a * std::pow(b / a, static_cast<double>(i) / (n - 1));
    return v;
}

struct PipelineState {
    RunConfig cfg;
    std::shared_ptr<const Field> field;
    std::shared_ptr<PotentialB> pot;
    std::shared_ptr<const PotentialV> V;
    std::vector<double> lambdas;

    bool have_bands = false;
    BandTable table;

    bool have_model = false;
    EffectiveModel model;
    CountingCurve curve;
    bool have_curve = false;
    FinitenessProbe probe;

    bool have_oracle = false;
    std::vector<RefinementRow> oracle_rows;
    std::vector<std::vector<OracleCounts>> oracle_counts;  // [box][lambda]

    bool have_slfit = false;
    SqrtLogFit slfit;
    bool have_vrfit = false;
    VolumeRatioFit vrfit;
    std::vector<double> volumes;
    bool have_cc = false;
    CorridorConstants cc;

    std::vector<std::string> written;
};

inline PipelineState init_pipeline(const RunConfig& cfg) {
    PipelineState s;
    s.cfg = cfg;
    s.field = cfg.make_field();
    s.pot = std::make_shared<PotentialB>(s.field);
    s.V = cfg.make_potential();
    s.lambdas = geomspace(cfg.lambda_min, cfg.lambda_max, cfg.lambda_count);
    return s;
}

inline std::string out_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

inline void run_bands(PipelineState& s, const std::string& dir) {
    const RunConfig& c = s.cfg;
    std::vector<double> ks = linspace(c.k_min, c.k_max, c.k_samples);
    s.table = build_band_table(*s.pot, ks, c.j_max, c.n_fiber, c.richardson, true);
    s.have_bands = true;
    std::string path = out_path(dir, "bands.csv");
    CsvWriter w(path, {"k", "j", "E_j", "gap", "ratio"});
    for (size_t ik = 0; ik < ks.size(); ++ik)
        for (int j = 1; j <= c.j_max; ++j) {
            double E = s.table.E(j, ik);
            double gap = band_supremum(*s.pot, j) - E;
            auto ratio = convergence_ratio(s.table, *s.pot, j, static_cast<int>(ik));
            w.row({fmt17(ks[ik]), std::to_string(j), fmt17(E), fmt17(gap),
                   ratio ? fmt17(*ratio) : "nan"});
        }
    s.written.push_back(path);
}

inline void ensure_curve(PipelineState& s) {
    if (s.have_curve) return;
    const RunConfig& c = s.cfg;
    if (!s.V) {
        s.curve.lambdas = s.lambdas;
        s.curve.lower.assign(s.lambdas.size(), 0);
        s.curve.upper.assign(s.lambdas.size(), 0);
    } else {
        KGrid g = make_kgrid(*s.pot, *s.V, c.j, c.lambda_min, c.dk_override, c.kgrid_min,
                             c.kgrid_max);
        s.model = build_effective_model(*s.pot, *s.V, g, c.j, c.lambda_min, c.n_fiber,
                                        c.xpanels_mult);
        s.have_model = true;
        s.curve = counting_curve(s.model, *s.pot, s.lambdas, c.delta);
    }
    s.have_curve = true;
    s.probe = finiteness_probe(s.curve);
}

inline void run_effective(PipelineState& s, const std::string& dir) {
    ensure_curve(s);
    std::string path = out_path(dir, "counting.csv");
    CsvWriter w(path, {"lambda", "count_lower", "count_upper", "log_abs_log_lambda_sqrt"});
    for (size_t i = 0; i < s.lambdas.size(); ++i)
        w.row({fmt17(s.lambdas[i]), std::to_string(s.curve.lower[i]),
               std::to_string(s.curve.upper[i]),
               fmt17(std::sqrt(std::abs(std::log(s.lambdas[i]))))});
    s.written.push_back(path);
}

inline void run_oracle(PipelineState& s, const std::string& dir, bool required) {
    const RunConfig& c = s.cfg;
    if (c.boxes.empty()) {
        if (required) throw ConfigError("oracle.boxes: required for the oracle stage");
        return;
    }
    double gauge = c.gauge;
    if (!std::isfinite(gauge))
        gauge = s.pot->b(s.V ? s.V->center_x() : c.boxes.front().cx);
    double Eplus = band_supremum(*s.pot, c.j);
    double top = s.pot->B_minus() * (2 * c.j + 1);
    s.oracle_counts.clear();
    for (const auto& box : c.boxes) {
        std::vector<double> sH0 = oracle_spectrum(*s.pot, nullptr, box, gauge);
        std::vector<double> sH = s.V ? oracle_spectrum(*s.pot, s.V.get(), box, gauge) : sH0;
        std::vector<OracleCounts> row;
        for (double l : s.lambdas) row.push_back(oracle_count(sH, sH0, Eplus + l, top));
        s.oracle_counts.push_back(std::move(row));
    }
    s.have_oracle = true;
    std::string path = out_path(dir, "oracle.csv");
    CsvWriter w(path, {"box_id", "a", "b", "count_H", "count_H0", "diff"});
    for (size_t bi = 0; bi < c.boxes.size(); ++bi)
        for (size_t li = 0; li < s.lambdas.size(); ++li) {
            const OracleCounts& oc = s.oracle_counts[bi][li];
            w.row({std::to_string(bi + 1), fmt17(Eplus + s.lambdas[li]), fmt17(top),
                   std::to_string(oc.count_H), std::to_string(oc.count_H0),
                   std::to_string(oc.diff)});
        }
    s.written.push_back(path);
}

inline void run_asympt(PipelineState& s, const std::string& dir) {
    ensure_curve(s);
    const RunConfig& c = s.cfg;
    s.slfit = fit_sqrt_log(s.lambdas, s.curve.lower, s.curve.upper);
    s.have_slfit = true;
    if (s.V) {
        s.volumes.clear();
        bool positive = true;
        for (double l : s.lambdas) {
            double v = volume_N(l, *s.V, c.volume_s);
            s.volumes.push_back(v);
            if (!(v > 0.0)) positive = false;
        }
        if (positive) {
            // Counting at c = 1 -/+ delta biases the two curves by -/+ delta to
            // first order; their mean cancels it.
            std::vector<double> mid(s.lambdas.size());
            for (size_t i = 0; i < mid.size(); ++i)
                mid[i] = 0.5 * (s.curve.lower[i] + s.curve.upper[i]);
            s.vrfit = fit_volume_ratio(s.lambdas, mid, s.volumes, s.pot->B_plus());
            s.have_vrfit = true;
        }
        if (s.V->kind() == "indicator" && std::isfinite(s.pot->x_plus())) {
            const auto& I = static_cast<const IndicatorV&>(*s.V);
            s.cc = corridor_constants(I.region(), I.region(), s.pot->B_plus(), s.pot->x_plus());
            s.have_cc = true;
        }
    }
    std::string path = out_path(dir, "fits.csv");
    std::vector<std::string> header = {"model", "coefficient", "residual_norm", "points_used"};
    for (size_t i = 0; i < s.lambdas.size(); ++i)
        header.push_back("ratio_" + std::to_string(i + 1));
    CsvWriter w(path, header);
    {
        std::vector<std::string> row = {"sqrt_log", fmt17(s.slfit.coefficient),
                                        fmt17(s.slfit.residual_norm),
                                        std::to_string(s.slfit.points_used)};
        row.resize(header.size(), "");
        w.row(row);
    }
    if (s.have_vrfit) {
        double r2 = 0.0;
        for (double r : s.vrfit.ratios) r2 += (r - 1.0) * (r - 1.0);
        std::vector<std::string> row = {"volume_ratio", fmt17(s.vrfit.terminal),
                                        fmt17(std::sqrt(r2)),
                                        std::to_string(s.vrfit.ratios.size())};
        for (double r : s.vrfit.ratios) row.push_back(fmt17(r));
        w.row(row);
    }
    s.written.push_back(path);
}

inline std::string emit_report(const PipelineState& s, bool& all_pass) {
    const RunConfig& c = s.cfg;
    std::ostringstream r;
    r << "gapcount report\n";
    r << "\n## config\n";
    for (const auto& [k, v] : c.echo) r << k << " = " << v << "\n";

    if (s.have_bands) {
        r << "\n## bands\n";
        for (int j = 1; j <= c.j_max; ++j) {
            double lo = s.table.E(j, 0), hi = lo;
            for (size_t ik = 0; ik < s.table.k_grid.size(); ++ik) {
                lo = std::min(lo, s.table.E(j, ik));
                hi = std::max(hi, s.table.E(j, ik));
            }
            double sup = band_supremum(*s.pot, j);
            r << "j=" << j << " E_range=[" << fmt17(lo) << ", " << fmt17(hi) << "]"
              << " supremum=" << fmt17(sup) << " terminal_gap="
              << fmt17(sup - s.table.E(j, s.table.k_grid.size() - 1)) << "\n";
        }
    }

    if (s.have_curve) {
        r << "\n## counting corridor\n";
        r << "lambda count_lower count_upper\n";
        for (size_t i = 0; i < s.lambdas.size(); ++i)
            r << fmt17(s.lambdas[i]) << " " << s.curve.lower[i] << " " << s.curve.upper[i]
              << "\n";
        r << "finiteness_probe_constant=" << (s.probe.constant ? "true" : "false")
          << " terminal_count=" << s.probe.terminal_count << "\n";
    }

    if (s.have_oracle) {
        r << "\n## oracle\n";
        for (size_t bi = 0; bi < c.boxes.size(); ++bi) {
            const Box2D& b = c.boxes[bi];
            r << "box " << bi + 1 << " (Lx=" << fmt17(b.Lx) << " Ly=" << fmt17(b.Ly)
              << " nx=" << b.nx << " ny=" << b.ny << "): diff=";
            for (size_t li = 0; li < s.lambdas.size(); ++li)
                r << (li ? "," : "") << s.oracle_counts[bi][li].diff;
            r << "\n";
        }
    }

    if (s.have_slfit) {
        r << "\n## fits\n";
        r << "sqrt_log coefficient=" << fmt17(s.slfit.coefficient)
          << " residual_norm=" << fmt17(s.slfit.residual_norm)
          << " points_used=" << s.slfit.points_used
          << " flagged=" << (s.slfit.flagged ? "true" : "false") << "\n";
        if (s.have_vrfit) {
            r << "volume_ratio terminal=" << fmt17(s.vrfit.terminal)
              << " trend_ok=" << (s.vrfit.trend_ok ? "true" : "false") << "\n";
        }
        if (s.have_cc) {
            r << "corridor constants C_minus=" << fmt17(s.cc.C_minus)
              << " C_plus=" << fmt17(s.cc.C_plus)
              << " lower_degenerate=" << (s.cc.lower_degenerate ? "true" : "false") << "\n";
        }
    }

    r << "\n## verdicts\n";
    all_pass = true;
    r << "band-confinement: " << (s.have_bands ? "PASS" : "SKIPPED") << "\n";
    if (s.have_cc) {
        bool ok = !s.cc.lower_degenerate && s.cc.C_minus < s.cc.C_plus;
        if (!ok) all_pass = false;
        r << "corridor-order (C_minus < C_plus): " << (ok ? "PASS" : "FAIL") << "\n";
    } else {
        r << "corridor-order (C_minus < C_plus): SKIPPED\n";
    }
    if (s.have_oracle && s.have_curve) {
        bool ok = true;
        for (const auto& row : s.oracle_counts)
            for (size_t li = 0; li < s.lambdas.size(); ++li)
                if (row[li].diff < s.curve.lower[li] - 3 || row[li].diff > s.curve.upper[li] + 3)
                    ok = false;
        if (!ok) all_pass = false;
        r << "oracle-within-corridor: " << (ok ? "PASS" : "FAIL") << "\n";
    } else {
        r << "oracle-within-corridor: SKIPPED\n";
    }
    r << "overall: " << (all_pass ? "PASS" : "FAIL") << "\n";
    return r.str();
}

inline void write_manifest(const PipelineState& s, const std::string& dir,
                           const std::string& stage, const std::string& what) {
    std::ofstream f(out_path(dir, "manifest.txt"));
    f << "failed-stage: " << stage << "\n";
    f << "error: " << what << "\n";
    for (const auto& p : s.written) f << "written: " << p << "\n";
}

// Returns the process exit code for a validated config.
inline int run_pipeline(const RunConfig& cfg, const std::string& command,
                        const std::string& out_override = "") {
    std::string dir = out_override.empty() ? cfg.out_dir : out_override;
    std::filesystem::create_directories(dir);
    PipelineState s = init_pipeline(cfg);
    std::string stage = command;
    try {
        if (command == "bands") {
            run_bands(s, dir);
        } else if (command == "effective") {
            run_effective(s, dir);
        } else if (command == "oracle") {
            run_oracle(s, dir, true);
        } else if (command == "asympt") {
            run_asympt(s, dir);
        } else if (command == "report") {
            stage = "bands";
            run_bands(s, dir);
            stage = "effective";
            run_effective(s, dir);
            stage = "oracle";
            run_oracle(s, dir, false);
            stage = "asympt";
            run_asympt(s, dir);
            stage = "report";
            bool all_pass = false;
            std::string text = emit_report(s, all_pass);
            std::string path = out_path(dir, "report.txt");
            std::ofstream f(path);
            if (!f) throw ConfigError("output: cannot open " + path);
            f << text;
            s.written.push_back(path);
            if (!all_pass) return kExitThreshold;
        } else {
            throw ConfigError("command: unknown command " + command);
        }
    } catch (const NumericsError& e) {
        write_manifest(s, dir, stage, e.what());
        throw;
    }
    return kExitOk;
}

}  // namespace gapcount
