#pragma once

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "gapcount/errors.hpp"
#include "gapcount/field.hpp"
#include "gapcount/oracle2d.hpp"
#include "gapcount/potential.hpp"
#include "gapcount/region.hpp"

namespace gapcount {

namespace cfgdetail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t p = s.find(sep, start);
        if (p == std::string::npos) {
            out.push_back(trim(s.substr(start)));
            break;
        }
        out.push_back(trim(s.substr(start, p - start)));
        start = p + 1;
    }
    if (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    if (v.empty()) throw ConfigError(key + ": empty value");
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size()) throw ConfigError(key + ": not a number: " + v);
    return x;
}

inline int parse_int(const std::string& key, const std::string& v) {
    double x = parse_double(key, v);
    int i = static_cast<int>(x);
    if (i != x) throw ConfigError(key + ": not an integer: " + v);
    return i;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": not a boolean: " + v);
}

inline std::vector<double> parse_doubles(const std::string& key, const std::string& v, size_t want) {
    std::vector<std::string> parts = split(v, ',');
    if (want != 0 && parts.size() != want)
        throw ConfigError(key + ": expected " + std::to_string(want) + " comma-separated numbers");
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(parse_double(key, p));
    return out;
}

class KV {
   public:
    std::map<std::string, std::string> raw;
    std::set<std::string> used;

    bool has(const std::string& k) {
        used.insert(k);
        return raw.count(k) > 0;
    }
    std::string get(const std::string& k) {
        used.insert(k);
        auto it = raw.find(k);
        if (it == raw.end()) throw ConfigError(k + ": required key missing");
        return it->second;
    }
    // Defaults are written back so the echo shows every resolved value.
    std::string get_or(const std::string& k, const std::string& dflt) {
        used.insert(k);
        auto it = raw.find(k);
        if (it == raw.end()) {
            raw[k] = dflt;
            return dflt;
        }
        return it->second;
    }
};

}  // namespace cfgdetail

struct RunConfig {
    // field
    std::string field_kind;
    double field_B = 1.0;
    double B_minus = 0.5, B_plus = 1.0, field_x0 = 0.0, field_w = 0.05;
    std::vector<double> sample_x, sample_B;
    // potential
    std::string pot_kind = "none";
    double amp = 0.0, center_x = 0.0, center_xi = 0.0, sigma = 1.0, power_m = 2.0;
    std::string shape;
    Region pot_region;
    bool has_region = false;
    // grid
    int j = 1, j_max = 4, n_fiber = 2000, k_samples = 200, xpanels_mult = 1;
    bool richardson = true;
    double k_min = -5.0, k_max = 5.0;
    double dk_override = 0.0;
    double kgrid_min = std::nan(""), kgrid_max = std::nan("");
    // lambda
    double lambda_min = 1e-6, lambda_max = 1e-2;
    int lambda_count = 25;
    double delta = 0.1;
    double volume_s = 0.0;
    // oracle
    std::vector<Box2D> boxes;
    double gauge = std::nan("");
    int oracle_cap = 4900;
    // output
    std::string out_dir = "out";

    std::map<std::string, std::string> echo;

    std::shared_ptr<const Field> make_field() const {
        if (field_kind == "constant") return std::make_shared<ConstantField>(field_B);
        if (field_kind == "smooth-step")
            return std::make_shared<SmoothStepField>(B_minus, B_plus, field_x0, field_w);
        if (field_kind == "step") return std::make_shared<StepField>(B_minus, B_plus, field_x0);
        if (field_kind == "sampled") return std::make_shared<SampledField>(sample_x, sample_B);
        throw ConfigError("field.kind: unknown kind " + field_kind);
    }

    std::shared_ptr<const PotentialV> make_potential() const {
        if (pot_kind == "none") return nullptr;
        if (pot_kind == "gauss") return std::make_shared<GaussV>(amp, center_x, center_xi, sigma);
        if (pot_kind == "power-law")
            return std::make_shared<PowerLawV>(power_m, center_x, center_xi);
        if (pot_kind == "indicator") return std::make_shared<IndicatorV>(amp, pot_region);
        throw ConfigError("potential.kind: unknown kind " + pot_kind);
    }

    double gap_width() const {
        double bm, bp;
        if (field_kind == "constant") {
            bm = bp = field_B;
        } else if (field_kind == "sampled") {
            bm = 1e300;
            bp = -1e300;
            for (double b : sample_B) {
                bm = std::min(bm, b);
                bp = std::max(bp, b);
            }
        } else {
            bm = B_minus;
            bp = B_plus;
        }
        return bm * (2 * j + 1) - bp * (2 * j - 1);
    }
};

inline RunConfig parse_config(const std::string& text) {
    using namespace cfgdetail;
    static const std::set<std::string> sections = {"field", "potential", "grid",
                                                   "lambda", "oracle", "output"};
    KV kv;
    std::string section;
    size_t pos = 0, lineno = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string line = trim(text.substr(pos, nl == std::string::npos ? nl : nl - pos));
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) +
                                                      ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!sections.count(section))
                throw ConfigError("config: unknown section [" + section + "]");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key outside any section");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        kv.raw[section + "." + key] = val;
    }

    RunConfig c;

    c.field_kind = kv.get("field.kind");
    if (c.field_kind == "constant") {
        c.field_B = parse_double("field.B", kv.get_or("field.B", "1"));
        if (!(c.field_B > 0.0)) throw ConfigError("field.B: must be positive");
    } else if (c.field_kind == "smooth-step" || c.field_kind == "step") {
        c.B_minus = parse_double("field.B_minus", kv.get("field.B_minus"));
        c.B_plus = parse_double("field.B_plus", kv.get("field.B_plus"));
        c.field_x0 = parse_double("field.x0", kv.get_or("field.x0", "0"));
        if (!(c.B_minus > 0.0) || c.B_minus > c.B_plus)
            throw ConfigError("field.B_minus: need 0 < B_minus <= B_plus");
        if (c.field_kind == "smooth-step") {
            c.field_w = parse_double("field.w", kv.get_or("field.w", "0.05"));
            if (!(c.field_w > 0.0)) throw ConfigError("field.w: must be positive");
        }
    } else if (c.field_kind == "sampled") {
        for (const auto& pair : split(kv.get("field.samples"), ';')) {
            size_t colon = pair.find(':');
            if (colon == std::string::npos)
                throw ConfigError("field.samples: expected x:B pairs separated by ';'");
            c.sample_x.push_back(parse_double("field.samples", trim(pair.substr(0, colon))));
            c.sample_B.push_back(parse_double("field.samples", trim(pair.substr(colon + 1))));
        }
    } else {
        throw ConfigError("field.kind: unknown kind " + c.field_kind);
    }

    c.pot_kind = kv.get_or("potential.kind", "none");
    if (c.pot_kind == "gauss") {
        c.amp = parse_double("potential.amp", kv.get("potential.amp"));
        c.sigma = parse_double("potential.sigma", kv.get("potential.sigma"));
        c.center_x = parse_double("potential.center_x", kv.get_or("potential.center_x", "0"));
        c.center_xi = parse_double("potential.center_xi", kv.get_or("potential.center_xi", "0"));
        if (!(c.amp > 0.0)) throw ConfigError("potential.amp: must be positive");
        if (!(c.sigma > 0.0)) throw ConfigError("potential.sigma: must be positive");
    } else if (c.pot_kind == "power-law") {
        c.power_m = parse_double("potential.m", kv.get_or("potential.m", "2"));
        c.center_x = parse_double("potential.center_x", kv.get_or("potential.center_x", "0"));
        c.center_xi = parse_double("potential.center_xi", kv.get_or("potential.center_xi", "0"));
        if (!(c.power_m > 1.0)) throw ConfigError("potential.m: must exceed 1");
    } else if (c.pot_kind == "indicator") {
        c.amp = parse_double("potential.amp", kv.get("potential.amp"));
        if (!(c.amp > 0.0)) throw ConfigError("potential.amp: must be positive");
        c.shape = kv.get("potential.shape");
        if (c.shape == "rect") {
            auto v = parse_doubles("potential.rect", kv.get("potential.rect"), 4);
            c.pot_region = make_rect(v[0], v[1], v[2], v[3]);
        } else if (c.shape == "disc") {
            auto v = parse_doubles("potential.disc", kv.get("potential.disc"), 3);
            c.pot_region = make_disc(v[0], v[1], v[2]);
        } else if (c.shape == "polygon") {
            std::vector<std::array<double, 2>> pts;
            for (const auto& pair : split(kv.get("potential.polygon"), ';')) {
                auto v = parse_doubles("potential.polygon", pair, 2);
                pts.push_back({v[0], v[1]});
            }
            c.pot_region = make_polygon(pts);
        } else {
            throw ConfigError("potential.shape: unknown shape " + c.shape);
        }
        c.has_region = true;
    } else if (c.pot_kind != "none") {
        throw ConfigError("potential.kind: unknown kind " + c.pot_kind);
    }

    c.j = parse_int("grid.j", kv.get_or("grid.j", "1"));
    if (c.j < 1) throw ConfigError("grid.j: band index must be >= 1");
    c.j_max = parse_int("grid.j_max", kv.get_or("grid.j_max", "4"));
    if (c.j_max < c.j) throw ConfigError("grid.j_max: must be >= grid.j");
    c.n_fiber = parse_int("grid.n_fiber", kv.get_or("grid.n_fiber", "2000"));
    if (c.n_fiber < 16) throw ConfigError("grid.n_fiber: must be >= 16");
    c.richardson = parse_bool("grid.richardson", kv.get_or("grid.richardson", "true"));
    c.k_samples = parse_int("grid.k_samples", kv.get_or("grid.k_samples", "200"));
    if (c.k_samples < 2) throw ConfigError("grid.k_samples: must be >= 2");
    c.k_min = parse_double("grid.k_min", kv.get_or("grid.k_min", "-5"));
    c.k_max = parse_double("grid.k_max", kv.get_or("grid.k_max", "5"));
    if (!(c.k_min < c.k_max)) throw ConfigError("grid.k_max: must exceed grid.k_min");
    if (kv.has("grid.dk")) {
        c.dk_override = parse_double("grid.dk", kv.get("grid.dk"));
        if (!(c.dk_override > 0.0)) throw ConfigError("grid.dk: must be positive");
    }
    if (kv.has("grid.kgrid_min")) c.kgrid_min = parse_double("grid.kgrid_min", kv.get("grid.kgrid_min"));
    if (kv.has("grid.kgrid_max")) c.kgrid_max = parse_double("grid.kgrid_max", kv.get("grid.kgrid_max"));
    c.xpanels_mult = parse_int("grid.xpanels_mult", kv.get_or("grid.xpanels_mult", "1"));
    if (c.xpanels_mult < 1) throw ConfigError("grid.xpanels_mult: must be >= 1");

    c.lambda_min = parse_double("lambda.min", kv.get_or("lambda.min", "1e-6"));
    c.lambda_max = parse_double("lambda.max", kv.get_or("lambda.max", "1e-2"));
    c.lambda_count = parse_int("lambda.count", kv.get_or("lambda.count", "25"));
    c.delta = parse_double("delta", kv.get_or("lambda.delta", "0.1"));
    c.volume_s = parse_double("lambda.volume_s", kv.get_or("lambda.volume_s", "0"));
    if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("delta: must lie in (0, 1)");
    if (!(c.lambda_min > 0.0)) throw ConfigError("lambda_grid: lambda.min must be positive");
    if (!(c.lambda_max >= c.lambda_min))
        throw ConfigError("lambda_grid: lambda.max must be >= lambda.min");
    if (c.lambda_count < 1) throw ConfigError("lambda_grid: lambda.count must be >= 1");
    double gw = c.gap_width();
    if (!(gw > 0.0))
        throw ConfigError("lambda_grid: band gap is empty for the declared field and band index");
    if (!(c.lambda_max < gw))
        throw ConfigError("lambda_grid: lambda.max must lie strictly inside the band gap (width " +
                          std::to_string(gw) + ")");

    c.oracle_cap = parse_int("oracle.cap", kv.get_or("oracle.cap", "4900"));
    if (c.oracle_cap < 4) throw ConfigError("oracle.cap: must be >= 4");
    double box_cx = parse_double("oracle.center_x", kv.get_or("oracle.center_x", "0"));
    double box_cy = parse_double("oracle.center_y", kv.get_or("oracle.center_y", "0"));
    if (kv.has("oracle.boxes")) {
        for (const auto& spec : split(kv.get("oracle.boxes"), ';')) {
            auto v = parse_doubles("oracle.boxes", spec, 4);
            Box2D b;
            b.cx = box_cx;
            b.cy = box_cy;
            b.Lx = v[0];
            b.Ly = v[1];
            b.nx = static_cast<int>(v[2]);
            b.ny = static_cast<int>(v[3]);
            if (b.nx != v[2] || b.ny != v[3])
                throw ConfigError("oracle.boxes: grid sizes must be integers");
            check_box(b, c.oracle_cap);
            c.boxes.push_back(b);
        }
    }
    if (kv.has("oracle.gauge")) c.gauge = parse_double("oracle.gauge", kv.get("oracle.gauge"));

    c.out_dir = kv.get_or("output.dir", "out");
    if (c.out_dir.empty()) throw ConfigError("output.dir: empty path");

    for (const auto& [k, v] : kv.raw)
        if (!kv.used.count(k)) throw ConfigError("config: unknown key " + k);

    (void)c.make_field();

    c.echo = kv.raw;
    return c;
}

}  // namespace gapcount
