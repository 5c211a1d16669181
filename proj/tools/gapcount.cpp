#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gapcount/config.hpp"
#include "gapcount/errors.hpp"
#include "gapcount/pipeline.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw gapcount::ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral gap eigenvalue counting for unidirectionally varying magnetic fields"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    const char* names[] = {"bands", "effective", "oracle", "asympt", "report"};
    const char* blurbs[] = {"Band functions E_j(k) over a k scan",
                            "Corridor counting curve from the effective model",
                            "Dense 2D eigenvalue counts on Dirichlet boxes",
                            "Fits and corridor constants",
                            "All stages plus a verdict report"};
    for (int i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
        sub->add_option("--config", config_path, "Run configuration file")->required();
        sub->add_option("--out", out_dir, "Output directory override");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : gapcount::kExitConfig;
    }

    std::string command = app.get_subcommands().front()->get_name();
    try {
        gapcount::RunConfig cfg = gapcount::parse_config(read_file(config_path));
        int rc = gapcount::run_pipeline(cfg, command, out_dir);
        if (rc == gapcount::kExitThreshold)
            std::cerr << "report: threshold verdicts failed\n";
        return rc;
    } catch (const gapcount::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return gapcount::kExitConfig;
    } catch (const gapcount::NumericsError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return gapcount::kExitNumerics;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gapcount::kExitNumerics;
    }
}
