#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fadoa/harness.hpp"

namespace {

namespace h = fadoa::harness;

struct Common {
    std::string config_path;
    std::string preset;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> grid_step;
    std::string out_dir = ".";
    int workers = 1;
};

void add_common(CLI::App* cmd, Common& c) {
    auto* cfg = cmd->add_option("--config", c.config_path, "JSON config file");
    cmd->add_option("--preset", c.preset, "Built-in preset name")->excludes(cfg);
    cmd->add_option("--trials", c.trials, "Monte-Carlo trials per point")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", c.seed, "Master seed");
    cmd->add_option("--grid-step", c.grid_step, "Spectrum grid step in degrees")->check(CLI::PositiveNumber);
    cmd->add_option("--out", c.out_dir, "Output directory");
    cmd->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
}

h::ExperimentConfig resolve(const Common& c) {
    if (c.config_path.empty() && c.preset.empty()) throw h::ConfigError("one of --config or --preset is required");
    h::ExperimentConfig cfg = c.preset.empty() ? h::load_config(c.config_path) : h::load_preset(c.preset);
    if (c.trials) cfg.trials = *c.trials;
    if (c.seed) cfg.seed = *c.seed;
    if (c.grid_step) cfg.base.grid_step = *c.grid_step;
    cfg.validate();
    return cfg;
}

std::string command_line(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) out += (i ? " " : "") + std::string(argv[i]);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fluid-antenna DOA estimation: Monte-Carlo harness"};
    app.require_subcommand(1);

    Common spectrum_opts, rmse_opts, rho_opts, validate_opts, lags_opts;
    auto* spectrum = app.add_subcommand("spectrum", "MUSIC spectrum of one realization");
    add_common(spectrum, spectrum_opts);
    auto* rmse = app.add_subcommand("rmse", "RMSE table over the configured sweep");
    add_common(rmse, rmse_opts);
    auto* rho = app.add_subcommand("rho-surface", "Mean shrinkage weight over (SNR, N)");
    add_common(rho, rho_opts);
    auto* validate = app.add_subcommand("validate", "Check a config without running it");
    add_common(validate, validate_opts);

    auto* lags = app.add_subcommand("lags", "Print the position / difference-lag sets of an array");
    add_common(lags, lags_opts);
    std::string lag_mode;
    int lag_m = 0, lag_g = -1;
    lags->add_option("--mode", lag_mode, "ARS or NARS")->check(CLI::IsMember({"ARS", "NARS"}));
    lags->add_option("-M,--antennas", lag_m, "Physical antennas");
    lags->add_option("-G,--movements", lag_g, "Movements per block");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string cmdline = command_line(argc, argv);
    try {
        if (*spectrum) {
            const auto cfg = resolve(spectrum_opts);
            const auto result = h::run_single(cfg);
            const std::filesystem::path dir = spectrum_opts.out_dir;
            h::write_text(dir / "spectrum.csv", h::spectrum_csv(result.spectrum));
            h::write_text(dir / "manifest.json", h::manifest_json(cfg, cmdline));
            std::cout << "estimates (deg):";
            for (double d : result.doas) std::cout << ' ' << d;
            std::cout << "\nwrote " << (dir / "spectrum.csv").string() << "\n";
        } else if (*rmse) {
            const auto cfg = resolve(rmse_opts);
            const auto table = h::run_experiment(cfg, rmse_opts.workers);
            const std::filesystem::path dir = rmse_opts.out_dir;
            const auto csv = h::rmse_csv(table);
            h::write_text(dir / "rmse.csv", csv);
            h::write_text(dir / "manifest.json", h::manifest_json(cfg, cmdline));
            std::cout << csv;
        } else if (*rho) {
            const auto cfg = resolve(rho_opts);
            const auto cells = h::run_rho_surface(cfg, rho_opts.workers);
            const std::filesystem::path dir = rho_opts.out_dir;
            const auto csv = h::rho_csv(cells);
            h::write_text(dir / "rho_surface.csv", csv);
            h::write_text(dir / "manifest.json", h::manifest_json(cfg, cmdline));
            std::cout << csv;
        } else if (*validate) {
            const auto cfg = resolve(validate_opts);
            std::cout << cfg.name << ": ok (" << h::sweep_points(cfg).size() << " sweep points, " << cfg.trials
                      << " trials each)\n";
        } else if (*lags) {
            fadoa::ArraySpec spec;
            if (!lags_opts.config_path.empty() || !lags_opts.preset.empty()) spec = resolve(lags_opts).base.array;
            if (!lag_mode.empty()) spec.mode = lag_mode == "ARS" ? fadoa::Mode::ARS : fadoa::Mode::NARS;
            if (lag_m > 0) spec.num_antennas = lag_m;
            if (lag_g >= 0) spec.num_movements = lag_g;
            try {
                spec.validate();
            } catch (const fadoa::InvalidArgument& e) {
                throw h::ConfigError(e.what());
            }
            std::cout << h::describe_lags(spec);
        }
    } catch (const h::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
