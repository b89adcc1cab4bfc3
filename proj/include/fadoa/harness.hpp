#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fadoa/pipelines.hpp"

namespace fadoa::harness {

/// A configuration file or preset could not be parsed or fails validation.
class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// One estimator run across a list of movement counts.
struct Series {
    Variant variant = Variant::TMRLS_MUSIC;
    std::vector<int> movements;
};

/// Cells of the mean-rho surface.
struct RhoSurfaceAxes {
    std::vector<double> snr_db;
    std::vector<Index> blocks;
};

struct ExperimentConfig {
    std::string name = "custom";
    PipelineConfig base;             ///< template; sweep values override it
    std::vector<double> snr_db;      ///< sweep axis
    std::vector<Index> blocks;       ///< sweep axis
    std::vector<Series> series;      ///< variant x movement axis
    RhoSurfaceAxes rho_surface;
    int trials = 500;
    std::uint64_t seed = 1;
    double base_snr_db = 10.0;

    /// Every derived PipelineConfig must validate; throws ConfigError.
    void validate() const;
};

/// Parses the JSON config schema documented in docs/config.md.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Preset files live in the directory named by $FADOA_PRESET_DIR, falling
/// back to the presets/ directory of the source tree.
std::filesystem::path preset_dir();
std::vector<std::string> preset_names();
ExperimentConfig load_preset(const std::string& name);

/// Canonical JSON of a config (sorted keys), used for hashing.
std::string canonical_json(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

struct SweepPoint {
    Variant variant = Variant::TMRLS_MUSIC;
    int movements = 0;
    Index blocks = 0;
    double snr_db = 0;
};

/// All sweep points, series-major, then movements, blocks, SNR.
std::vector<SweepPoint> sweep_points(const ExperimentConfig& config);

/// Pipeline config for one sweep point and trial.
PipelineConfig point_config(const ExperimentConfig& config, const SweepPoint& point);

/// Dataset seed and Nystrom seed for one trial at one point. They do not
/// depend on the variant, so variants at the same array, N and SNR see the
/// same data.
struct TrialSeeds {
    std::uint64_t data;
    std::uint64_t subset;
};
TrialSeeds trial_seeds(std::uint64_t master, const SweepPoint& point, int trial);

/// Root-mean-square error over trials and sources, with sorted estimates
/// paired positionally against sorted truth.
double compute_rmse(const std::vector<std::vector<double>>& estimates, const std::vector<double>& truth);

/// Worst-case stand-in for a failed trial: every estimate 90 degrees off.
std::vector<double> failure_estimates(const std::vector<double>& truth);

struct RmseRow {
    SweepPoint point;
    double rmse_deg = 0;
    int failures = 0;
    int trials = 0;
    std::optional<double> mean_rho;
};

using RmseTable = std::vector<RmseRow>;

/// Runs `trials` independent pipeline executions at every sweep point on
/// `workers` threads. The table does not depend on the worker count.
RmseTable run_experiment(const ExperimentConfig& config, int workers = 1);

std::string rmse_csv(const RmseTable& table);

/// One realization at the base configuration (trial 0, first sweep point).
EstimationResult run_single(const ExperimentConfig& config);
std::string spectrum_csv(const SpectrumGrid<double>& spectrum);

struct RhoCell {
    double snr_db = 0;
    Index blocks = 0;
    double mean_rho = 0;
    int trials = 0;
};

std::vector<RhoCell> run_rho_surface(const ExperimentConfig& config, int workers = 1);
std::string rho_csv(const std::vector<RhoCell>& cells);

/// Run manifest: config hash, seed, trial count, library versions.
std::string manifest_json(const ExperimentConfig& config, const std::string& command);

/// Human-readable lag sets of an array.
std::string describe_lags(const ArraySpec& spec);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fadoa::harness
