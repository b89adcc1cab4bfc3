#include <Eigen/Core>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fadoa/harness.hpp"

namespace fadoa::harness {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string hex(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string join(const std::vector<int>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + std::to_string(xs[i]);
    return out;
}

}  // namespace

std::string rmse_csv(const RmseTable& table) {
    std::string out = "variant,movements,blocks,snr_db,rmse_deg,failures,mean_rho\n";
    for (const auto& row : table) {
        out += std::string(to_string(row.point.variant)) + "," + std::to_string(row.point.movements) + "," +
               std::to_string(row.point.blocks) + "," + num(row.point.snr_db) + "," + num(row.rmse_deg) + "," +
               std::to_string(row.failures) + "," + (row.mean_rho ? num(*row.mean_rho) : "") + "\n";
    }
    return out;
}

std::string spectrum_csv(const SpectrumGrid<double>& spectrum) {
    std::string out = "angle_deg,spectrum\n";
    for (std::size_t i = 0; i < spectrum.values.size(); ++i)
        out += num(spectrum.angles_deg[i]) + "," + num(spectrum.values[i]) + "\n";
    return out;
}

std::string rho_csv(const std::vector<RhoCell>& cells) {
    std::string out = "snr_db,blocks,mean_rho,trials\n";
    for (const auto& c : cells)
        out += num(c.snr_db) + "," + std::to_string(c.blocks) + "," + num(c.mean_rho) + "," +
               std::to_string(c.trials) + "\n";
    return out;
}

std::string manifest_json(const ExperimentConfig& config, const std::string& command) {
    nlohmann::json j;
    j["command"] = command;
    j["name"] = config.name;
    j["config_hash"] = hex(config_hash(config));
    j["seed"] = config.seed;
    j["trials"] = config.trials;
    j["config"] = nlohmann::json::parse(canonical_json(config));
    j["versions"] = {{"fadoa", "0.1.0"},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                   "." + std::to_string(EIGEN_MINOR_VERSION)},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    return j.dump(2) + "\n";
}

std::string describe_lags(const ArraySpec& spec) {
    spec.validate();
    std::ostringstream os;
    os << "mode " << to_string(spec.mode) << ", M = " << spec.num_antennas << ", G = " << spec.num_movements
       << ", d = " << spec.step << "\n";
    for (int g = 0; g < spec.num_states(); ++g) os << "state " << g << " positions: " << join(positions(spec, g)) << "\n";
    const auto lags = spec.mode == Mode::ARS ? ars_lag_set(spec) : nars_lag_set(spec);
    os << (spec.mode == Mode::ARS ? "position set" : "difference lag set") << " (" << lags.size()
       << "): " << join(lags) << "\n";
    os << "virtual size " << virtual_size(spec) << ", max resolvable paths " << max_resolvable(spec) << "\n";
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace fadoa::harness
