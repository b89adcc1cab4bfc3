#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fadoa/harness.hpp"

#ifndef FADOA_PRESET_DIR
#define FADOA_PRESET_DIR "presets"
#endif

namespace fadoa::harness {

using nlohmann::json;

namespace {

void expect_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items()) {
        if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

Mode parse_mode(const std::string& s) {
    if (s == "ARS") return Mode::ARS;
    if (s == "NARS") return Mode::NARS;
    throw ConfigError("array.mode must be ARS or NARS, got '" + s + "'");
}

SubsetSelection parse_selection(const std::string& s) {
    if (s == "random") return SubsetSelection::Random;
    if (s == "even") return SubsetSelection::EvenlySpaced;
    throw ConfigError("pipeline.subset_selection must be random or even, got '" + s + "'");
}

Variant parse_variant(const std::string& s) {
    try {
        return variant_from_string(s);
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    expect_keys(root, "config", {"name", "array", "scene", "pipeline", "sweep", "rho_surface", "trials", "seed"});

    ExperimentConfig cfg;
    cfg.name = get_or<std::string>(root, "name", "custom");
    cfg.trials = get_or<int>(root, "trials", 500);
    cfg.seed = get_or<std::uint64_t>(root, "seed", 1);

    if (!root.contains("array") || !root.contains("scene")) throw ConfigError("config needs 'array' and 'scene'");
    const json& array = root["array"];
    expect_keys(array, "array", {"mode", "antennas", "movements", "step"});
    cfg.base.array.mode = parse_mode(get_or<std::string>(array, "mode", "ARS"));
    cfg.base.array.num_antennas = get_or<int>(array, "antennas", 1);
    cfg.base.array.num_movements = get_or<int>(array, "movements", 0);
    cfg.base.array.step = get_or<double>(array, "step", 0.5);

    const json& scene = root["scene"];
    expect_keys(scene, "scene", {"users", "paths_per_user", "doas_deg", "path_gain_var", "signal_power", "snr_db"});
    cfg.base.scene.num_users = get_or<int>(scene, "users", 1);
    cfg.base.scene.paths_per_user = get_or<int>(scene, "paths_per_user", 1);
    cfg.base.scene.doas_deg = get_or<std::vector<double>>(scene, "doas_deg", {});
    cfg.base.scene.path_gain_var = get_or<double>(scene, "path_gain_var", 1.0);
    cfg.base.scene.signal_power = get_or<double>(scene, "signal_power", 1.0);
    cfg.base_snr_db = get_or<double>(scene, "snr_db", 10.0);
    cfg.base.scene.set_snr_db(cfg.base_snr_db);
    cfg.base.num_paths = cfg.base.scene.num_paths();

    const json pipeline = root.value("pipeline", json::object());
    expect_keys(pipeline, "pipeline", {"variant", "blocks", "subset_size", "grid_step", "subset_selection"});
    cfg.base.variant = parse_variant(get_or<std::string>(pipeline, "variant", "TMRLS_MUSIC"));
    cfg.base.num_blocks = get_or<Index>(pipeline, "blocks", 200);
    cfg.base.subset_size = get_or<Index>(pipeline, "subset_size", 0);
    cfg.base.grid_step = get_or<double>(pipeline, "grid_step", 0.05);
    cfg.base.selection = parse_selection(get_or<std::string>(pipeline, "subset_selection", "random"));

    const json sweep = root.value("sweep", json::object());
    expect_keys(sweep, "sweep", {"snr_db", "blocks", "series"});
    cfg.snr_db = get_or<std::vector<double>>(sweep, "snr_db", {cfg.base_snr_db});
    cfg.blocks = get_or<std::vector<Index>>(sweep, "blocks", {cfg.base.num_blocks});
    if (sweep.contains("series")) {
        if (!sweep["series"].is_array()) throw ConfigError("sweep.series must be an array");
        for (const auto& s : sweep["series"]) {
            expect_keys(s, "sweep.series[]", {"variant", "movements"});
            Series series;
            series.variant = parse_variant(get_or<std::string>(s, "variant", to_string(cfg.base.variant)));
            series.movements = get_or<std::vector<int>>(s, "movements", {cfg.base.array.num_movements});
            cfg.series.push_back(std::move(series));
        }
    } else {
        cfg.series.push_back({cfg.base.variant, {cfg.base.array.num_movements}});
    }

    if (root.contains("rho_surface")) {
        const json& rho = root["rho_surface"];
        expect_keys(rho, "rho_surface", {"snr_db", "blocks"});
        cfg.rho_surface.snr_db = get_or<std::vector<double>>(rho, "snr_db", {});
        cfg.rho_surface.blocks = get_or<std::vector<Index>>(rho, "blocks", {});
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::filesystem::path preset_dir() {
    if (const char* env = std::getenv("FADOA_PRESET_DIR"); env && *env) return env;
    return FADOA_PRESET_DIR;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(preset_dir(), ec)) {
        if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

ExperimentConfig load_preset(const std::string& name) {
    const auto path = preset_dir() / (name + ".json");
    if (!std::filesystem::exists(path)) throw ConfigError("unknown preset '" + name + "' (looked in " + preset_dir().string() + ")");
    return load_config(path);
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (snr_db.empty() || blocks.empty() || series.empty()) throw ConfigError("sweep axes must be non-empty");
    for (const auto& s : series)
        if (s.movements.empty()) throw ConfigError("every series needs at least one movement count");
    for (const auto& point : sweep_points(*this)) {
        try {
            point_config(*this, point).validate();
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string(to_string(point.variant)) + " G=" + std::to_string(point.movements) +
                              " N=" + std::to_string(point.blocks) + ": " + e.what());
        }
    }
    if (!rho_surface.snr_db.empty() || !rho_surface.blocks.empty()) {
        if (rho_surface.snr_db.empty() || rho_surface.blocks.empty())
            throw ConfigError("rho_surface needs both snr_db and blocks");
        if (base.array.mode != Mode::ARS) throw ConfigError("rho_surface needs an ARS array");
        for (Index n : rho_surface.blocks)
            if (n < 4) throw ConfigError("rho_surface blocks must be >= 4");
    }
}

std::string canonical_json(const ExperimentConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["array"] = {{"mode", to_string(cfg.base.array.mode)},
                  {"antennas", cfg.base.array.num_antennas},
                  {"movements", cfg.base.array.num_movements},
                  {"step", cfg.base.array.step}};
    j["scene"] = {{"users", cfg.base.scene.num_users},
                  {"paths_per_user", cfg.base.scene.paths_per_user},
                  {"doas_deg", cfg.base.scene.doas_deg},
                  {"path_gain_var", cfg.base.scene.path_gain_var},
                  {"signal_power", cfg.base.scene.signal_power},
                  {"snr_db", cfg.base_snr_db}};
    j["pipeline"] = {{"variant", to_string(cfg.base.variant)},
                     {"blocks", cfg.base.num_blocks},
                     {"subset_size", cfg.base.subset_size},
                     {"grid_step", cfg.base.grid_step},
                     {"subset_selection", cfg.base.selection == SubsetSelection::Random ? "random" : "even"}};
    json series = json::array();
    for (const auto& s : cfg.series) series.push_back({{"variant", to_string(s.variant)}, {"movements", s.movements}});
    j["sweep"] = {{"snr_db", cfg.snr_db}, {"blocks", cfg.blocks}, {"series", series}};
    if (!cfg.rho_surface.snr_db.empty())
        j["rho_surface"] = {{"snr_db", cfg.rho_surface.snr_db}, {"blocks", cfg.rho_surface.blocks}};
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    return j.dump();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_json(cfg)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace fadoa::harness
