#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "memspike/glyphs.hpp"
#include "memspike/network.hpp"

namespace memspike {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Experiment description: key=value lines, '#' comments, blank lines ignored.
// Unknown keys are rejected by name. Numeric engine knobs default to the
// values in NetworkConfig; v_threshold, theta_conv and the weight clamp are
// derived from the dataset / w0 when not set explicitly.
struct RunConfig {
    std::optional<int> side;
    std::vector<Glyph> classes;
    SharingMode sharing = SharingMode::Unshared;
    uint64_t seed = 0;

    double w0 = 1.0;
    double eta = 30.0;
    double eta_decay = 0.1;
    double loser_scale = 0.1;
    std::optional<double> v_threshold;
    std::optional<double> theta_conv;
    std::optional<double> w_min, w_max;
    int max_cycles = 50;

    double a = 0.09;
    double b = 2.77;
    long ticks_per_unit = 180;

    double k1 = 100.0;
    double k2 = 1.0;
    double dt_max = 4.0;

    double tick_ns = 4.0;
    long slot_ticks = 1000;
    long t_black_tick = 0;
    long t_white_tick = 500;

    int flips = 4;     // noisy-test pixel flips; see README on calibration
    int n_sets = 150;  // noisy sets per class
    int stdp_points = 81;

    // sweep.<key> = comma list; axes keep file order, last axis fastest.
    std::vector<std::pair<std::string, std::vector<std::string>>> sweep_axes;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        const size_t comma = s.find(',', pos);
        const std::string item = trim(comma == std::string::npos ? s.substr(pos)
                                                                 : s.substr(pos, comma - pos));
        if (item.empty()) throw ConfigError("empty item in list '" + s + "'");
        out.push_back(item);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t idx = 0;
        const double d = std::stod(v, &idx);
        if (idx != v.size()) throw std::invalid_argument("junk");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    }
}

inline long parse_long(const std::string& key, const std::string& v) {
    try {
        size_t idx = 0;
        const long l = std::stol(v, &idx);
        if (idx != v.size()) throw std::invalid_argument("junk");
        return l;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    }
}

inline uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        // stoull would quietly wrap a leading minus around 2^64
        if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
        size_t idx = 0;
        const unsigned long long u = std::stoull(v, &idx);
        if (idx != v.size()) throw std::invalid_argument("junk");
        return u;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + v + "'");
    }
}

inline SharingMode parse_sharing(const std::string& v) {
    if (v == "on" || v == "shared") return SharingMode::Shared;
    if (v == "off" || v == "unshared") return SharingMode::Unshared;
    throw ConfigError("key 'sharing': expected on/off or shared/unshared, got '" + v + "'");
}

inline std::vector<Glyph> parse_classes(const std::string& v) {
    std::vector<Glyph> out;
    for (const auto& item : split_list(v)) {
        if (item.size() != 1) throw ConfigError("key 'classes': bad class '" + item + "'");
        Glyph g;
        try {
            g = glyph_from_letter(item[0]);
        } catch (const std::invalid_argument&) {
            throw ConfigError("key 'classes': bad class '" + item + "'");
        }
        if (std::find(out.begin(), out.end(), g) != out.end())
            throw ConfigError("key 'classes': class '" + item + "' listed twice");
        out.push_back(g);
    }
    return out;
}

}  // namespace detail

inline void apply_config_entry(RunConfig& rc, const std::string& key, const std::string& value) {
    using namespace detail;
    if (key == "side") rc.side = static_cast<int>(parse_long(key, value));
    else if (key == "classes") rc.classes = parse_classes(value);
    else if (key == "sharing") rc.sharing = parse_sharing(value);
    else if (key == "seed") rc.seed = parse_u64(key, value);
    else if (key == "w0") rc.w0 = parse_double(key, value);
    else if (key == "eta") rc.eta = parse_double(key, value);
    else if (key == "eta_decay") rc.eta_decay = parse_double(key, value);
    else if (key == "loser_scale") rc.loser_scale = parse_double(key, value);
    else if (key == "v_threshold") rc.v_threshold = parse_double(key, value);
    else if (key == "theta_conv") rc.theta_conv = parse_double(key, value);
    else if (key == "w_min") rc.w_min = parse_double(key, value);
    else if (key == "w_max") rc.w_max = parse_double(key, value);
    else if (key == "max_cycles") rc.max_cycles = static_cast<int>(parse_long(key, value));
    else if (key == "a") rc.a = parse_double(key, value);
    else if (key == "b") rc.b = parse_double(key, value);
    else if (key == "ticks_per_unit") rc.ticks_per_unit = parse_long(key, value);
    else if (key == "k1") rc.k1 = parse_double(key, value);
    else if (key == "k2") rc.k2 = parse_double(key, value);
    else if (key == "dt_max") rc.dt_max = parse_double(key, value);
    else if (key == "tick_ns") rc.tick_ns = parse_double(key, value);
    else if (key == "slot_ticks") rc.slot_ticks = parse_long(key, value);
    else if (key == "t_black_tick") rc.t_black_tick = parse_long(key, value);
    else if (key == "t_white_tick") rc.t_white_tick = parse_long(key, value);
    else if (key == "flips") rc.flips = static_cast<int>(parse_long(key, value));
    else if (key == "n_sets") rc.n_sets = static_cast<int>(parse_long(key, value));
    else if (key == "stdp_points") rc.stdp_points = static_cast<int>(parse_long(key, value));
    else throw ConfigError("unknown config key '" + key + "'");
}

inline RunConfig parse_run_config(const std::string& text) {
    RunConfig rc;
    size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const size_t nl = text.find('\n', pos);
        std::string line = nl == std::string::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (!line.empty()) {
            const size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
            if (key.rfind("sweep.", 0) == 0) {
                const std::string axis = key.substr(6);
                if (axis.empty() || axis.rfind("sweep.", 0) == 0)
                    throw ConfigError("bad sweep axis key '" + key + "'");
                // Validate the axis target by dry-applying every value, so a
                // typo fails here rather than halfway through a sweep.
                const auto values = detail::split_list(value);
                for (const auto& v : values) {
                    RunConfig probe = rc;
                    apply_config_entry(probe, axis, v);
                }
                rc.sweep_axes.emplace_back(axis, values);
            } else {
                apply_config_entry(rc, key, value);
            }
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return rc;
}

// Engine view of the config, with dataset-dependent defaults resolved.
inline NetworkConfig resolve_network_config(const RunConfig& rc,
                                            const std::vector<BinaryImage>& templates) {
    NetworkConfig nc;
    nc.width = nc.height = rc.side.value_or(templates.empty() ? 0 : templates.front().width);
    nc.n_classes = static_cast<int>(templates.size());
    nc.sharing = rc.sharing;
    nc.timing = TimingConfig{rc.tick_ns, rc.slot_ticks, rc.t_black_tick, rc.t_white_tick};
    nc.psp = PspConfig{rc.a, rc.b, rc.ticks_per_unit};
    nc.device = MemristorParams{rc.k1, rc.k2, rc.dt_max};
    nc.w0 = rc.w0;
    nc.eta = rc.eta;
    nc.eta_decay = rc.eta_decay;
    nc.loser_scale = rc.loser_scale;
    nc.v_threshold = rc.v_threshold.value_or(default_threshold(nc.psp, nc.w0, templates));
    nc.theta_conv = rc.theta_conv.value_or(0.01 * rc.w0);
    nc.w_min = rc.w_min.value_or(-4.0 * rc.w0);
    nc.w_max = rc.w_max.value_or(+4.0 * rc.w0);
    nc.max_cycles = rc.max_cycles;
    validate(nc);
    return nc;
}

inline void require_dataset_keys(const RunConfig& rc) {
    if (!rc.side) throw ConfigError("missing required key 'side'");
    if (rc.classes.empty()) throw ConfigError("missing required key 'classes'");
}

}  // namespace memspike
