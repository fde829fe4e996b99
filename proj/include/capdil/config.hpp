// Copyright 2026 The capdil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Experiment configs: flat `key = value` lines grouped under `[section]`
 * headers, `#` starts a comment. Every key is validated; unknown sections or
 * keys are errors that carry the source location.
 *
 *     [grid]      x_min x_max qubits mass
 *     [packet]    x0 sigma boost
 *     [cap]       strength steepness width
 *     [potential] kind(none|gaussian_well) depth width
 *     [time]      dt steps
 *     [run]       mode(exact|sampled) prescription(new|turro) shots seed
 *                 repeats literal(true|false)
 *     [output]    dir tag
 *     [compare]   classical_dt
 *     [bounds]    dts (comma separated)
 */

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "capdil/evolution.hpp"

namespace capdil {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    RunConfig run;
    std::string output_dir = ".";
    std::string tag = "run";
    int repeats = 1;
    /// dt used by the classical side of `compare`; defaults to run.dt.
    std::optional<double> classical_dt;
    std::vector<double> bound_dts{0.2, 0.1, 0.05};
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string &text) {
    T value{};
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("'" + text + "' is not a valid number");
    }
    return value;
}

inline bool parse_bool(const std::string &text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw std::invalid_argument("'" + text + "' is not a boolean");
}

inline std::vector<double> parse_list(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_number<double>(trim(item)));
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

using Setter = std::function<void(ExperimentConfig &, const std::string &)>;

inline const std::map<std::string, Setter, std::less<>> &config_setters() {
    static const std::map<std::string, Setter, std::less<>> setters = {
        {"grid.x_min", [](auto &c, const auto &v) { c.run.x_min = parse_number<double>(v); }},
        {"grid.x_max", [](auto &c, const auto &v) { c.run.x_max = parse_number<double>(v); }},
        {"grid.qubits", [](auto &c, const auto &v) { c.run.qubits = parse_number<int>(v); }},
        {"grid.mass", [](auto &c, const auto &v) { c.run.mass = parse_number<double>(v); }},
        {"packet.x0", [](auto &c, const auto &v) { c.run.x0 = parse_number<double>(v); }},
        {"packet.sigma", [](auto &c, const auto &v) { c.run.sigma = parse_number<double>(v); }},
        {"packet.boost", [](auto &c, const auto &v) { c.run.boost = parse_number<double>(v); }},
        {"cap.strength", [](auto &c, const auto &v) { c.run.cap_strength = parse_number<double>(v); }},
        {"cap.steepness", [](auto &c, const auto &v) { c.run.cap_steepness = parse_number<double>(v); }},
        {"cap.width", [](auto &c, const auto &v) { c.run.cap_width = parse_number<std::size_t>(v); }},
        {"potential.kind",
         [](auto &c, const auto &v) {
             if (v == "none") {
                 c.run.well_depth = 0.0;
             } else if (v != "gaussian_well") {
                 throw std::invalid_argument("expected none or gaussian_well");
             }
         }},
        {"potential.depth", [](auto &c, const auto &v) { c.run.well_depth = parse_number<double>(v); }},
        {"potential.width", [](auto &c, const auto &v) { c.run.well_width = parse_number<double>(v); }},
        {"time.dt", [](auto &c, const auto &v) { c.run.dt = parse_number<double>(v); }},
        {"time.steps", [](auto &c, const auto &v) { c.run.n_steps = parse_number<int>(v); }},
        {"run.mode",
         [](auto &c, const auto &v) {
             if (v == "exact") c.run.mode = Mode::exact;
             else if (v == "sampled") c.run.mode = Mode::sampled;
             else throw std::invalid_argument("expected exact or sampled");
         }},
        {"run.prescription",
         [](auto &c, const auto &v) {
             if (v == "new") c.run.prescription = Prescription::absorbing;
             else if (v == "turro") c.run.prescription = Prescription::turro;
             else throw std::invalid_argument("expected new or turro");
         }},
        {"run.shots", [](auto &c, const auto &v) { c.run.shots = parse_number<std::uint64_t>(v); }},
        {"run.seed", [](auto &c, const auto &v) { c.run.seed = parse_number<std::uint64_t>(v); }},
        {"run.repeats", [](auto &c, const auto &v) { c.repeats = parse_number<int>(v); }},
        {"run.literal", [](auto &c, const auto &v) { c.run.literal_sampling = parse_bool(v); }},
        {"output.dir", [](auto &c, const auto &v) { c.output_dir = v; }},
        {"output.tag", [](auto &c, const auto &v) { c.tag = v; }},
        {"compare.classical_dt", [](auto &c, const auto &v) { c.classical_dt = parse_number<double>(v); }},
        {"bounds.dts", [](auto &c, const auto &v) { c.bound_dts = parse_list(v); }},
    };
    return setters;
}

} // namespace detail

/// Parses a config; `source` names the input in error messages.
inline ExperimentConfig parse_config(std::istream &in,
                                     const std::string &source = "<config>") {
    ExperimentConfig config;
    std::string section;
    std::string line;
    int line_no = 0;
    const auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string text = detail::trim(std::string_view(line).substr(0, hash));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') {
                throw ConfigError(where() + "unterminated section header");
            }
            section = detail::trim(std::string_view(text).substr(1, text.size() - 2));
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where() + "expected 'key = value'");
        }
        const std::string key = detail::trim(std::string_view(text).substr(0, eq));
        const std::string value = detail::trim(std::string_view(text).substr(eq + 1));
        const std::string path = section.empty() ? key : section + "." + key;
        const auto &setters = detail::config_setters();
        const auto it = setters.find(path);
        if (it == setters.end()) {
            throw ConfigError(where() + "unknown key '" + path + "'");
        }
        try {
            it->second(config, value);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(where() + "bad value for '" + path + "': " + e.what());
        }
    }
    if (config.repeats < 1) {
        throw ConfigError(source + ": 'run.repeats' must be at least 1");
    }
    return config;
}

inline ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path + ": cannot open config");
    }
    return parse_config(in, path);
}

} // namespace capdil
