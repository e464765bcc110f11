// Copyright 2026 The drimsim Authors.
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

#include "drim/config.hpp"

#include <filesystem>
#include <limits>
#include <thread>

#include "json.hpp"

#include "drim/error.hpp"
#include "drim/vecio.hpp"

namespace drim {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
    if (!obj.is_object())
        throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            ok = ok || key == k;
        if (!ok)
            throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void get_uint(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key))
        return;
    const auto& v = obj[key];
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() > std::numeric_limits<T>::max())
        throw ConfigError(where + "." + key + ": expected a non-negative integer");
    out = static_cast<T>(v.get<std::uint64_t>());
}

void get_double(const json& obj, const char* key, double& out, const std::string& where) {
    if (!obj.contains(key))
        return;
    if (!obj[key].is_number())
        throw ConfigError(where + "." + key + ": expected a number");
    out = obj[key].get<double>();
}

void get_bool(const json& obj, const char* key, bool& out, const std::string& where) {
    if (!obj.contains(key))
        return;
    if (!obj[key].is_boolean())
        throw ConfigError(where + "." + key + ": expected true or false");
    out = obj[key].get<bool>();
}

}  // namespace

RunConfig RunConfig::from_json(std::string_view text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    reject_unknown(j, {"preset", "geometry", "analog", "cost_model", "variation", "seed", "jobs"}, "config");

    RunConfig c;
    if (j.contains("preset")) {
        if (!j["preset"].is_string())
            throw ConfigError("config.preset: expected a string");
        c.preset = j["preset"].get<std::string>();
    }
    c.geometry = geometry_preset(c.preset);

    if (j.contains("geometry")) {
        const auto& g = j["geometry"];
        const std::string w = "config.geometry";
        reject_unknown(g, {"banks", "subarrays_per_bank", "rows_per_subarray", "cols_per_row", "data_rows",
                           "x_rows", "dcc_cells"},
                       w);
        get_uint(g, "banks", c.geometry.banks, w);
        get_uint(g, "subarrays_per_bank", c.geometry.subarrays_per_bank, w);
        get_uint(g, "rows_per_subarray", c.geometry.rows_per_subarray, w);
        get_uint(g, "cols_per_row", c.geometry.cols_per_row, w);
        get_uint(g, "data_rows", c.geometry.data_rows, w);
        get_uint(g, "x_rows", c.geometry.x_rows, w);
        get_uint(g, "dcc_cells", c.geometry.dcc_cells, w);
    }
    c.geometry.validate();

    if (j.contains("analog")) {
        const auto& a = j["analog"];
        const std::string w = "config.analog";
        reject_unknown(a, {"vdd", "cell_cap", "bl_cap", "vs_low", "vs_high", "vs_mid"}, w);
        get_double(a, "vdd", c.analog.vdd, w);
        get_double(a, "cell_cap", c.analog.cell_cap, w);
        get_double(a, "bl_cap", c.analog.bl_cap, w);
        get_double(a, "vs_low", c.analog.vs_low, w);
        get_double(a, "vs_high", c.analog.vs_high, w);
        get_double(a, "vs_mid", c.analog.vs_mid, w);
    }
    c.analog.validate();

    c.cost.geometry = c.geometry;
    if (j.contains("cost_model")) {
        const auto& m = j["cost_model"];
        const std::string w = "config.cost_model";
        reject_unknown(m, {"t_aap_ns", "parallel_subarrays", "calibration"}, w);
        get_double(m, "t_aap_ns", c.cost.t_aap_ns, w);
        get_uint(m, "parallel_subarrays", c.cost.parallel_subarrays, w);
        if (m.contains("calibration")) {
            const auto& cal = m["calibration"];
            if (cal.is_string()) {
                std::filesystem::path p = cal.get<std::string>();
                if (p.is_relative())
                    p = std::filesystem::path(base_dir) / p;
                c.cost.calibration = Calibration::load(p.string());
            } else if (cal.is_object()) {
                c.cost.calibration = Calibration::from_json(cal.dump());
            } else {
                throw ConfigError(w + ".calibration: expected a file path or an object");
            }
        }
    }
    c.cost.validate();

    if (j.contains("variation")) {
        const auto& v = j["variation"];
        const std::string w = "config.variation";
        reject_unknown(v, {"distribution", "trials", "noise", "stratified", "threshold_scale", "vary"}, w);
        if (v.contains("distribution")) {
            const auto d = v["distribution"].is_string()
                               ? distribution_from_name(v["distribution"].get<std::string>())
                               : std::nullopt;
            if (!d)
                throw ConfigError(w + ".distribution: expected \"uniform\" or \"gaussian\"");
            c.variation.distribution = *d;
        }
        if (v.contains("threshold_scale")) {
            const auto t = v["threshold_scale"].is_string()
                               ? threshold_scale_from_name(v["threshold_scale"].get<std::string>())
                               : std::nullopt;
            if (!t)
                throw ConfigError(w + ".threshold_scale: expected \"relative\" or \"absolute\"");
            c.variation.threshold_scale = *t;
        }
        get_uint(v, "trials", c.variation.trials, w);
        get_double(v, "noise", c.variation.noise, w);
        get_bool(v, "stratified", c.variation.stratified, w);
        if (v.contains("vary")) {
            const auto& f = v["vary"];
            const std::string wv = w + ".vary";
            reject_unknown(f, {"cell_cap", "cell_voltage", "bl_cap", "thresholds"}, wv);
            get_bool(f, "cell_cap", c.variation.vary_cell_cap, wv);
            get_bool(f, "cell_voltage", c.variation.vary_cell_voltage, wv);
            get_bool(f, "bl_cap", c.variation.vary_bl_cap, wv);
            get_bool(f, "thresholds", c.variation.vary_thresholds, wv);
        }
    }
    get_uint(j, "seed", c.seed, "config");
    get_uint(j, "jobs", c.jobs, "config");
    c.variation.seed = c.seed;
    c.variation.validate();
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return from_json(read_file(path), dir.empty() ? "." : dir);
}

std::string RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["preset"] = preset;
    j["geometry"] = {{"banks", geometry.banks},
                     {"subarrays_per_bank", geometry.subarrays_per_bank},
                     {"rows_per_subarray", geometry.rows_per_subarray},
                     {"cols_per_row", geometry.cols_per_row},
                     {"data_rows", geometry.data_rows},
                     {"x_rows", geometry.x_rows},
                     {"dcc_cells", geometry.dcc_cells}};
    j["analog"] = {{"vdd", analog.vdd},       {"cell_cap", analog.cell_cap}, {"bl_cap", analog.bl_cap},
                   {"vs_low", analog.vs_low}, {"vs_high", analog.vs_high},   {"vs_mid", analog.vs_mid}};
    j["cost_model"] = {{"t_aap_ns", cost.t_aap_ns},
                       {"parallel_subarrays", cost.parallel_subarrays},
                       {"calibration", nlohmann::ordered_json::parse(cost.calibration.to_json())}};
    j["variation"] = {{"distribution", to_string(variation.distribution)},
                      {"trials", variation.trials},
                      {"noise", variation.noise},
                      {"stratified", variation.stratified},
                      {"threshold_scale", to_string(variation.threshold_scale)},
                      {"vary",
                       {{"cell_cap", variation.vary_cell_cap},
                        {"cell_voltage", variation.vary_cell_voltage},
                        {"bl_cap", variation.vary_bl_cap},
                        {"thresholds", variation.vary_thresholds}}}};
    j["seed"] = seed;
    j["jobs"] = jobs;
    return j.dump(2) + "\n";
}

unsigned RunConfig::effective_jobs() const {
    if (jobs != 0)
        return jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace drim
