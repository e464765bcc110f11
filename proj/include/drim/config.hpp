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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "drim/analog.hpp"
#include "drim/geometry.hpp"
#include "drim/perf.hpp"
#include "drim/reliability.hpp"

namespace drim {

/// Environment variable naming a config file used when --config is absent.
inline constexpr const char* kConfigEnv = "DRIMSIM_CONFIG";

/// Everything a CLI invocation depends on.
///
///     {
///       "preset": "drim-r",
///       "geometry": {"banks": 8, "subarrays_per_bank": 16, ...},
///       "analog": {"vdd": 1.0, "bl_cap": 0.0, "vs_low": 0.25, ...},
///       "cost_model": {"t_aap_ns": 90, "parallel_subarrays": 0,
///                      "calibration": "data/calibration.json"},
///       "variation": {"distribution": "uniform", "trials": 10000, "noise": 0,
///                     "stratified": false, "threshold_scale": "relative",
///                     "vary": {"cell_cap": true, "cell_voltage": true,
///                              "bl_cap": true, "thresholds": true}},
///       "seed": 1,
///       "jobs": 0
///     }
///
/// Every key is optional. The preset sets the geometry, then "geometry"
/// overrides individual fields. Unknown keys are errors.
struct RunConfig {
    std::string preset = "drim-r";
    Geometry geometry;
    AnalogParams analog;
    CostModel cost;
    VariationSpec variation;
    std::uint64_t seed = 1;
    /// 0 means one per hardware thread.
    unsigned jobs = 0;

    /// Throws ConfigError. Relative calibration paths resolve against
    /// `base_dir`.
    static RunConfig from_json(std::string_view text, const std::string& base_dir = ".");
    static RunConfig load(const std::string& path);
    std::string to_json() const;

    unsigned effective_jobs() const;
};

}  // namespace drim
