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

/// \file
/// Monte-Carlo process-variation sweeps over DRA and TRA sensing.
///
/// Each trial draws one unit vector u in [-1, 1]^12 and one input pattern from
/// a stream keyed only by (seed, trial). Every level and mechanism scales the
/// same draws, so sweeps use common random numbers: results are reproducible
/// under any sharding, and failure counts move smoothly with the level.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "drim/analog.hpp"

namespace drim {

enum class Distribution { Uniform, Gaussian };

/// How far an inverter or latch threshold may move at level l:
/// Relative = +-l * its nominal value, Absolute = +-l * vdd.
enum class ThresholdScale { Relative, Absolute };

const char* to_string(Distribution d);
std::optional<Distribution> distribution_from_name(std::string_view name);
const char* to_string(ThresholdScale s);
std::optional<ThresholdScale> threshold_scale_from_name(std::string_view name);

struct VariationSpec {
    /// Fraction, 0.1 = +-10%.
    double level = 0.0;
    /// Gaussian: sigma = level / 3, truncated at +-level.
    Distribution distribution = Distribution::Uniform;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;

    bool vary_cell_cap = true;
    bool vary_cell_voltage = true;
    bool vary_bl_cap = true;
    bool vary_thresholds = true;
    ThresholdScale threshold_scale = ThresholdScale::Relative;
    /// Coupling noise amplitude in units of vdd, independent of the level.
    double noise = 0.0;
    /// Cycle through the input patterns instead of drawing them.
    bool stratified = false;

    /// Throws ConfigError.
    void validate() const;
};

/// Raw per-trial draws, before scaling.
struct UnitDraws {
    std::array<double, 12> u{};
    /// Three pattern bits; DRA uses the low two.
    unsigned pattern = 0;
};

/// Stream for one trial.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

UnitDraws draw_unit(std::mt19937_64& rng, Distribution distribution);

/// Scales unit draws. Capacitances and stored voltages vary relatively by
/// up to +-level; thresholds per spec.threshold_scale.
VariationSample scale(const UnitDraws& d, const VariationSpec& spec, const AnalogParams& params);

/// One sample from `rng` at spec.level.
VariationSample sample(const VariationSpec& spec, const AnalogParams& params, std::mt19937_64& rng);

struct SweepRow {
    double level = 0.0;
    Mechanism mechanism = Mechanism::Dra;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;

    double failure_pct() const { return trials == 0 ? 0.0 : 100.0 * failures / trials; }
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::uint64_t seed = 0;

    const SweepRow* find(double level, Mechanism m) const;
    /// level,mechanism,trials,failures,failure_pct,seed
    std::string to_csv() const;
};

/// Rows are ordered by level, then by mechanism as given. spec.level is
/// ignored. `jobs` shards the trials; the result does not depend on it.
SweepResult run_sweep(const std::vector<double>& levels, const std::vector<Mechanism>& mechanisms,
                      const VariationSpec& spec, const AnalogParams& params = {}, unsigned jobs = 1);

}  // namespace drim
