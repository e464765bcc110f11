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
/// Analytical latency, throughput, energy and area model.
///
/// Every platform is described as a list of steps. A step activates some rows,
/// optionally writes the sensed value into others, and takes one AAP slot
/// (DRIM, Ambit) or one cycle (DRISA). Latency is steps * t_aap; throughput
/// fills cols * parallel_subarrays bit-lines per batch.
///
/// Energy per bit-line per step:
///
///     precharge + activate * (1 + extra_row_fraction * (rows_activated - 1))
///               + write * rows_written + [dra_sense] + [drisa_gate]

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drim/geometry.hpp"

namespace drim {

enum class Platform { Drim, Ambit, Drisa1t1c, Drisa3t1c };
enum class PerfOp { Copy, Not, Xnor2, Add };

/// drim, ambit, drisa-1t1c, drisa-3t1c
std::string to_string(Platform p);
std::optional<Platform> platform_from_name(std::string_view name);
/// copy, not, xnor2, add
std::string to_string(PerfOp op);
std::optional<PerfOp> perf_op_from_name(std::string_view name);

struct Step {
    std::uint32_t rows_activated = 1;
    std::uint32_t rows_written = 0;
    bool dra = false;
    bool gate = false;
    std::string label;
};

/// DRIM sequences come from the kernel emitter. Ambit uses its B-group
/// addresses (B8 = {DCC0n, T0}, B12 = {T0, T1, T2}, ...). DRISA gates take a
/// latch cycle and a compute-and-write cycle.
std::vector<Step> step_sequence(PerfOp op, Platform platform);

/// pJ per bit-line.
struct EnergyConstants {
    double precharge = 0.02;
    double activate = 0.06;
    double extra_row_fraction = 0.5;
    double write = 0.06;
    double dra_sense = 0.0;
    double drisa_gate = 0.0;
    /// Moving one kilobyte through the DDR4 interface.
    double ddr4_copy_per_kb = 0.0;
};

/// Ratios the fitted constants reproduce.
struct CalibrationTargets {
    double xnor_vs_ambit = 2.4;
    double xnor_vs_drisa1t1c = 1.6;
    double copy_vs_ddr4 = 69.0;
};

struct Calibration {
    int version = 1;
    EnergyConstants energy;
    CalibrationTargets targets;
    std::vector<std::string> notes;

    /// Fills dra_sense, drisa_gate and ddr4_copy_per_kb from the base
    /// constants so the targets hold exactly.
    static Calibration fit(const EnergyConstants& base = {}, const CalibrationTargets& targets = {});
    /// The fitted defaults compiled into the library.
    static const Calibration& builtin();

    std::string to_json() const;
    /// Throws ConfigError on malformed documents or unknown keys.
    static Calibration from_json(std::string_view text);
    static Calibration load(const std::string& path);
};

struct CostModel {
    double t_aap_ns = 90.0;
    Calibration calibration = Calibration::builtin();
    Geometry geometry;
    /// Sub-arrays computing at once; 0 means every sub-array of the geometry.
    std::uint64_t parallel_subarrays = 0;

    void validate() const;
    std::uint64_t active_subarrays() const;
    std::uint64_t batch_bits() const;
};

double step_energy(const Step& step, const EnergyConstants& e);

struct OpCost {
    /// AAPs (DRIM, Ambit) or cycles (DRISA) per batch.
    std::uint64_t aap_count = 0;
    double latency_ns = 0.0;
    double energy_per_bit_pj = 0.0;
    double energy_per_kb_pj = 0.0;
};

OpCost cost_of(PerfOp op, Platform platform, const CostModel& model);

/// Operations per second on a vector_bits-long input. Throws ConfigError
/// unless vector_bits is a positive multiple of cols_per_row.
double throughput(PerfOp op, Platform platform, std::uint64_t vector_bits, const CostModel& model);

/// Total pJ for one operation over vector_bits bits.
double energy_pj(PerfOp op, Platform platform, std::uint64_t vector_bits, const CostModel& model);

struct EnergyComparison {
    Platform platform;
    double energy_per_kb_pj;
    /// platform energy / DRIM energy
    double ratio;
};

struct EnergyReport {
    PerfOp op;
    double drim_per_kb_pj;
    std::vector<EnergyComparison> baselines;
    /// Copy only: DDR4 interface energy / DRIM energy.
    std::optional<double> ddr4_ratio;
};

EnergyReport energy_report(PerfOp op, const CostModel& model);

struct AreaReport {
    std::uint32_t cols = 0;
    std::uint32_t subarrays = 0;
    std::uint32_t sa_addon_each = 22;
    std::uint64_t sa_transistors = 0;
    std::uint32_t dcc_rows = 0;
    std::uint64_t dcc_transistors = 0;
    std::uint32_t mrd_wordlines = 0;
    std::uint64_t mrd_transistors = 0;
    std::uint32_t ctrl_muxes = 3;
    std::uint64_t ctrl_transistors = 0;
    std::uint64_t total_per_subarray = 0;
    std::uint64_t total_chip = 0;
    /// Add-on transistors per bit-line (SA + DCC), i.e. rows of 1T1C cells.
    std::uint32_t equivalent_rows = 0;
    /// Including decoder and control, spread over the row width.
    double equivalent_rows_exact = 0.0;
    double rows_fraction_pct = 0.0;
    /// Published headline figures, echoed unchanged.
    std::uint32_t reported_rows = 24;
    double reported_chip_area_pct = 9.3;
    std::string caveat;
};

AreaReport area_report(const Geometry& geometry);

/// Report documents for the CLI.
std::string perf_report_json(const std::vector<PerfOp>& ops, const std::vector<Platform>& platforms,
                             const std::vector<std::uint64_t>& sizes, const CostModel& model);
std::string perf_report_csv(const std::vector<PerfOp>& ops, const std::vector<Platform>& platforms,
                            const std::vector<std::uint64_t>& sizes, const CostModel& model);
std::string area_report_json(const AreaReport& r);

}  // namespace drim
