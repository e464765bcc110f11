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
/// Charge sharing and the reconfigurable sense amplifier.
///
/// Voltages are normalized to vdd and capacitances to one unit cell. With the
/// default bl_cap = 0 the shared voltage is n*vdd/C (n cells storing '1', C
/// cells connected). Setting bl_cap > 0 switches to the charge-conserving
/// formulation where the bit-line, precharged to vdd/2, takes part in the
/// sharing:
///
///     v = (sum c_i*v_i + c_bl*vdd/2) / (sum c_i + c_bl)
///
/// Inverters are ideal comparators at their switching voltage. The low-Vs
/// inverter (vs_low ~ vdd/4) acts as a capacitive NOR, the high-Vs inverter
/// (vs_high ~ 3vdd/4) as a capacitive NAND, and the AND of the two drives the
/// complement bit-line with XOR; the bit-line carries XNOR.

#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace drim {

struct AnalogParams {
    double vdd = 1.0;
    double cell_cap = 1.0;
    double bl_cap = 0.0;
    double vs_low = 0.25;
    double vs_high = 0.75;
    double vs_mid = 0.5;

    /// Throws ConfigError unless 0 < vs_low < vs_mid < vs_high < vdd and the
    /// capacitances are usable.
    void validate() const;
};

/// Per-trial perturbations. Capacitance and stored-voltage entries are
/// relative (0.05 = +5%); threshold shifts and noise are absolute volts.
/// Index i of the per-cell arrays is the i-th participating cell.
struct VariationSample {
    static constexpr std::size_t max_cells = 3;

    std::array<double, max_cells> d_cell_cap{};
    std::array<double, max_cells> d_cell_v{};
    double d_bl_cap = 0.0;
    double d_vs_low = 0.0;
    double d_vs_high = 0.0;
    double d_vs_mid = 0.0;
    /// Additive coupling noise on the shared voltage (WL-BL and BL-BL).
    double v_noise = 0.0;

    bool is_zero() const;
};

/// Which multi-row sensing scheme a reliability trial exercises.
enum class Mechanism { Dra, Tra };

const char* to_string(Mechanism m);

/// Voltage on the bit-line after the participating cells share charge.
/// Throws Error for an empty list or more than three cells.
double share_voltage(std::span<const bool> cell_bits, const AnalogParams& params,
                     const VariationSample& var = {});

/// Regular latch sense amplifier: 1 iff v is above the mid threshold.
bool resolve_standard(double v, const AnalogParams& params, const VariationSample& var = {});

struct SensedPair {
    bool bl;
    bool blbar;
};

/// Reconfigurable SA in DRA mode.
SensedPair resolve_dra(double v, const AnalogParams& params, const VariationSample& var = {});

struct VariationOutcome {
    SensedPair sensed;
    bool failed;
};

/// Shares and resolves under `var`, then compares with the same inputs
/// resolved without variation. DRA takes two cells, TRA three.
VariationOutcome resolve_with_variation(std::span<const bool> cell_bits, Mechanism mechanism,
                                        const AnalogParams& params, const VariationSample& var);

/// Sense-amplifier model used by the memory array: ideal comparators at the
/// configured thresholds, no variation.
class AnalogEngine {
  public:
    AnalogEngine() = default;
    explicit AnalogEngine(const AnalogParams& params);

    const AnalogParams& params() const { return params_; }

    /// En_M=1, En_x=1, En_C=0: one cell (read/copy/NOT) or three cells (TRA).
    SensedPair sense_standard(std::span<const bool> cell_bits) const;
    /// En_M=0, En_x=1, En_C=1: two cells.
    SensedPair sense_dra(std::span<const bool> cell_bits) const;

  private:
    AnalogParams params_;
};

}  // namespace drim
