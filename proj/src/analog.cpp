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

#include "drim/analog.hpp"

#include <string>

#include "drim/error.hpp"

namespace drim {

void AnalogParams::validate() const {
    if (!(vdd > 0))
        throw ConfigError("analog: vdd must be positive");
    if (!(cell_cap > 0))
        throw ConfigError("analog: cell_cap must be positive");
    if (!(bl_cap >= 0))
        throw ConfigError("analog: bl_cap must be non-negative");
    if (!(0 < vs_low && vs_low < vs_mid && vs_mid < vs_high && vs_high < vdd))
        throw ConfigError("analog: thresholds must satisfy 0 < vs_low < vs_mid < vs_high < vdd");
}

bool VariationSample::is_zero() const {
    for (std::size_t i = 0; i < max_cells; ++i)
        if (d_cell_cap[i] != 0.0 || d_cell_v[i] != 0.0)
            return false;
    return d_bl_cap == 0.0 && d_vs_low == 0.0 && d_vs_high == 0.0 && d_vs_mid == 0.0 && v_noise == 0.0;
}

const char* to_string(Mechanism m) {
    return m == Mechanism::Dra ? "dra" : "tra";
}

double share_voltage(std::span<const bool> cell_bits, const AnalogParams& p, const VariationSample& var) {
    if (cell_bits.empty())
        throw Error("share_voltage: no cells connected");
    if (cell_bits.size() > VariationSample::max_cells)
        throw Error("share_voltage: at most three cells may share charge, got " +
                    std::to_string(cell_bits.size()));

    double charge = 0.0;
    double cap = 0.0;
    for (std::size_t i = 0; i < cell_bits.size(); ++i) {
        const double c = p.cell_cap * (1.0 + var.d_cell_cap[i]);
        const double v = cell_bits[i] ? p.vdd * (1.0 + var.d_cell_v[i]) : 0.0;
        charge += c * v;
        cap += c;
    }
    const double c_bl = p.bl_cap * (1.0 + var.d_bl_cap);
    charge += c_bl * p.vdd / 2.0;
    cap += c_bl;
    return charge / cap + var.v_noise;
}

bool resolve_standard(double v, const AnalogParams& p, const VariationSample& var) {
    return v > p.vs_mid + var.d_vs_mid;
}

SensedPair resolve_dra(double v, const AnalogParams& p, const VariationSample& var) {
    const bool nor_out = v < p.vs_low + var.d_vs_low;
    const bool nand_out = v < p.vs_high + var.d_vs_high;
    const bool blbar = nand_out && !nor_out;
    return {!blbar, blbar};
}

VariationOutcome resolve_with_variation(std::span<const bool> cell_bits, Mechanism mechanism,
                                        const AnalogParams& p, const VariationSample& var) {
    const std::size_t want = mechanism == Mechanism::Dra ? 2 : 3;
    if (cell_bits.size() != want)
        throw ArityError(std::string(to_string(mechanism)) + " needs " + std::to_string(want) + " cells, got " +
                         std::to_string(cell_bits.size()));

    auto resolve = [&](const VariationSample& s) -> SensedPair {
        const double v = share_voltage(cell_bits, p, s);
        if (mechanism == Mechanism::Dra)
            return resolve_dra(v, p, s);
        const bool bl = resolve_standard(v, p, s);
        return {bl, !bl};
    };
    const SensedPair ideal = resolve(VariationSample{});
    const SensedPair actual = resolve(var);
    return {actual, actual.bl != ideal.bl};
}

AnalogEngine::AnalogEngine(const AnalogParams& params) : params_(params) {
    params_.validate();
}

SensedPair AnalogEngine::sense_standard(std::span<const bool> cell_bits) const {
    const bool bl = resolve_standard(share_voltage(cell_bits, params_), params_);
    return {bl, !bl};
}

SensedPair AnalogEngine::sense_dra(std::span<const bool> cell_bits) const {
    if (cell_bits.size() != 2)
        throw ModeViolation("DRA sensing needs exactly two cells");
    return resolve_dra(share_voltage(cell_bits, params_), params_);
}

}  // namespace drim
