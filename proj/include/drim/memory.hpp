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

#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "drim/analog.hpp"
#include "drim/bitrow.hpp"
#include "drim/geometry.hpp"

namespace drim {

/// Control-bit setting of the reconfigurable sense amplifier.
enum class SenseMode {
    Standard,  ///< En_M=1 En_x=1 En_C=0: read/write, copy, NOT, TRA.
    Dra,       ///< En_M=0 En_x=1 En_C=1: dual-row XNOR/XOR.
};

enum class Phase { Precharged, SharedAndSensed };

/// Contents and sense state of one computational sub-array.
///
/// The legal command cycle is activate -> write_into_active* -> precharge.
/// Out-of-order commands throw; nothing is reordered.
class SubArrayState {
  public:
    SubArrayState(const Geometry& geometry, bool fill);

    Phase phase() const { return phase_; }
    const std::optional<BitRow>& sense_bl() const { return sense_bl_; }
    const std::optional<BitRow>& sense_blbar() const { return sense_blbar_; }
    /// Wordlines currently raised (sources, then destinations in order).
    const std::vector<RowKind>& raised() const { return raised_; }

    void precharge();

    /// Raises `rows`, shares charge per column, senses in `mode` and restores
    /// every raised cell with the sensed value (destructive for DRA/TRA).
    void activate(std::span<const RowKind> rows, SenseMode mode, const AnalogEngine& analog);
    void activate(std::initializer_list<RowKind> rows, SenseMode mode, const AnalogEngine& analog) {
        activate(std::span<const RowKind>(rows.begin(), rows.size()), mode, analog);
    }

    /// Second ACTIVATE of an AAP: drives `dest` from the latched bit-lines.
    void write_into_active(const RowKind& dest);

    /// Host view of a wordline; DccComp reads the complement of its cell.
    BitRow read(const RowKind& row) const;
    /// Host store; rejects CTRL0/CTRL1.
    void write(const RowKind& row, const BitRow& bits);

    /// Raw storage rows (data, then x1.., then one row per DCC cell).
    std::span<const BitRow> storage() const { return rows_; }
    std::span<BitRow> storage() { return rows_; }

  private:
    void check_row(const RowKind& row) const;
    BitRow& cell(const RowKind& row) { return rows_[row.storage_index(geometry_)]; }
    const BitRow& cell(const RowKind& row) const { return rows_[row.storage_index(geometry_)]; }

    Geometry geometry_;
    std::vector<BitRow> rows_;
    Phase phase_ = Phase::Precharged;
    std::optional<BitRow> sense_bl_;
    std::optional<BitRow> sense_blbar_;
    std::vector<RowKind> raised_;
};

/// All sub-arrays of the device. Sub-arrays share no state, so distinct ones
/// may be driven from different threads.
class MemoryState {
  public:
    /// Every storage row is set to `fill`; CTRL0/CTRL1 are set to 0/1.
    MemoryState(const Geometry& geometry, bool fill = false);

    const Geometry& geometry() const { return geometry_; }

    SubArrayState& subarray(std::uint32_t bank, std::uint32_t sub);
    const SubArrayState& subarray(std::uint32_t bank, std::uint32_t sub) const;
    SubArrayState& subarray(std::uint32_t linear) { return subarrays_.at(linear); }
    const SubArrayState& subarray(std::uint32_t linear) const { return subarrays_.at(linear); }
    std::size_t subarray_count() const { return subarrays_.size(); }

    BitRow read_row(const RowAddress& addr) const;
    void write_row(const RowAddress& addr, const BitRow& bits);

  private:
    Geometry geometry_;
    std::vector<SubArrayState> subarrays_;
};

}  // namespace drim
