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

namespace drim {

/// Organization of the simulated device.
///
/// Each computational sub-array exposes data_rows regular wordlines, x_rows
/// compute rows and two wordlines per dual-contact cell. Their sum must equal
/// rows_per_subarray. The last two data rows are reserved as the constant
/// rows CTRL0 (all zeros) and CTRL1 (all ones).
struct Geometry {
    std::uint32_t banks = 8;
    std::uint32_t subarrays_per_bank = 16;
    std::uint32_t rows_per_subarray = 512;
    std::uint32_t cols_per_row = 256;
    std::uint32_t data_rows = 500;
    std::uint32_t x_rows = 8;
    std::uint32_t dcc_cells = 2;

    /// Throws ConfigError when the invariants do not hold.
    void validate() const;

    std::uint32_t subarray_count() const { return banks * subarrays_per_bank; }
    std::uint32_t dcc_wordlines() const { return 2 * dcc_cells; }
    std::uint32_t compute_wordlines() const { return x_rows + dcc_wordlines(); }
    /// Physical storage rows per sub-array (a DCC is one row with two wordlines).
    std::uint32_t storage_rows() const { return data_rows + x_rows + dcc_cells; }
    /// Data rows available to programs (everything except CTRL0/CTRL1).
    std::uint32_t user_data_rows() const { return data_rows - 2; }
    std::uint32_t ctrl0_row() const { return data_rows - 2; }
    std::uint32_t ctrl1_row() const { return data_rows - 1; }

    friend bool operator==(const Geometry&, const Geometry&) = default;
};

/// Named organizations: "drim-r" (8 banks) and "drim-s" (256 banks, stacked).
Geometry geometry_preset(std::string_view name);

/// One wordline of a computational sub-array.
///
/// DccTrue(k) and DccComp(k) name the same storage capacitor; the first
/// couples it to the bit-line, the second to the complement bit-line.
struct RowKind {
    enum class Kind : std::uint8_t { Data, X, DccTrue, DccComp };

    Kind kind = Kind::Data;
    /// Data: 0-based row. X: 1-based compute row. DccTrue/DccComp: 1-based cell.
    std::uint32_t index = 0;

    static constexpr RowKind data(std::uint32_t i) { return {Kind::Data, i}; }
    static constexpr RowKind x(std::uint32_t i) { return {Kind::X, i}; }
    static constexpr RowKind dcc_true(std::uint32_t cell) { return {Kind::DccTrue, cell}; }
    static constexpr RowKind dcc_comp(std::uint32_t cell) { return {Kind::DccComp, cell}; }
    /// dcc1 = DccTrue(1), dcc2 = DccComp(1), dcc3 = DccTrue(2), ...
    static constexpr RowKind dcc_wordline(std::uint32_t n) {
        return n % 2 == 1 ? dcc_true((n + 1) / 2) : dcc_comp(n / 2);
    }

    bool is_data() const { return kind == Kind::Data; }
    bool is_dcc() const { return kind == Kind::DccTrue || kind == Kind::DccComp; }
    /// Wordlines hanging off the modified row decoder.
    bool is_compute() const { return !is_data(); }
    /// Wordline number 1..2*dcc_cells for DCC rows.
    std::uint32_t dcc_wordline_number() const { return kind == Kind::DccTrue ? 2 * index - 1 : 2 * index; }

    bool valid_in(const Geometry& g) const;
    /// Index of the physical storage row inside SubArrayState.
    std::uint32_t storage_index(const Geometry& g) const;

    friend bool operator==(const RowKind&, const RowKind&) = default;
    friend auto operator<=>(const RowKind&, const RowKind&) = default;
};

/// Assembly spelling: d<i>, x<i>, dcc<i>, or ctrl0/ctrl1 for the constant rows.
std::string to_string(const RowKind& row, const Geometry& g);

struct RowAddress {
    std::uint32_t bank = 0;
    std::uint32_t subarray = 0;
    RowKind row;

    bool valid_in(const Geometry& g) const {
        return bank < g.banks && subarray < g.subarrays_per_bank && row.valid_in(g);
    }
    std::uint32_t linear_subarray(const Geometry& g) const { return bank * g.subarrays_per_bank + subarray; }

    friend bool operator==(const RowAddress&, const RowAddress&) = default;
};

}  // namespace drim
