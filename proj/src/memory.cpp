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

#include "drim/memory.hpp"

#include <algorithm>
#include <array>

#include "drim/error.hpp"

namespace drim {

namespace {

bool same_dcc_cell(const RowKind& a, const RowKind& b) {
    return a.is_dcc() && b.is_dcc() && a.index == b.index && a.kind != b.kind;
}

// Evaluates the sense amplifier once per distinct input pattern and applies
// the truth table column-parallel, one 64-bit word at a time.
BitRow sense_columns(std::span<const BitRow* const> inputs, std::size_t nbits, SenseMode mode,
                     const AnalogEngine& analog) {
    const std::size_t k = inputs.size();
    std::array<bool, 8> lut{};
    for (std::size_t pattern = 0; pattern < (std::size_t{1} << k); ++pattern) {
        std::array<bool, 3> bits{};
        for (std::size_t j = 0; j < k; ++j)
            bits[j] = (pattern >> j) & 1u;
        const std::span<const bool> cells(bits.data(), k);
        lut[pattern] = mode == SenseMode::Dra ? analog.sense_dra(cells).bl : analog.sense_standard(cells).bl;
    }

    BitRow out(nbits);
    auto words = out.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t acc = 0;
        for (std::size_t pattern = 0; pattern < (std::size_t{1} << k); ++pattern) {
            if (!lut[pattern])
                continue;
            std::uint64_t m = ~std::uint64_t{0};
            for (std::size_t j = 0; j < k; ++j) {
                const std::uint64_t v = inputs[j]->words()[w];
                m &= ((pattern >> j) & 1u) ? v : ~v;
            }
            acc |= m;
        }
        words[w] = acc;
    }
    out.trim();
    return out;
}

}  // namespace

SubArrayState::SubArrayState(const Geometry& geometry, bool fill)
    : geometry_(geometry), rows_(geometry.storage_rows(), BitRow(geometry.cols_per_row, fill)) {
    rows_[geometry_.ctrl0_row()].fill(false);
    rows_[geometry_.ctrl1_row()].fill(true);
}

void SubArrayState::check_row(const RowKind& row) const {
    if (!row.valid_in(geometry_))
        throw AddressError("row " + to_string(row, geometry_) + " is outside the sub-array geometry");
}

void SubArrayState::precharge() {
    phase_ = Phase::Precharged;
    sense_bl_.reset();
    sense_blbar_.reset();
    raised_.clear();
}

void SubArrayState::activate(std::span<const RowKind> rows, SenseMode mode, const AnalogEngine& analog) {
    if (phase_ != Phase::Precharged)
        throw SequencingError("ACTIVATE issued while the sub-array is not precharged");
    if (rows.empty() || rows.size() > 3)
        throw ModeViolation("an activation raises 1 to 3 wordlines, got " + std::to_string(rows.size()));
    for (const auto& r : rows)
        check_row(r);

    if (rows.size() >= 2) {
        for (const auto& r : rows)
            if (!r.is_compute())
                throw DecoderViolation("multi-row activation of data row " + to_string(r, geometry_) +
                                       " (only compute rows sit behind the modified decoder)");
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = i + 1; j < rows.size(); ++j) {
                if (rows[i] == rows[j])
                    throw ModeViolation("wordline " + to_string(rows[i], geometry_) + " listed twice");
                if (same_dcc_cell(rows[i], rows[j]))
                    throw DccConflict("both wordlines of DCC cell " + std::to_string(rows[i].index) + " raised");
            }
        for (const auto& r : rows)
            if (r.kind == RowKind::Kind::DccComp)
                throw ModeViolation("complement wordline " + to_string(r, geometry_) +
                                    " cannot take part in multi-row sensing");
    }
    if (mode == SenseMode::Dra && rows.size() != 2)
        throw ModeViolation("DRA sensing needs exactly two rows, got " + std::to_string(rows.size()));
    if (mode == SenseMode::Standard && rows.size() == 2)
        throw ModeViolation("dual-row activation needs DRA sensing");

    std::array<const BitRow*, 3> inputs{};
    for (std::size_t i = 0; i < rows.size(); ++i)
        inputs[i] = &cell(rows[i]);
    BitRow sensed = sense_columns(std::span(inputs.data(), rows.size()), geometry_.cols_per_row, mode, analog);

    // A lone complement wordline puts the cell on the complement bit-line.
    if (rows.size() == 1 && rows[0].kind == RowKind::Kind::DccComp) {
        sense_blbar_ = sensed;
        sense_bl_ = ~sensed;
    } else {
        sense_blbar_ = ~sensed;
        sense_bl_ = std::move(sensed);
    }

    for (const auto& r : rows)
        cell(r) = r.kind == RowKind::Kind::DccComp ? *sense_blbar_ : *sense_bl_;
    raised_.assign(rows.begin(), rows.end());
    phase_ = Phase::SharedAndSensed;
}

void SubArrayState::write_into_active(const RowKind& dest) {
    if (phase_ != Phase::SharedAndSensed)
        throw SequencingError("destination ACTIVATE issued while the sub-array is precharged");
    check_row(dest);
    if (dest.is_data() && (dest.index == geometry_.ctrl0_row() || dest.index == geometry_.ctrl1_row()))
        throw AddressError("constant row " + to_string(dest, geometry_) + " cannot be overwritten");
    for (const auto& r : raised_)
        if (same_dcc_cell(r, dest))
            throw DccConflict("both wordlines of DCC cell " + std::to_string(dest.index) + " raised");

    cell(dest) = dest.kind == RowKind::Kind::DccComp ? *sense_blbar_ : *sense_bl_;
    if (std::find(raised_.begin(), raised_.end(), dest) == raised_.end())
        raised_.push_back(dest);
}

BitRow SubArrayState::read(const RowKind& row) const {
    check_row(row);
    return row.kind == RowKind::Kind::DccComp ? ~cell(row) : cell(row);
}

void SubArrayState::write(const RowKind& row, const BitRow& bits) {
    check_row(row);
    if (row.is_data() && (row.index == geometry_.ctrl0_row() || row.index == geometry_.ctrl1_row()))
        throw AddressError("constant row " + to_string(row, geometry_) + " is read-only");
    if (bits.size() != geometry_.cols_per_row)
        throw AddressError("row write of " + std::to_string(bits.size()) + " bits into a " +
                           std::to_string(geometry_.cols_per_row) + "-column row");
    cell(row) = row.kind == RowKind::Kind::DccComp ? ~bits : bits;
}

MemoryState::MemoryState(const Geometry& geometry, bool fill) : geometry_(geometry) {
    geometry_.validate();
    subarrays_.reserve(geometry_.subarray_count());
    for (std::uint32_t i = 0; i < geometry_.subarray_count(); ++i)
        subarrays_.emplace_back(geometry_, fill);
}

SubArrayState& MemoryState::subarray(std::uint32_t bank, std::uint32_t sub) {
    if (bank >= geometry_.banks || sub >= geometry_.subarrays_per_bank)
        throw AddressError("sub-array b" + std::to_string(bank) + ".s" + std::to_string(sub) + " does not exist");
    return subarrays_[bank * geometry_.subarrays_per_bank + sub];
}

const SubArrayState& MemoryState::subarray(std::uint32_t bank, std::uint32_t sub) const {
    return const_cast<MemoryState*>(this)->subarray(bank, sub);
}

BitRow MemoryState::read_row(const RowAddress& addr) const {
    return subarray(addr.bank, addr.subarray).read(addr.row);
}

void MemoryState::write_row(const RowAddress& addr, const BitRow& bits) {
    subarray(addr.bank, addr.subarray).write(addr.row, bits);
}

}  // namespace drim
