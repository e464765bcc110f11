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

// Shared helpers for the test binaries: seeded generators and small
// reference models written without the simulator's code paths.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "drim/bitrow.hpp"
#include "drim/geometry.hpp"

namespace drim::testing {

inline BitRow random_row(std::mt19937_64& rng, std::size_t nbits) {
    BitRow r(nbits);
    for (auto& w : r.words())
        w = rng();
    r.trim();
    return r;
}

/// Small geometry for fast exhaustive tests: 2 banks x 2 sub-arrays, 16 data
/// rows, 64 columns.
inline Geometry tiny_geometry() {
    Geometry g;
    g.banks = 2;
    g.subarrays_per_bank = 2;
    g.cols_per_row = 64;
    g.data_rows = 16;
    g.x_rows = 8;
    g.dcc_cells = 2;
    g.rows_per_subarray = g.data_rows + g.x_rows + 2 * g.dcc_cells;
    return g;
}

/// Column with `bits` set: bit k of `pattern` -> column value k.
inline std::vector<bool> pattern_bits(unsigned pattern, unsigned n) {
    std::vector<bool> v;
    for (unsigned k = 0; k < n; ++k)
        v.push_back(((pattern >> k) & 1u) != 0);
    return v;
}

/// Ideal shared voltage computed from first principles: total charge over
/// total capacitance, bit-line precharged to vdd/2.
inline double reference_share(const std::vector<bool>& cells, double vdd, double c_cell, double c_bl) {
    double q = c_bl * vdd / 2.0;
    for (bool b : cells)
        q += b ? c_cell * vdd : 0.0;
    return q / (c_cell * static_cast<double>(cells.size()) + c_bl);
}

}  // namespace drim::testing
