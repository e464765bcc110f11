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

#include "drim/geometry.hpp"

#include "drim/error.hpp"

namespace drim {

void Geometry::validate() const {
    auto positive = [](std::uint32_t v, const char* name) {
        if (v == 0)
            throw ConfigError(std::string("geometry: ") + name + " must be >= 1");
    };
    positive(banks, "banks");
    positive(subarrays_per_bank, "subarrays_per_bank");
    positive(rows_per_subarray, "rows_per_subarray");
    positive(cols_per_row, "cols_per_row");
    positive(data_rows, "data_rows");
    positive(x_rows, "x_rows");
    positive(dcc_cells, "dcc_cells");
    // CTRL0 and CTRL1 live in data space, so at least one row must remain.
    if (data_rows < 3)
        throw ConfigError("geometry: data_rows must be >= 3 (two rows are reserved for CTRL0/CTRL1)");
    const std::uint64_t wordlines = std::uint64_t{data_rows} + x_rows + 2ull * dcc_cells;
    if (wordlines != rows_per_subarray)
        throw ConfigError("geometry: data_rows + x_rows + 2*dcc_cells = " + std::to_string(wordlines) +
                          " does not match rows_per_subarray = " + std::to_string(rows_per_subarray));
}

Geometry geometry_preset(std::string_view name) {
    Geometry g;
    if (name == "drim-r")
        return g;
    if (name == "drim-s") {
        g.banks = 256;
        return g;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected drim-r or drim-s)");
}

bool RowKind::valid_in(const Geometry& g) const {
    switch (kind) {
    case Kind::Data:
        return index < g.data_rows;
    case Kind::X:
        return index >= 1 && index <= g.x_rows;
    case Kind::DccTrue:
    case Kind::DccComp:
        return index >= 1 && index <= g.dcc_cells;
    }
    return false;
}

std::uint32_t RowKind::storage_index(const Geometry& g) const {
    switch (kind) {
    case Kind::Data:
        return index;
    case Kind::X:
        return g.data_rows + index - 1;
    case Kind::DccTrue:
    case Kind::DccComp:
        return g.data_rows + g.x_rows + index - 1;
    }
    return 0;
}

std::string to_string(const RowKind& row, const Geometry& g) {
    switch (row.kind) {
    case RowKind::Kind::Data:
        if (row.index == g.ctrl0_row())
            return "ctrl0";
        if (row.index == g.ctrl1_row())
            return "ctrl1";
        return "d" + std::to_string(row.index);
    case RowKind::Kind::X:
        return "x" + std::to_string(row.index);
    case RowKind::Kind::DccTrue:
    case RowKind::Kind::DccComp:
        return "dcc" + std::to_string(row.dcc_wordline_number());
    }
    return "?";
}

}  // namespace drim
