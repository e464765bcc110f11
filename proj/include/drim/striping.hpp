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

#include <algorithm>
#include <cstdint>
#include <optional>

#include "drim/bitrow.hpp"
#include "drim/geometry.hpp"
#include "drim/isa.hpp"
#include "drim/memory.hpp"

namespace drim {

/// Placement of row-slices for vectors wider than one row.
///
/// Stripe s of a vector based at data row d in sub-array q lives at row
/// d + (s % per_subarray) of sub-array q + s / per_subarray (linear order:
/// sub-arrays within a bank, then banks). Compute and constant rows are the
/// same for every stripe.
struct StripeLayout {
    std::uint64_t stripes = 0;
    std::uint32_t per_subarray = 1;
    std::uint32_t groups = 0;

    StripeLayout() = default;
    StripeLayout(std::uint64_t stripe_count, std::optional<std::uint32_t> stripes_per_subarray) {
        stripes = stripe_count;
        const std::uint64_t p = stripes_per_subarray.value_or(
            static_cast<std::uint32_t>(std::min<std::uint64_t>(std::max<std::uint64_t>(stripes, 1), 0xFFFFFFFFull)));
        per_subarray = static_cast<std::uint32_t>(std::max<std::uint64_t>(p, 1));
        groups = static_cast<std::uint32_t>((stripes + per_subarray - 1) / per_subarray);
    }
    StripeLayout(const Program& program, const Geometry& g)
        : StripeLayout(program.stripes(g), program.stripes_per_subarray) {}

    std::uint32_t group_of(std::uint64_t stripe) const { return static_cast<std::uint32_t>(stripe / per_subarray); }
    std::uint32_t offset_of(std::uint64_t stripe) const { return static_cast<std::uint32_t>(stripe % per_subarray); }

    /// Linear sub-array index holding `stripe` of an instruction row.
    std::uint32_t subarray_of(const RowAddress& r, std::uint64_t stripe, const Geometry& g) const {
        return r.linear_subarray(g) + group_of(stripe);
    }

    /// Wordline addressed by `stripe` of an instruction row.
    RowKind row_of(const RowAddress& r, std::uint64_t stripe, const Geometry& g) const {
        if (!r.row.is_data() || r.row.index >= g.user_data_rows())
            return r.row;
        return RowKind::data(r.row.index + offset_of(stripe));
    }
};

/// Writes a stripes*cols-bit vector to the rows `layout` assigns to `base`.
void store_vector(MemoryState& memory, const StripeLayout& layout, const RowAddress& base, const BitRow& bits);
/// Gathers the vector based at `base`.
BitRow load_vector(const MemoryState& memory, const StripeLayout& layout, const RowAddress& base);

}  // namespace drim
