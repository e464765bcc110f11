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
/// ACTIVATE-ACTIVATE-PRECHARGE instructions and their assembly form.
///
/// Grammar (one statement per line, '#' starts a comment):
///
///     AAP1 <src> <dst> size=<N>
///     AAP2 <src> <dst1> <dst2> size=<N>
///     AAP3 <src1> <src2> <dst> size=<N>
///     AAP4 <src1> <src2> <src3> <dst> size=<N>
///     .stripes_per_subarray <P>
///
/// Rows are d<i>, x<i>, dcc<i>, ctrl0, ctrl1 with an optional b<bank>.s<sub>.
/// prefix. N is in bits and must be a positive multiple of the row width.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drim/geometry.hpp"

namespace drim {

enum class AapType : std::uint8_t {
    Type1 = 1,  ///< copy: src -> des
    Type2 = 2,  ///< double copy: src -> des1, des2
    Type3 = 3,  ///< DRA: XNOR(src1, src2) -> des
    Type4 = 4,  ///< TRA: MAJ3(src1, src2, src3) -> des
};

std::size_t source_count(AapType t);
std::size_t destination_count(AapType t);

struct AapInstruction {
    AapType type = AapType::Type1;
    std::vector<RowAddress> sources;
    std::vector<RowAddress> destinations;
    /// Total vector length in bits.
    std::uint64_t size = 0;
    /// Source line (1-based) when parsed; 0 otherwise. Not semantic.
    std::size_t line = 0;

    static AapInstruction type1(RowKind src, RowKind des, std::uint64_t size);
    static AapInstruction type2(RowKind src, RowKind des1, RowKind des2, std::uint64_t size);
    static AapInstruction type3(RowKind src1, RowKind src2, RowKind des, std::uint64_t size);
    static AapInstruction type4(RowKind src1, RowKind src2, RowKind src3, RowKind des, std::uint64_t size);

    friend bool operator==(const AapInstruction& a, const AapInstruction& b) {
        return a.type == b.type && a.sources == b.sources && a.destinations == b.destinations && a.size == b.size;
    }
};

struct Program {
    std::vector<AapInstruction> instructions;
    /// How many consecutive data rows a vector occupies in one sub-array
    /// before it continues in the next sub-array. Defaults to all stripes.
    std::optional<std::uint32_t> stripes_per_subarray;

    /// Row-slices per vector (size / cols). 0 for an empty program.
    std::uint64_t stripes(const Geometry& g) const;

    friend bool operator==(const Program&, const Program&) = default;
};

/// Throws ParseError with a 1-based line and column on the first problem.
Program parse(std::string_view text, const Geometry& geometry);

/// Parses one row name such as "d7", "x2", "ctrl1" or "b1.s3.d0".
/// Throws ParseError (line 1).
RowAddress parse_row_address(std::string_view text, const Geometry& geometry);

/// Canonical text; parse(render(p)) == p.
std::string render(const Program& program, const Geometry& geometry);
std::string render(const AapInstruction& instruction, const Geometry& geometry);

struct Diagnostic {
    /// Index into Program::instructions.
    std::size_t instruction;
    std::string message;
};

/// Empty iff the program can be executed on `geometry`.
std::vector<Diagnostic> validate(const Program& program, const Geometry& geometry);

}  // namespace drim
