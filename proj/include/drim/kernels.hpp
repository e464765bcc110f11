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
/// AAP microprograms for the basic bulk bitwise functions.
///
/// Sequences (Di, Dj, Dk operands, Dr result):
///
///     copy    AAP1(Di,Dr)                                          1 AAP
///     not     AAP1(Di,dcc2) AAP1(dcc1,Dr)                          2
///     maj3    AAP1(Di,x1) AAP1(Dj,x2) AAP1(Dk,x3) AAP4(x1,x2,x3,Dr) 4
///     and2    as maj3 with Dk = ctrl0 (or2: ctrl1)                 4
///     xnor2   AAP1(Di,x1) AAP1(Dj,x2) AAP3(x1,x2,Dr)               3
///     xor2    xnor2 into dcc2, then AAP1(dcc1,Dr)                  4
///     min3, nand2, nor2: the TRA result goes to dcc2, then AAP1(dcc1,Dr)
///     fulladd AAP2(Di,x1,x2) AAP2(Dj,x3,x4) AAP2(Dk,x5,x6)
///             AAP3(x2,x4,dcc2) AAP3(x6,dcc1,dcc4) AAP1(dcc3,Sum)
///             AAP4(x1,x3,x5,Cout)                                  7
///
/// DRA overwrites both sources with the XNOR, so by the last step x2 no
/// longer holds Dj's partner copy. The carry therefore reads the untouched
/// copies x1, x3, x5. EmitOptions::paper_literal emits AAP4(x1,x2,x3,Cout)
/// instead, which computes Di AND Dj and is kept for comparison only.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "drim/analog.hpp"
#include "drim/bitrow.hpp"
#include "drim/executor.hpp"
#include "drim/geometry.hpp"
#include "drim/isa.hpp"
#include "drim/memory.hpp"

namespace drim {

enum class KernelOp {
    Copy,
    Not,
    And2,
    Or2,
    Nand2,
    Nor2,
    Maj3,
    Min3,
    Xnor2,
    Xor2,
    FullAdd,
    FullSub,
    RippleAdd,
    RippleSub,
};

std::string to_string(KernelOp op);
/// CLI spelling: copy, not, and2, or2, nand2, nor2, maj3, min3, xnor2, xor2,
/// fulladd, fullsub, add, sub.
std::optional<KernelOp> kernel_from_name(std::string_view name);

/// Operand and result row counts. nbits only matters for the ripple ops:
/// RippleAdd(n) takes a0..a(n-1), b0..b(n-1) and yields s0..s(n-1), carry.
std::size_t operand_count(KernelOp op, std::uint32_t nbits = 1);
std::size_t result_count(KernelOp op, std::uint32_t nbits = 1);

/// FullSub(Di, Dj, Dk) computes Di + ~Dj + Dk: results are the difference
/// bit and the carry (NOT borrow). RippleSub starts from carry 1 (ctrl1), so
/// its final carry is 1 iff a >= b.
struct KernelSpec {
    KernelOp op = KernelOp::Copy;
    std::uint32_t nbits = 1;
    /// Data rows, all in one sub-array. Bit-plane order (LSB first) for the
    /// ripple ops.
    std::vector<RowAddress> operands;
    std::vector<RowAddress> results;
    /// Row-slices per vector.
    std::uint32_t stripes = 1;
    std::optional<std::uint32_t> stripes_per_subarray;
};

struct EmitOptions {
    bool paper_literal = false;
};

/// Throws ArityError for wrong operand/result counts and ConfigError when
/// the geometry lacks the compute rows the sequence needs.
Program emit(const KernelSpec& spec, const Geometry& geometry, const EmitOptions& options = {});

/// Emits and executes the kernel, then returns each result vector
/// (stripes * cols bits). Operand rows are left untouched.
std::vector<BitRow> run_kernel(const KernelSpec& spec, MemoryState& memory, const AnalogEngine& analog,
                               const EmitOptions& emit_options = {}, const ExecuteOptions& exec_options = {},
                               ExecutionStats* stats = nullptr);

/// Host-side reference computed column by column with ordinary boolean and
/// integer arithmetic.
std::vector<BitRow> oracle_eval(KernelOp op, std::span<const BitRow> operands, std::uint32_t nbits = 1);

}  // namespace drim
