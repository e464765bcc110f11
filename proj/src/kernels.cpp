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

#include "drim/kernels.hpp"

#include <array>
#include <set>

#include "drim/error.hpp"
#include "drim/striping.hpp"

namespace drim {

namespace {

struct OpInfo {
    KernelOp op;
    const char* name;
    const char* cli;
};

constexpr std::array<OpInfo, 14> kOps{{
    {KernelOp::Copy, "Copy", "copy"},
    {KernelOp::Not, "Not", "not"},
    {KernelOp::And2, "And2", "and2"},
    {KernelOp::Or2, "Or2", "or2"},
    {KernelOp::Nand2, "Nand2", "nand2"},
    {KernelOp::Nor2, "Nor2", "nor2"},
    {KernelOp::Maj3, "Maj3", "maj3"},
    {KernelOp::Min3, "Min3", "min3"},
    {KernelOp::Xnor2, "Xnor2", "xnor2"},
    {KernelOp::Xor2, "Xor2", "xor2"},
    {KernelOp::FullAdd, "FullAdd", "fulladd"},
    {KernelOp::FullSub, "FullSub", "fullsub"},
    {KernelOp::RippleAdd, "RippleAdd", "add"},
    {KernelOp::RippleSub, "RippleSub", "sub"},
}};

bool is_ripple(KernelOp op) {
    return op == KernelOp::RippleAdd || op == KernelOp::RippleSub;
}

}  // namespace

std::string to_string(KernelOp op) {
    for (const auto& i : kOps)
        if (i.op == op)
            return i.name;
    return "?";
}

std::optional<KernelOp> kernel_from_name(std::string_view name) {
    for (const auto& i : kOps)
        if (name == i.cli)
            return i.op;
    return std::nullopt;
}

std::size_t operand_count(KernelOp op, std::uint32_t nbits) {
    switch (op) {
    case KernelOp::Copy:
    case KernelOp::Not:
        return 1;
    case KernelOp::And2:
    case KernelOp::Or2:
    case KernelOp::Nand2:
    case KernelOp::Nor2:
    case KernelOp::Xnor2:
    case KernelOp::Xor2:
        return 2;
    case KernelOp::Maj3:
    case KernelOp::Min3:
    case KernelOp::FullAdd:
    case KernelOp::FullSub:
        return 3;
    case KernelOp::RippleAdd:
    case KernelOp::RippleSub:
        return 2 * std::size_t{nbits};
    }
    return 0;
}

std::size_t result_count(KernelOp op, std::uint32_t nbits) {
    switch (op) {
    case KernelOp::FullAdd:
    case KernelOp::FullSub:
        return 2;
    case KernelOp::RippleAdd:
    case KernelOp::RippleSub:
        return std::size_t{nbits} + 1;
    default:
        return 1;
    }
}

// ---------------------------------------------------------------------------
// Emission

namespace {

class Emitter {
  public:
    Emitter(std::uint32_t bank, std::uint32_t sub, std::uint64_t size) : bank_(bank), sub_(sub), size_(size) {}

    RowAddress at(RowKind r) const { return {bank_, sub_, r}; }

    void copy(RowKind src, RowKind des) { push(AapType::Type1, {src}, {des}); }
    void copy2(RowKind src, RowKind des1, RowKind des2) { push(AapType::Type2, {src}, {des1, des2}); }
    void dra(RowKind a, RowKind b, RowKind des) { push(AapType::Type3, {a, b}, {des}); }
    void tra(RowKind a, RowKind b, RowKind c, RowKind des) { push(AapType::Type4, {a, b, c}, {des}); }

    Program take() { return std::move(program_); }

  private:
    void push(AapType t, std::initializer_list<RowKind> src, std::initializer_list<RowKind> des) {
        AapInstruction ins;
        ins.type = t;
        ins.size = size_;
        for (auto r : src)
            ins.sources.push_back(at(r));
        for (auto r : des)
            ins.destinations.push_back(at(r));
        program_.instructions.push_back(std::move(ins));
    }

    std::uint32_t bank_;
    std::uint32_t sub_;
    std::uint64_t size_;
    Program program_;
};

constexpr RowKind x(std::uint32_t i) {
    return RowKind::x(i);
}
constexpr RowKind dcc(std::uint32_t n) {
    return RowKind::dcc_wordline(n);
}

void need(const Geometry& g, std::uint32_t x_rows, std::uint32_t dcc_cells, KernelOp op) {
    if (g.x_rows < x_rows || g.dcc_cells < dcc_cells)
        throw ConfigError("insufficient free compute rows for " + to_string(op) + ": needs " +
                          std::to_string(x_rows) + " x rows and " + std::to_string(dcc_cells) +
                          " DCC cells, geometry has " + std::to_string(g.x_rows) + " and " +
                          std::to_string(g.dcc_cells));
}

// Sum = Di ^ Dj ^ Dk, Cout = MAJ3(Di, Dj, Dk). With `invert_j` Dj is first
// complemented through DCC cell 1 (subtraction).
void full_adder(Emitter& e, RowKind di, RowKind dj, RowKind dk, RowKind sum, RowKind cout, bool invert_j,
                bool paper_literal) {
    if (invert_j) {
        e.copy(dj, dcc(2));
        e.copy2(dcc(1), x(3), x(4));
        e.copy2(di, x(1), x(2));
    } else {
        e.copy2(di, x(1), x(2));
        e.copy2(dj, x(3), x(4));
    }
    e.copy2(dk, x(5), x(6));
    e.dra(x(2), x(4), dcc(2));
    e.dra(x(6), dcc(1), dcc(4));
    e.copy(dcc(3), sum);
    if (paper_literal)
        e.tra(x(1), x(2), x(3), cout);
    else
        e.tra(x(1), x(3), x(5), cout);
}

}  // namespace

Program emit(const KernelSpec& spec, const Geometry& g, const EmitOptions& options) {
    g.validate();
    if (is_ripple(spec.op) && (spec.nbits == 0 || spec.nbits > 63))
        throw ArityError(to_string(spec.op) + " needs 1..63 bits, got " + std::to_string(spec.nbits));
    const std::size_t nbits = is_ripple(spec.op) ? spec.nbits : 1;
    if (spec.operands.size() != operand_count(spec.op, spec.nbits))
        throw ArityError(to_string(spec.op) + " takes " + std::to_string(operand_count(spec.op, spec.nbits)) +
                         " operand rows, got " + std::to_string(spec.operands.size()));
    if (spec.results.size() != result_count(spec.op, spec.nbits))
        throw ArityError(to_string(spec.op) + " produces " + std::to_string(result_count(spec.op, spec.nbits)) +
                         " result rows, got " + std::to_string(spec.results.size()));
    if (spec.stripes == 0)
        throw ConfigError("kernel needs at least one stripe");

    const RowAddress& first = spec.operands.front();
    std::set<RowKind> operand_rows;
    for (const auto& r : spec.operands) {
        if (!r.row.is_data())
            throw ConfigError("kernel operands must be data rows, got " + to_string(r.row, g));
        if (r.bank != first.bank || r.subarray != first.subarray)
            throw ConfigError("kernel operands and results must share a sub-array");
        operand_rows.insert(r.row);
    }
    std::set<RowKind> result_rows;
    for (const auto& r : spec.results) {
        if (!r.row.is_data())
            throw ConfigError("kernel results must be data rows, got " + to_string(r.row, g));
        if (r.bank != first.bank || r.subarray != first.subarray)
            throw ConfigError("kernel operands and results must share a sub-array");
        if (operand_rows.count(r.row))
            throw ConfigError("result row " + to_string(r.row, g) + " is also an operand");
        if (!result_rows.insert(r.row).second)
            throw ConfigError("result row " + to_string(r.row, g) + " listed twice");
    }

    Emitter e(first.bank, first.subarray, std::uint64_t{spec.stripes} * g.cols_per_row);
    const auto op = [&](std::size_t i) { return spec.operands[i].row; };
    const auto res = [&](std::size_t i) { return spec.results[i].row; };
    const RowKind ctrl0 = RowKind::data(g.ctrl0_row());
    const RowKind ctrl1 = RowKind::data(g.ctrl1_row());

    switch (spec.op) {
    case KernelOp::Copy:
        e.copy(op(0), res(0));
        break;
    case KernelOp::Not:
        need(g, 0, 1, spec.op);
        e.copy(op(0), dcc(2));
        e.copy(dcc(1), res(0));
        break;
    case KernelOp::Maj3:
    case KernelOp::Min3:
    case KernelOp::And2:
    case KernelOp::Or2:
    case KernelOp::Nand2:
    case KernelOp::Nor2: {
        const bool inverted = spec.op == KernelOp::Min3 || spec.op == KernelOp::Nand2 || spec.op == KernelOp::Nor2;
        need(g, 3, inverted ? 1 : 0, spec.op);
        RowKind third;
        if (spec.op == KernelOp::Maj3 || spec.op == KernelOp::Min3)
            third = op(2);
        else
            third = (spec.op == KernelOp::And2 || spec.op == KernelOp::Nand2) ? ctrl0 : ctrl1;
        e.copy(op(0), x(1));
        e.copy(op(1), x(2));
        e.copy(third, x(3));
        if (inverted) {
            e.tra(x(1), x(2), x(3), dcc(2));
            e.copy(dcc(1), res(0));
        } else {
            e.tra(x(1), x(2), x(3), res(0));
        }
        break;
    }
    case KernelOp::Xnor2:
        need(g, 2, 0, spec.op);
        e.copy(op(0), x(1));
        e.copy(op(1), x(2));
        e.dra(x(1), x(2), res(0));
        break;
    case KernelOp::Xor2:
        need(g, 2, 1, spec.op);
        e.copy(op(0), x(1));
        e.copy(op(1), x(2));
        e.dra(x(1), x(2), dcc(2));
        e.copy(dcc(1), res(0));
        break;
    case KernelOp::FullAdd:
    case KernelOp::FullSub:
        need(g, 6, 2, spec.op);
        full_adder(e, op(0), op(1), op(2), res(0), res(1), spec.op == KernelOp::FullSub, options.paper_literal);
        break;
    case KernelOp::RippleAdd:
    case KernelOp::RippleSub: {
        need(g, 6, 2, spec.op);
        const bool sub = spec.op == KernelOp::RippleSub;
        const RowKind carry = res(nbits);
        for (std::size_t bit = 0; bit < nbits; ++bit) {
            const RowKind carry_in = bit == 0 ? (sub ? ctrl1 : ctrl0) : carry;
            full_adder(e, op(bit), op(nbits + bit), carry_in, res(bit), carry, sub, options.paper_literal);
        }
        break;
    }
    }

    Program p = e.take();
    p.stripes_per_subarray = spec.stripes_per_subarray;
    return p;
}

std::vector<BitRow> run_kernel(const KernelSpec& spec, MemoryState& memory, const AnalogEngine& analog,
                               const EmitOptions& emit_options, const ExecuteOptions& exec_options,
                               ExecutionStats* stats) {
    const Program program = emit(spec, memory.geometry(), emit_options);
    const ExecutionStats s = execute(program, memory, analog, exec_options);
    if (stats)
        *stats = s;
    const StripeLayout layout(program, memory.geometry());
    std::vector<BitRow> out;
    out.reserve(spec.results.size());
    for (const auto& r : spec.results)
        out.push_back(load_vector(memory, layout, r));
    return out;
}

// ---------------------------------------------------------------------------
// Oracle

std::vector<BitRow> oracle_eval(KernelOp op, std::span<const BitRow> in, std::uint32_t nbits) {
    if (is_ripple(op) && (nbits == 0 || nbits > 63))
        throw ArityError("ripple oracle needs 1..63 bits");
    if (in.size() != operand_count(op, nbits))
        throw ArityError(to_string(op) + " oracle takes " + std::to_string(operand_count(op, nbits)) +
                         " operands, got " + std::to_string(in.size()));
    const std::size_t width = in.front().size();
    for (const auto& r : in)
        if (r.size() != width)
            throw ArityError("oracle operands differ in width");

    std::vector<BitRow> out(result_count(op, nbits), BitRow(width));
    for (std::size_t c = 0; c < width; ++c) {
        const auto bit = [&](std::size_t i) -> unsigned { return in[i].get(c) ? 1u : 0u; };
        switch (op) {
        case KernelOp::Copy:
            out[0].set(c, bit(0));
            break;
        case KernelOp::Not:
            out[0].set(c, bit(0) == 0);
            break;
        case KernelOp::And2:
            out[0].set(c, bit(0) == 1 && bit(1) == 1);
            break;
        case KernelOp::Or2:
            out[0].set(c, bit(0) == 1 || bit(1) == 1);
            break;
        case KernelOp::Nand2:
            out[0].set(c, !(bit(0) == 1 && bit(1) == 1));
            break;
        case KernelOp::Nor2:
            out[0].set(c, !(bit(0) == 1 || bit(1) == 1));
            break;
        case KernelOp::Maj3:
            out[0].set(c, bit(0) + bit(1) + bit(2) >= 2);
            break;
        case KernelOp::Min3:
            out[0].set(c, bit(0) + bit(1) + bit(2) < 2);
            break;
        case KernelOp::Xnor2:
            out[0].set(c, bit(0) == bit(1));
            break;
        case KernelOp::Xor2:
            out[0].set(c, bit(0) != bit(1));
            break;
        case KernelOp::FullAdd: {
            const unsigned s = bit(0) + bit(1) + bit(2);
            out[0].set(c, s & 1u);
            out[1].set(c, s >> 1);
            break;
        }
        case KernelOp::FullSub: {
            const unsigned s = bit(0) + (1u - bit(1)) + bit(2);
            out[0].set(c, s & 1u);
            out[1].set(c, s >> 1);
            break;
        }
        case KernelOp::RippleAdd:
        case KernelOp::RippleSub: {
            std::uint64_t a = 0, b = 0;
            for (std::uint32_t k = 0; k < nbits; ++k) {
                a |= std::uint64_t{bit(k)} << k;
                b |= std::uint64_t{bit(nbits + k)} << k;
            }
            const std::uint64_t mask = (std::uint64_t{1} << nbits) - 1;
            std::uint64_t value;
            bool carry;
            if (op == KernelOp::RippleAdd) {
                value = (a + b) & mask;
                carry = ((a + b) >> nbits) & 1u;
            } else {
                value = (a - b) & mask;
                carry = a >= b;
            }
            for (std::uint32_t k = 0; k < nbits; ++k)
                out[k].set(c, (value >> k) & 1u);
            out[nbits].set(c, carry);
            break;
        }
        }
    }
    return out;
}

}  // namespace drim
