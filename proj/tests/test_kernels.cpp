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

#include <random>

#include "doctest.h"

#include "drim/error.hpp"
#include "drim/kernels.hpp"
#include "drim/striping.hpp"
#include "support.hpp"

using namespace drim;

namespace {

Geometry one_subarray() {
    Geometry g;
    g.banks = 1;
    g.subarrays_per_bank = 1;
    return g;
}

RowAddress d(std::uint32_t i) {
    return {0, 0, RowKind::data(i)};
}

KernelSpec make_spec(KernelOp op, std::uint32_t nbits = 1) {
    KernelSpec s;
    s.op = op;
    s.nbits = nbits;
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < operand_count(op, nbits); ++i)
        s.operands.push_back(d(next++));
    for (std::size_t i = 0; i < result_count(op, nbits); ++i)
        s.results.push_back(d(next++));
    return s;
}

constexpr KernelOp kBitOps[] = {KernelOp::Copy,  KernelOp::Not,   KernelOp::And2,    KernelOp::Or2,
                                KernelOp::Nand2, KernelOp::Nor2,  KernelOp::Maj3,    KernelOp::Min3,
                                KernelOp::Xnor2, KernelOp::Xor2,  KernelOp::FullAdd, KernelOp::FullSub};

// Expected outputs for one column, written out as truth tables.
std::vector<bool> expected(KernelOp op, unsigned a, unsigned b, unsigned c) {
    switch (op) {
    case KernelOp::Copy:
        return {a == 1};
    case KernelOp::Not:
        return {a == 0};
    case KernelOp::And2:
        return {(a & b) == 1};
    case KernelOp::Or2:
        return {(a | b) == 1};
    case KernelOp::Nand2:
        return {(a & b) == 0};
    case KernelOp::Nor2:
        return {(a | b) == 0};
    case KernelOp::Maj3:
        return {a + b + c >= 2};
    case KernelOp::Min3:
        return {a + b + c < 2};
    case KernelOp::Xnor2:
        return {a == b};
    case KernelOp::Xor2:
        return {a != b};
    case KernelOp::FullAdd:
        return {((a ^ b ^ c) & 1u) == 1, a + b + c >= 2};
    case KernelOp::FullSub: {
        const unsigned nb = 1 - b;
        return {((a ^ nb ^ c) & 1u) == 1, a + nb + c >= 2};
    }
    default:
        return {};
    }
}

}  // namespace

TEST_CASE("kernel names") {
    for (auto op : kBitOps)
        CHECK_FALSE(to_string(op).empty());
    CHECK(kernel_from_name("xnor2") == KernelOp::Xnor2);
    CHECK(kernel_from_name("add") == KernelOp::RippleAdd);
    CHECK(kernel_from_name("sub") == KernelOp::RippleSub);
    CHECK_FALSE(kernel_from_name("mul"));
    CHECK(operand_count(KernelOp::RippleAdd, 8) == 16);
    CHECK(result_count(KernelOp::RippleAdd, 8) == 9);
    CHECK(result_count(KernelOp::FullAdd) == 2);
}

TEST_CASE("emitted program lengths") {
    const Geometry g;
    CHECK(emit(make_spec(KernelOp::Copy), g).instructions.size() == 1);
    CHECK(emit(make_spec(KernelOp::Not), g).instructions.size() == 2);
    CHECK(emit(make_spec(KernelOp::Maj3), g).instructions.size() == 4);
    CHECK(emit(make_spec(KernelOp::And2), g).instructions.size() == 4);
    CHECK(emit(make_spec(KernelOp::Or2), g).instructions.size() == 4);
    CHECK(emit(make_spec(KernelOp::Xnor2), g).instructions.size() == 3);
    CHECK(emit(make_spec(KernelOp::Xor2), g).instructions.size() == 4);
    CHECK(emit(make_spec(KernelOp::Min3), g).instructions.size() == 5);
    CHECK(emit(make_spec(KernelOp::Nand2), g).instructions.size() == 5);
    CHECK(emit(make_spec(KernelOp::FullAdd), g).instructions.size() == 7);
    CHECK(emit(make_spec(KernelOp::FullSub), g).instructions.size() == 8);
    CHECK(emit(make_spec(KernelOp::RippleAdd, 8), g).instructions.size() == 56);
    CHECK(emit(make_spec(KernelOp::RippleSub, 4), g).instructions.size() == 32);
}

TEST_CASE("emitted sequences match the tabulated text") {
    const Geometry g;
    CHECK(render(emit(make_spec(KernelOp::Copy), g), g) == "AAP1 d0 d1 size=256\n");
    CHECK(render(emit(make_spec(KernelOp::Not), g), g) == "AAP1 d0 dcc2 size=256\nAAP1 dcc1 d1 size=256\n");
    CHECK(render(emit(make_spec(KernelOp::Xnor2), g), g) ==
          "AAP1 d0 x1 size=256\nAAP1 d1 x2 size=256\nAAP3 x1 x2 d2 size=256\n");
    CHECK(render(emit(make_spec(KernelOp::Xor2), g), g) ==
          "AAP1 d0 x1 size=256\nAAP1 d1 x2 size=256\nAAP3 x1 x2 dcc2 size=256\nAAP1 dcc1 d2 size=256\n");
    CHECK(render(emit(make_spec(KernelOp::And2), g), g) ==
          "AAP1 d0 x1 size=256\nAAP1 d1 x2 size=256\nAAP1 ctrl0 x3 size=256\nAAP4 x1 x2 x3 d2 size=256\n");
    CHECK(render(emit(make_spec(KernelOp::FullAdd), g), g) ==
          "AAP2 d0 x1 x2 size=256\nAAP2 d1 x3 x4 size=256\nAAP2 d2 x5 x6 size=256\n"
          "AAP3 x2 x4 dcc2 size=256\nAAP3 x6 dcc1 dcc4 size=256\nAAP1 dcc3 d3 size=256\n"
          "AAP4 x1 x3 x5 d4 size=256\n");
    EmitOptions lit;
    lit.paper_literal = true;
    CHECK(render(emit(make_spec(KernelOp::FullAdd), g, lit), g).find("AAP4 x1 x2 x3 d4") != std::string::npos);
    const auto types = emit(make_spec(KernelOp::FullAdd), g).instructions;
    const int want[] = {2, 2, 2, 3, 3, 1, 4};
    for (int i = 0; i < 7; ++i)
        CHECK(static_cast<int>(types[i].type) == want[i]);
}

TEST_CASE("every kernel over all per-column combinations") {
    const Geometry g = one_subarray();
    for (auto op : kBitOps) {
        const std::size_t n = operand_count(op);
        // Column c carries pattern c % 2^n.
        std::vector<BitRow> in(n, BitRow(g.cols_per_row));
        for (std::size_t c = 0; c < g.cols_per_row; ++c)
            for (std::size_t k = 0; k < n; ++k)
                in[k].set(c, ((c % (1u << n)) >> k) & 1u);
        MemoryState m(g);
        const KernelSpec spec = make_spec(op);
        for (std::size_t k = 0; k < n; ++k)
            m.write_row(spec.operands[k], in[k]);
        const auto out = run_kernel(spec, m, AnalogEngine{});
        const auto ref = oracle_eval(op, in);
        REQUIRE(out.size() == ref.size());
        for (std::size_t c = 0; c < (1u << n); ++c) {
            const unsigned a = c & 1u, b = (c >> 1) & 1u, cc = (c >> 2) & 1u;
            const auto want = expected(op, a, b, cc);
            for (std::size_t r = 0; r < out.size(); ++r) {
                INFO(to_string(op) << " pattern " << c << " result " << r);
                CHECK(out[r].get(c) == want[r]);
                CHECK(ref[r].get(c) == want[r]);
            }
        }
    }
}

TEST_CASE("literal carry step fails where the operands differ") {
    const Geometry g = one_subarray();
    std::vector<BitRow> in(3, BitRow(g.cols_per_row));
    for (std::size_t c = 0; c < 8; ++c)
        for (std::size_t k = 0; k < 3; ++k)
            in[k].set(c, (c >> k) & 1u);
    MemoryState m(g);
    const KernelSpec spec = make_spec(KernelOp::FullAdd);
    for (std::size_t k = 0; k < 3; ++k)
        m.write_row(spec.operands[k], in[k]);
    EmitOptions lit;
    lit.paper_literal = true;
    const auto out = run_kernel(spec, m, AnalogEngine{}, lit);
    int wrong = 0;
    for (unsigned c = 0; c < 8; ++c) {
        const unsigned a = c & 1u, b = (c >> 1) & 1u, k = (c >> 2) & 1u;
        CHECK(out[0].get(c) == (((a ^ b ^ k) & 1u) == 1));
        wrong += out[1].get(c) != (a + b + k >= 2);
        // What the literal sequence computes: MAJ(a, XNOR(a,b), b) = a AND b.
        CHECK(out[1].get(c) == ((a & b) == 1));
    }
    CHECK(wrong == 2);
}

TEST_CASE("kernels on random rows match the oracle and leave other rows alone") {
    const Geometry g = one_subarray();
    std::mt19937_64 rng(77);
    MemoryState m(g);
    for (std::uint32_t r = 0; r < g.user_data_rows(); ++r)
        m.write_row(d(r), testing::random_row(rng, g.cols_per_row));
    for (int iter = 0; iter < 300; ++iter) {
        for (auto op : kBitOps) {
            // Operands and results on random distinct rows.
            std::vector<std::uint32_t> rows;
            const std::size_t need = operand_count(op) + result_count(op);
            while (rows.size() < need) {
                const auto r = static_cast<std::uint32_t>(rng() % g.user_data_rows());
                if (std::find(rows.begin(), rows.end(), r) == rows.end())
                    rows.push_back(r);
            }
            KernelSpec s;
            s.op = op;
            std::vector<BitRow> in;
            for (std::size_t i = 0; i < operand_count(op); ++i) {
                s.operands.push_back(d(rows[i]));
                in.push_back(m.read_row(d(rows[i])));
            }
            for (std::size_t i = operand_count(op); i < need; ++i)
                s.results.push_back(d(rows[i]));

            std::vector<BitRow> before;
            for (std::uint32_t r = 0; r < g.data_rows; ++r)
                before.push_back(m.read_row(d(r)));
            const auto out = run_kernel(s, m, AnalogEngine{});
            REQUIRE(out == oracle_eval(op, in));
            for (std::uint32_t r = 0; r < g.data_rows; ++r) {
                const bool is_result = std::find(s.results.begin(), s.results.end(), d(r)) != s.results.end();
                if (!is_result)
                    REQUIRE(m.read_row(d(r)) == before[r]);
            }
        }
    }
}

TEST_CASE("de morgan closure") {
    const Geometry g = one_subarray();
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 100; ++iter) {
        MemoryState m(g);
        const BitRow a = testing::random_row(rng, g.cols_per_row);
        const BitRow b = testing::random_row(rng, g.cols_per_row);
        const BitRow c = testing::random_row(rng, g.cols_per_row);
        m.write_row(d(0), a);
        m.write_row(d(1), b);
        m.write_row(d(2), c);
        auto run = [&](KernelOp op, std::vector<std::uint32_t> ops, std::uint32_t res) {
            KernelSpec s;
            s.op = op;
            for (auto o : ops)
                s.operands.push_back(d(o));
            s.results.push_back(d(res));
            return run_kernel(s, m, AnalogEngine{}).front();
        };
        const BitRow and_ab = run(KernelOp::And2, {0, 1}, 10);
        const BitRow not_and = run(KernelOp::Not, {10}, 11);
        CHECK(run(KernelOp::Nand2, {0, 1}, 12) == not_and);
        const BitRow or_ab = run(KernelOp::Or2, {0, 1}, 13);
        CHECK(run(KernelOp::Nor2, {0, 1}, 14) == run(KernelOp::Not, {13}, 15));
        run(KernelOp::Maj3, {0, 1, 2}, 16);
        CHECK(run(KernelOp::Min3, {0, 1, 2}, 17) == run(KernelOp::Not, {16}, 18));
        run(KernelOp::Xnor2, {0, 1}, 20);
        CHECK(run(KernelOp::Xor2, {0, 1}, 19) == run(KernelOp::Not, {20}, 21));
        // And/Or against plain bit logic.
        BitRow x = a;
        x &= b;
        CHECK(and_ab == x);
        BitRow y = a;
        y |= b;
        CHECK(or_ab == y);
    }
}

TEST_CASE("ripple add and sub over random lanes") {
    const Geometry g = one_subarray();
    std::mt19937_64 rng(99);
    for (std::uint32_t nbits : {1u, 4u, 8u, 16u}) {
        for (int iter = 0; iter < 20; ++iter) {
            for (auto op : {KernelOp::RippleAdd, KernelOp::RippleSub}) {
                MemoryState m(g);
                const KernelSpec s = make_spec(op, nbits);
                std::vector<std::uint64_t> av(g.cols_per_row), bv(g.cols_per_row);
                const std::uint64_t mask = (std::uint64_t{1} << nbits) - 1;
                for (std::size_t c = 0; c < g.cols_per_row; ++c) {
                    av[c] = rng() & mask;
                    bv[c] = rng() & mask;
                }
                for (std::uint32_t k = 0; k < nbits; ++k) {
                    BitRow pa(g.cols_per_row), pb(g.cols_per_row);
                    for (std::size_t c = 0; c < g.cols_per_row; ++c) {
                        pa.set(c, (av[c] >> k) & 1u);
                        pb.set(c, (bv[c] >> k) & 1u);
                    }
                    m.write_row(s.operands[k], pa);
                    m.write_row(s.operands[nbits + k], pb);
                }
                const auto out = run_kernel(s, m, AnalogEngine{});
                for (std::size_t c = 0; c < g.cols_per_row; ++c) {
                    std::uint64_t got = 0;
                    for (std::uint32_t k = 0; k < nbits; ++k)
                        got |= std::uint64_t{out[k].get(c)} << k;
                    const bool carry = out[nbits].get(c);
                    if (op == KernelOp::RippleAdd) {
                        REQUIRE(got == ((av[c] + bv[c]) & mask));
                        REQUIRE(carry == (((av[c] + bv[c]) >> nbits) & 1u));
                    } else {
                        REQUIRE(got == ((av[c] - bv[c]) & mask));
                        REQUIRE(carry == (av[c] >= bv[c]));
                    }
                }
            }
        }
    }
}

TEST_CASE("ripple add is commutative") {
    const Geometry g = one_subarray();
    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 20; ++iter) {
        MemoryState m(g);
        KernelSpec ab = make_spec(KernelOp::RippleAdd, 8);
        for (std::uint32_t k = 0; k < 16; ++k)
            m.write_row(ab.operands[k], testing::random_row(rng, g.cols_per_row));
        const auto r1 = run_kernel(ab, m, AnalogEngine{});
        KernelSpec ba = ab;
        for (std::uint32_t k = 0; k < 8; ++k)
            std::swap(ba.operands[k], ba.operands[8 + k]);
        for (auto& r : ba.results)
            r.row.index += 20;
        CHECK(run_kernel(ba, m, AnalogEngine{}) == r1);
    }
}

TEST_CASE("oracle examples") {
    auto one = [](bool v) { return BitRow(1, v); };
    CHECK_FALSE(oracle_eval(KernelOp::Xor2, std::vector{one(1), one(1)})[0].get(0));
    CHECK(oracle_eval(KernelOp::Maj3, std::vector{one(0), one(1), one(1)})[0].get(0));
    // 0b1011 + 0b0110 = 0b0001 carry 1
    std::vector<BitRow> in;
    for (int k = 0; k < 4; ++k)
        in.push_back(one((0b1011 >> k) & 1));
    for (int k = 0; k < 4; ++k)
        in.push_back(one((0b0110 >> k) & 1));
    const auto out = oracle_eval(KernelOp::RippleAdd, in, 4);
    unsigned v = 0;
    for (int k = 0; k < 4; ++k)
        v |= unsigned{out[k].get(0)} << k;
    CHECK(v == 0b0001);
    CHECK(out[4].get(0));
    CHECK_THROWS_AS(oracle_eval(KernelOp::Maj3, std::vector{one(0), one(1)}), ArityError);
    CHECK_THROWS_AS(oracle_eval(KernelOp::Xor2, std::vector{one(0), BitRow(2)}), ArityError);
}

TEST_CASE("kernel request errors") {
    const Geometry g;
    KernelSpec s = make_spec(KernelOp::Maj3);
    s.operands.pop_back();
    CHECK_THROWS_AS(emit(s, g), ArityError);
    s = make_spec(KernelOp::Xnor2);
    s.results[0] = s.operands[1];
    CHECK_THROWS_AS(emit(s, g), ConfigError);
    s = make_spec(KernelOp::Xnor2);
    s.operands[0].row = RowKind::x(1);
    CHECK_THROWS_AS(emit(s, g), ConfigError);
    s = make_spec(KernelOp::Xnor2);
    s.results[0].subarray = 1;
    CHECK_THROWS_AS(emit(s, g), ConfigError);
    CHECK_THROWS_AS(emit(make_spec(KernelOp::RippleAdd, 0), g), ArityError);

    Geometry small;
    small.x_rows = 2;
    small.data_rows = 506;
    REQUIRE_NOTHROW(small.validate());
    CHECK_NOTHROW(emit(make_spec(KernelOp::Xnor2), small));
    CHECK_THROWS_WITH_AS(emit(make_spec(KernelOp::Maj3), small), doctest::Contains("insufficient free compute rows"),
                         ConfigError);
    CHECK_THROWS_AS(emit(make_spec(KernelOp::FullAdd), small), ConfigError);
}

TEST_CASE("wide kernels stripe across sub-arrays") {
    Geometry g;
    g.banks = 1;
    g.subarrays_per_bank = 4;
    std::mt19937_64 rng(12);
    KernelSpec s;
    s.op = KernelOp::Xor2;
    s.stripes = 8;
    s.stripes_per_subarray = 2;
    s.operands = {d(0), d(2)};
    s.results = {d(4)};
    const StripeLayout layout(8, 2);
    const BitRow a = testing::random_row(rng, 8 * g.cols_per_row);
    const BitRow b = testing::random_row(rng, 8 * g.cols_per_row);
    MemoryState m(g);
    store_vector(m, layout, s.operands[0], a);
    store_vector(m, layout, s.operands[1], b);
    ExecutionStats stats;
    const auto out = run_kernel(s, m, AnalogEngine{}, {}, {}, &stats);
    BitRow x = a;
    x ^= b;
    CHECK(out[0] == x);
    CHECK(stats.subarrays == 4);
    CHECK(stats.total_aaps() == 4 * 8);
}
