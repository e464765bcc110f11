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
#include <set>

#include "doctest.h"

#include "drim/error.hpp"
#include "drim/executor.hpp"
#include "drim/isa.hpp"
#include "drim/striping.hpp"
#include "support.hpp"

using namespace drim;

namespace {

bool has_diag(const std::vector<Diagnostic>& d, const std::string& needle) {
    for (const auto& x : d)
        if (x.message.find(needle) != std::string::npos)
            return true;
    return false;
}

std::string parse_error(const std::string& text, const Geometry& g = {}) {
    try {
        parse(text, g);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

RowKind random_row_kind(std::mt19937_64& rng, const Geometry& g) {
    switch (rng() % 4) {
    case 0:
        return RowKind::data(static_cast<std::uint32_t>(rng() % g.data_rows));
    case 1:
        return RowKind::x(1 + static_cast<std::uint32_t>(rng() % g.x_rows));
    default:
        return RowKind::dcc_wordline(1 + static_cast<std::uint32_t>(rng() % g.dcc_wordlines()));
    }
}

}  // namespace

TEST_CASE("parse the basic shapes") {
    const Geometry g;
    const Program p = parse("AAP3 x1 x2 d7 size=256\n"
                            "aap4 x1 x2 x3 d9 size=256   # majority\n"
                            "\n"
                            "AAP2 d0 x1 x2 size=256\n"
                            "AAP1 b1.s3.dcc1 b1.s3.ctrl1 size=256\n",
                            g);
    REQUIRE(p.instructions.size() == 4);
    const auto& i0 = p.instructions[0];
    CHECK(i0.type == AapType::Type3);
    CHECK(i0.sources[0].row == RowKind::x(1));
    CHECK(i0.sources[1].row == RowKind::x(2));
    CHECK(i0.destinations[0].row == RowKind::data(7));
    CHECK(i0.size == 256);
    CHECK(i0.line == 1);
    CHECK(p.instructions[1].type == AapType::Type4);
    CHECK(p.instructions[1].destinations[0].row == RowKind::data(9));
    CHECK(p.instructions[2].destinations.size() == 2);
    const auto& i3 = p.instructions[3];
    CHECK(i3.sources[0].bank == 1);
    CHECK(i3.sources[0].subarray == 3);
    CHECK(i3.sources[0].row == RowKind::dcc_wordline(1));
    CHECK(i3.destinations[0].row == RowKind::data(g.ctrl1_row()));
    CHECK(i3.line == 5);
}

TEST_CASE("parse errors carry line and column") {
    const Geometry g;
    CHECK(parse_error("AAP1 d3 x1 size=100").find("size not multiple of row width") != std::string::npos);
    CHECK(parse_error("AAP1 d3 x1 size=100").find("line 1") != std::string::npos);
    CHECK(parse_error("\n\nAAP5 d0 d1 size=256").find("line 3, column 1: unknown mnemonic") != std::string::npos);
    CHECK(parse_error("AAP3 x1 d7 size=256").find("takes 3 rows, got 2") != std::string::npos);
    CHECK(parse_error("AAP1 q3 d1 size=256").find("column 6: malformed row name") != std::string::npos);
    CHECK(parse_error("AAP1 d3 x1").find("missing size") != std::string::npos);
    CHECK(parse_error("AAP1 d3 x0 size=256").find("numbered from x1") != std::string::npos);
    CHECK(parse_error("AAP1 d3 x1 size=0").find("size not multiple") != std::string::npos);
    CHECK(parse_error("AAP1 b1.d3 x1 size=256").find("malformed row name") != std::string::npos);
    CHECK(parse_error(".stripes_per_subarray 0").find("positive") != std::string::npos);
    CHECK(parse_error(".stripes_per_subarray 2\n.stripes_per_subarray 2").find("duplicate") != std::string::npos);
}

TEST_CASE("parse and render round trip on random programs") {
    const Geometry g;
    std::mt19937_64 rng(21);
    for (int iter = 0; iter < 500; ++iter) {
        Program p;
        if (rng() % 3 == 0)
            p.stripes_per_subarray = 1 + static_cast<std::uint32_t>(rng() % 4);
        const int n = 1 + static_cast<int>(rng() % 8);
        const std::uint64_t size = g.cols_per_row * (1 + rng() % 4);
        for (int k = 0; k < n; ++k) {
            AapInstruction ins;
            ins.type = static_cast<AapType>(1 + rng() % 4);
            ins.size = size;
            const std::uint32_t bank = rng() % 2 ? 0 : static_cast<std::uint32_t>(rng() % g.banks);
            const std::uint32_t sub = static_cast<std::uint32_t>(rng() % g.subarrays_per_bank);
            for (std::size_t i = 0; i < source_count(ins.type); ++i)
                ins.sources.push_back({bank, sub, random_row_kind(rng, g)});
            for (std::size_t i = 0; i < destination_count(ins.type); ++i)
                ins.destinations.push_back({bank, sub, random_row_kind(rng, g)});
            p.instructions.push_back(ins);
        }
        const std::string text = render(p, g);
        REQUIRE(parse(text, g) == p);
        REQUIRE(render(parse(text, g), g) == text);
    }
}

TEST_CASE("parse_row_address") {
    const Geometry g;
    CHECK(parse_row_address("d12", g).row == RowKind::data(12));
    CHECK(parse_row_address("b2.s5.x3", g).bank == 2);
    CHECK(parse_row_address("ctrl0", g).row == RowKind::data(g.ctrl0_row()));
    CHECK_THROWS_AS(parse_row_address("row1", g), ParseError);
}

TEST_CASE("validate decoder and dcc rules") {
    const Geometry g;
    CHECK(has_diag(validate(parse("AAP3 d1 d2 x1 size=256", g), g), "multi-activation of data rows"));
    CHECK(has_diag(validate(parse("AAP4 x1 d2 x3 x4 size=256", g), g), "multi-activation of data rows"));
    CHECK(has_diag(validate(parse("AAP2 d0 d1 d2 size=256", g), g), "multi-activation of data rows"));
    CHECK(has_diag(validate(parse("AAP3 dcc1 dcc2 d1 size=256", g), g), "DCC wordline conflict"));
    CHECK(has_diag(validate(parse("AAP1 dcc1 dcc2 size=256", g), g), "DCC wordline conflict"));
    CHECK(has_diag(validate(parse("AAP3 x1 x2 dcc3 size=256\nAAP3 x1 dcc3 dcc4 size=256", g), g),
                   "DCC wordline conflict"));
    CHECK(has_diag(validate(parse("AAP3 x1 dcc2 d1 size=256", g), g), "complement wordline"));
    CHECK(has_diag(validate(parse("AAP3 x1 x1 d1 size=256", g), g), "duplicate"));
    CHECK(has_diag(validate(parse("AAP1 d0 ctrl0 size=256", g), g), "constant row"));
    CHECK(has_diag(validate(parse("AAP1 d0 b0.s1.x1 size=256", g), g), "share a sub-array"));
    CHECK(has_diag(validate(parse("AAP1 d0 x9 size=256", g), g), "outside the geometry"));
    CHECK(has_diag(validate(parse("AAP1 d0 x1 size=256\nAAP1 x1 d1 size=512", g), g), "disagrees"));
}

TEST_CASE("diagnostics carry the instruction index") {
    const Geometry g;
    const auto d = validate(parse("AAP1 d0 x1 size=256\nAAP1 x1 d1 size=256\nAAP3 d1 d2 x1 size=256", g), g);
    REQUIRE(d.size() == 1);
    CHECK(d[0].instruction == 2);
}

TEST_CASE("tabulated sequences validate clean") {
    const Geometry g;
    const char* seqs[] = {
        "AAP1 d0 d1 size=256",
        "AAP1 d0 dcc2 size=256\nAAP1 dcc1 d1 size=256",
        "AAP1 d0 x1 size=256\nAAP1 d1 x2 size=256\nAAP1 d2 x3 size=256\nAAP4 x1 x2 x3 d3 size=256",
        "AAP1 d0 x1 size=256\nAAP1 d1 x2 size=256\nAAP3 x1 x2 d2 size=256",
        "AAP1 d0 x1 size=256\nAAP1 d1 x2 size=256\nAAP3 x1 x2 dcc2 size=256\nAAP1 dcc1 d2 size=256",
        "AAP2 d0 x1 x2 size=256\nAAP2 d1 x3 x4 size=256\nAAP2 d2 x5 x6 size=256\n"
        "AAP3 x2 x4 dcc2 size=256\nAAP3 x6 dcc1 dcc4 size=256\nAAP1 dcc3 d3 size=256\n"
        "AAP4 x1 x3 x5 d4 size=256",
    };
    for (const char* s : seqs)
        CHECK(validate(parse(s, g), g).empty());
}

TEST_CASE("stripe layout checks") {
    const Geometry g = testing::tiny_geometry();
    // 3 stripes all in one sub-array: d0..d2 and d3..d5
    CHECK(validate(parse("AAP1 d0 d3 size=192", g), g).empty());
    CHECK(has_diag(validate(parse("AAP1 d0 d2 size=192", g), g), "overlap"));
    CHECK(has_diag(validate(parse("AAP1 d0 d12 size=192", g), g), "runs past"));
    CHECK(has_diag(validate(parse(".stripes_per_subarray 4\nAAP1 d0 d4 size=192", g), g), "exceeds"));
    // one stripe per sub-array, 4 sub-arrays
    CHECK(validate(parse(".stripes_per_subarray 1\nAAP1 d0 d1 size=256", g), g).empty());
    CHECK(has_diag(validate(parse(".stripes_per_subarray 1\nAAP1 b0.s1.d0 b0.s1.d1 size=256", g), g),
                   "only 4 exist"));
}

// ---------------------------------------------------------------------------

TEST_CASE("execute copy and stats") {
    const Geometry g;
    MemoryState m(g);
    std::mt19937_64 rng(1);
    const BitRow p = testing::random_row(rng, g.cols_per_row);
    m.write_row({0, 0, RowKind::data(0)}, p);
    const auto stats = execute(parse("AAP1 d0 x1 size=256", g), m, AnalogEngine{});
    CHECK(m.read_row({0, 0, RowKind::x(1)}) == p);
    CHECK(stats.total_aaps() == 1);
    CHECK(stats.count(AapType::Type1) == 1);
    CHECK(stats.stripes == 1);
    CHECK(stats.to_json() ==
          R"({"aaps":{"type1":1,"type2":0,"type3":0,"type4":0},"stripes":1,"total_aaps":1,"subarrays":1,"host_mediated":false})");
}

TEST_CASE("execute not and double copy") {
    const Geometry g;
    MemoryState m(g);
    std::mt19937_64 rng(2);
    const BitRow p = testing::random_row(rng, g.cols_per_row);
    m.write_row({0, 0, RowKind::data(0)}, p);
    auto stats = execute(parse("AAP1 d0 dcc2 size=256\nAAP1 dcc1 d5 size=256", g), m, AnalogEngine{});
    CHECK(m.read_row({0, 0, RowKind::data(5)}) == ~p);
    CHECK(stats.total_aaps() == 2);
    stats = execute(parse("AAP2 d0 x1 x2 size=256", g), m, AnalogEngine{});
    CHECK(m.read_row({0, 0, RowKind::x(1)}) == p);
    CHECK(m.read_row({0, 0, RowKind::x(2)}) == p);
    CHECK(stats.total_aaps() == 1);
}

TEST_CASE("execute rejects invalid programs before touching memory") {
    const Geometry g;
    MemoryState m(g);
    m.write_row({0, 0, RowKind::data(0)}, BitRow(g.cols_per_row, true));
    try {
        execute(parse("AAP1 d0 d1 size=256\nAAP3 d0 d1 x1 size=256", g), m, AnalogEngine{});
        FAIL("expected ExecutionError");
    } catch (const ExecutionError& e) {
        CHECK(e.instruction() == 1);
    }
    CHECK(m.read_row({0, 0, RowKind::data(1)}).count() == 0);
}

TEST_CASE("stats total equals instructions times stripes") {
    const Geometry g;
    std::mt19937_64 rng(4);
    for (std::uint64_t stripes = 1; stripes <= 5; ++stripes) {
        MemoryState m(g);
        const std::string size = " size=" + std::to_string(stripes * g.cols_per_row);
        const std::string text = "AAP1 d0 x1" + size + "\nAAP1 d10 x2" + size + "\nAAP3 x1 x2 d20" + size;
        const auto stats = execute(parse(text, g), m, AnalogEngine{});
        CHECK(stats.total_aaps() == 3 * stripes);
        CHECK(stats.stripes == stripes);
    }
}

TEST_CASE("per-stripe independence") {
    const Geometry g;
    std::mt19937_64 rng(6);
    for (int iter = 0; iter < 20; ++iter) {
        const BitRow a = testing::random_row(rng, 2 * g.cols_per_row);
        const BitRow b = testing::random_row(rng, 2 * g.cols_per_row);

        // 2-stripe vectors at d0 and d2, result at d4.
        MemoryState wide(g);
        const StripeLayout layout(2, std::nullopt);
        store_vector(wide, layout, {0, 0, RowKind::data(0)}, a);
        store_vector(wide, layout, {0, 0, RowKind::data(2)}, b);
        execute(parse("AAP1 d0 x1 size=512\nAAP1 d2 x2 size=512\nAAP3 x1 x2 d4 size=512", g), wide, AnalogEngine{});
        const BitRow out = load_vector(wide, layout, {0, 0, RowKind::data(4)});

        for (int s = 0; s < 2; ++s) {
            MemoryState one(g);
            BitRow as(g.cols_per_row), bs(g.cols_per_row);
            for (std::size_t c = 0; c < g.cols_per_row; ++c) {
                as.set(c, a.get(s * g.cols_per_row + c));
                bs.set(c, b.get(s * g.cols_per_row + c));
            }
            one.write_row({0, 0, RowKind::data(0)}, as);
            one.write_row({0, 0, RowKind::data(1)}, bs);
            execute(parse("AAP1 d0 x1 size=256\nAAP1 d1 x2 size=256\nAAP3 x1 x2 d2 size=256", g), one,
                    AnalogEngine{});
            const BitRow r = one.read_row({0, 0, RowKind::data(2)});
            for (std::size_t c = 0; c < g.cols_per_row; ++c)
                REQUIRE(out.get(s * g.cols_per_row + c) == r.get(c));
        }
    }
}

TEST_CASE("vectors spanning sub-arrays run in parallel with identical results") {
    const Geometry g = testing::tiny_geometry();
    std::mt19937_64 rng(10);
    const std::uint64_t stripes = 8;
    const StripeLayout layout(stripes, 2);
    CHECK(layout.groups == 4);
    const BitRow a = testing::random_row(rng, stripes * g.cols_per_row);
    const BitRow b = testing::random_row(rng, stripes * g.cols_per_row);
    const std::string size = " size=" + std::to_string(stripes * g.cols_per_row);
    const Program p = parse(".stripes_per_subarray 2\nAAP1 d0 x1" + size + "\nAAP1 d2 x2" + size +
                                "\nAAP1 ctrl1 x3" + size + "\nAAP4 x1 x2 x3 d4" + size,
                            g);
    REQUIRE(validate(p, g).empty());

    std::vector<std::string> images;
    for (unsigned jobs : {1u, 2u, 4u, 8u}) {
        MemoryState m(g);
        store_vector(m, layout, {0, 0, RowKind::data(0)}, a);
        store_vector(m, layout, {0, 0, RowKind::data(2)}, b);
        ExecuteOptions o;
        o.jobs = jobs;
        const auto stats = execute(p, m, AnalogEngine{}, o);
        CHECK(stats.subarrays == 4);
        CHECK(stats.host_mediated);
        BitRow expect = a;
        expect |= b;
        CHECK(load_vector(m, layout, {0, 0, RowKind::data(4)}) == expect);
        std::string img;
        for (std::uint32_t q = 0; q < g.subarray_count(); ++q)
            for (const auto& r : m.subarray(q).storage())
                img += r.to_hex();
        images.push_back(img);
    }
    for (const auto& i : images)
        CHECK(i == images.front());
}

TEST_CASE("trace reports every aap in program order") {
    const Geometry g;
    MemoryState m(g);
    std::vector<TraceEvent> events;
    ExecuteOptions o;
    o.jobs = 4;
    o.trace = [&](const TraceEvent& e) { events.push_back(e); };
    execute(parse("AAP1 d0 x1 size=512\nAAP1 d2 x2 size=512", g), m, AnalogEngine{}, o);
    REQUIRE(events.size() == 4);
    CHECK(events[0].instruction == 0);
    CHECK(events[0].stripe == 0);
    CHECK(events[1].instruction == 1);
    CHECK(events[2].stripe == 1);
    CHECK(events[3].type == AapType::Type1);
    CHECK(events[0].bl.size() == g.cols_per_row);
}

TEST_CASE("store_vector checks sizes") {
    const Geometry g;
    MemoryState m(g);
    CHECK_THROWS_AS(store_vector(m, StripeLayout(2, std::nullopt), {0, 0, RowKind::data(0)}, BitRow(256)),
                    AddressError);
}
