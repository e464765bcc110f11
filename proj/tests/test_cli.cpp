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
#include "json.hpp"

#include "cli_support.hpp"
#include "drim/vecio.hpp"
#include "support.hpp"

using namespace drim;
using testing::CliRunner;

namespace {

const char* kXnorProgram =
    "# xnor of d0 and d1 into d2\n"
    "AAP1 d0 x1 size=256\n"
    "AAP1 d1 x2 size=256\n"
    "AAP3 x1 x2 d2 size=256\n";

}  // namespace

TEST_CASE("usage errors exit 1") {
    CliRunner cli;
    CHECK(cli.run("").code == 1);
    CHECK(cli.run("frobnicate").code == 1);
    CHECK(cli.run("sweep --trials 0").code == 1);
    CHECK(cli.run("sweep --levels 5,abc").code == 1);
    CHECK(cli.run("perf --platform gpu").code == 1);
    CHECK(cli.run("perf --format xml").code == 1);
    CHECK(cli.run("--preset drim-q area").code == 1);
    CHECK(cli.run("kernel mul a b").code == 1);
    CHECK(cli.run("--help").code == 0);
}

TEST_CASE("assemble reports positions") {
    CliRunner cli;
    write_file(cli.path("good.s"), kXnorProgram);
    auto r = cli.run("assemble '" + cli.path("good.s") + "'");
    CHECK(r.code == 0);
    CHECK(r.out == "ok: 3 instructions, 1 stripes\n");
    r = cli.run("assemble --render '" + cli.path("good.s") + "'");
    CHECK(r.out == "AAP1 d0 x1 size=256\nAAP1 d1 x2 size=256\nAAP3 x1 x2 d2 size=256\n");

    write_file(cli.path("bad.s"), "AAP1 d0 x1 size=256\nAAP3 x1 size=256\n");
    r = cli.run("assemble '" + cli.path("bad.s") + "'");
    CHECK(r.code == 1);
    CHECK(r.err.find("bad.s:2:") != std::string::npos);

    write_file(cli.path("size.s"), "AAP1 d0 x1 size=100\n");
    r = cli.run("assemble '" + cli.path("size.s") + "'");
    CHECK(r.code == 1);
    CHECK(r.err.find("size not multiple of row width") != std::string::npos);
    CHECK(cli.run("assemble '" + cli.path("missing.s") + "'").code == 1);
}

TEST_CASE("run binds vectors and reports stats") {
    CliRunner cli;
    std::mt19937_64 rng(3);
    const BitRow a = testing::random_row(rng, 256), b = testing::random_row(rng, 256);
    write_file(cli.path("x.s"), kXnorProgram);
    write_vector(cli.path("a.bin"), a);
    write_vector(cli.path("b.bin"), b);
    const auto r = cli.run("run '" + cli.path("x.s") + "' --in d0='" + cli.path("a.bin") + "' --in d1='" +
                           cli.path("b.bin") + "' --out d2='" + cli.path("r.bin") + "' --trace --image-out '" +
                           cli.path("m.img") + "'");
    REQUIRE(r.code == 0);
    CHECK(read_vector(cli.path("r.bin")) == ~(a ^ b));
    const auto stats = nlohmann::json::parse(r.out);
    CHECK(stats["total_aaps"] == 3);
    CHECK(stats["aaps"]["type3"] == 1);
    // One trace line per AAP.
    int lines = 0;
    for (char c : r.err)
        lines += c == '\n';
    CHECK(lines == 3);
    CHECK(r.err.find("trace ins=2 stripe=0 sub=0 type=3") != std::string::npos);
    const MemoryState m = read_image(cli.path("m.img"));
    CHECK(m.read_row({0, 0, RowKind::data(2)}) == ~(a ^ b));

    // Wrong-size input is a usage error.
    write_vector(cli.path("short.bin"), BitRow(64));
    CHECK(cli.run("run '" + cli.path("x.s") + "' --in d0='" + cli.path("short.bin") + "'").code == 1);
    CHECK(cli.run("run '" + cli.path("x.s") + "' --in d0").code == 1);
}

TEST_CASE("kernel subcommand") {
    CliRunner cli;
    std::mt19937_64 rng(5);
    const BitRow a = testing::random_row(rng, 512), b = testing::random_row(rng, 512),
                 c = testing::random_row(rng, 512);
    write_vector(cli.path("a.bin"), a);
    write_vector(cli.path("b.bin"), b);
    write_vector(cli.path("c.bin"), c);
    const std::string abc = " '" + cli.path("a.bin") + "' '" + cli.path("b.bin") + "' '" + cli.path("c.bin") + "'";
    const std::string ab = " '" + cli.path("a.bin") + "' '" + cli.path("b.bin") + "'";

    auto r = cli.run("kernel xor2" + ab + " --verify");
    CHECK(r.code == 0);
    CHECK(r.out.starts_with("out0 " + (a ^ b).to_hex() + "\n"));
    CHECK(r.err.find("verify: ok") != std::string::npos);

    r = cli.run("kernel fulladd" + abc + " --verify --out '" + cli.path("s.bin") + "' --out '" + cli.path("k.bin") +
                "'");
    CHECK(r.code == 0);
    CHECK(read_vector(cli.path("s.bin")) == (a ^ b ^ c));
    CHECK(read_vector(cli.path("k.bin")) == ((a & b) | (b & c) | (a & c)));

    r = cli.run("kernel fulladd" + abc + " --verify --paper-literal");
    CHECK(r.code == 2);
    CHECK(r.err.find("verification failed") != std::string::npos);

    // 512 lanes of 8 bits fill two rows.
    write_vector(cli.path("la.bin"), testing::random_row(rng, 4096));
    write_vector(cli.path("lb.bin"), testing::random_row(rng, 4096));
    const std::string lanes = " '" + cli.path("la.bin") + "' '" + cli.path("lb.bin") + "'";
    r = cli.run("kernel add" + lanes + " --nbits 8 --verify --out '" + cli.path("sum.bin") + "'");
    CHECK(r.code == 0);
    CHECK(read_vector(cli.path("sum.bin")).size() == 4096);
    CHECK(cli.run("kernel sub" + lanes + " --nbits 16 --verify").code == 0);
    // 64 lanes do not fill a row.
    CHECK(cli.run("kernel add" + ab + " --nbits 8").code == 1);
    CHECK(cli.run("kernel add" + ab + " --nbits 7").code == 1);
    CHECK(cli.run("kernel maj3" + ab).code == 1);
    write_vector(cli.path("odd.bin"), BitRow(100));
    CHECK(cli.run("kernel not '" + cli.path("odd.bin") + "'").code == 1);
}

TEST_CASE("sweep csv") {
    CliRunner cli;
    const auto r = cli.run("sweep --trials 2000 --seed 4");
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "level,mechanism,trials,failures,failure_pct,seed");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(line.ends_with(",4"));
    }
    CHECK(rows == 12);
    CHECK(cli.run("sweep --trials 2000 --seed 4 --jobs 3").out == r.out);
    CHECK(cli.run("sweep --trials 2000 --seed 5").out != r.out);
    CHECK(cli.run("sweep --trials 100 --distribution gaussian --stratified --noise 0.01 --threshold-scale absolute")
              .code == 0);
}

TEST_CASE("perf and area reports") {
    CliRunner cli;
    auto r = cli.run("perf xnor2 --platform drim,ambit --sizes 2^27");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["results"][1]["ratio"].get<double>() == doctest::Approx(7.0 / 3));
    CHECK(j["results"][0]["latency_ns"] == 270.0);

    r = cli.run("perf add not --platform drim,ambit --format csv --sizes 2^20");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("add,drim,1048576,7,630,") != std::string::npos);
    CHECK(r.out.find("not,ambit,1048576,2,180,") != std::string::npos);

    r = cli.run("perf --t-aap 45 --parallel-subarrays 8 --sizes 4096");
    j = nlohmann::json::parse(r.out);
    CHECK(j["t_aap_ns"] == 45.0);
    CHECK(j["batch_bits"] == 2048);
    CHECK(cli.run("perf --parallel-subarrays 1000").code == 1);
    CHECK(cli.run("perf --sizes 100").code == 1);

    r = cli.run("perf --fit-calibration");
    CHECK(nlohmann::json::parse(r.out)["version"] == 1);

    r = cli.run("area");
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["per_subarray"]["sense_amp"]["per_sa"] == 22);
    CHECK(j["equivalent_rows"] == 24);
    CHECK(j["subarrays"] == 128);
    CHECK(nlohmann::json::parse(cli.run("--preset drim-s area").out)["subarrays"] == 256 * 16);
}

TEST_CASE("configuration file and environment") {
    CliRunner cli;
    write_file(cli.path("cfg.json"), R"({"cost_model": {"t_aap_ns": 50}, "seed": 7})");
    auto j = nlohmann::json::parse(cli.run("--config '" + cli.path("cfg.json") + "' perf xnor2 --platform drim").out);
    CHECK(j["t_aap_ns"] == 50.0);
    j = nlohmann::json::parse(cli.run("perf xnor2 --platform drim", "DRIMSIM_CONFIG='" + cli.path("cfg.json") + "'").out);
    CHECK(j["t_aap_ns"] == 50.0);
    const auto s = cli.run("sweep --trials 10", "DRIMSIM_CONFIG='" + cli.path("cfg.json") + "'");
    CHECK(s.out.find(",7\n") != std::string::npos);
    // --seed on the command line wins over the file.
    CHECK(cli.run("--config '" + cli.path("cfg.json") + "' --seed 2 sweep --trials 10").out.find(",2\n") !=
          std::string::npos);
    write_file(cli.path("bad.json"), R"({"seeds": 7})");
    CHECK(cli.run("--config '" + cli.path("bad.json") + "' area").code == 1);
}
