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

// drimsim: assemble and run AAP programs, invoke kernels, run variation
// sweeps and print performance and area reports.
//
// Exit status: 0 success, 1 usage / parse / validation / configuration
// error, 2 runtime failure (including a failed --verify).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "drim/config.hpp"
#include "drim/error.hpp"
#include "drim/executor.hpp"
#include "drim/isa.hpp"
#include "drim/kernels.hpp"
#include "drim/perf.hpp"
#include "drim/reliability.hpp"
#include "drim/striping.hpp"
#include "drim/vecio.hpp"

namespace {

using namespace drim;

// Errors the user can fix by changing the invocation or its inputs.
struct UsageError : Error {
    using Error::Error;
};

struct GlobalOptions {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> jobs;
};

RunConfig load_config(const GlobalOptions& o) {
    std::string path = o.config_path;
    if (path.empty())
        if (const char* env = std::getenv(kConfigEnv); env && *env)
            path = env;
    std::string text = "{}";
    std::string dir = ".";
    if (!path.empty()) {
        text = read_file(path);
        const auto parent = std::filesystem::path(path).parent_path().string();
        dir = parent.empty() ? "." : parent;
    }
    if (!o.preset.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        if (!j.is_object())
            throw ConfigError("config: expected an object");
        j["preset"] = o.preset;
        text = j.dump();
    }
    RunConfig c = RunConfig::from_json(text, dir);
    if (o.seed) {
        c.seed = *o.seed;
        c.variation.seed = *o.seed;
    }
    if (o.jobs)
        c.jobs = *o.jobs;
    return c;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty())
            out.push_back(cur);
    return out;
}

std::pair<std::string, std::string> split_binding(const std::string& b) {
    const auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == b.size())
        throw UsageError("binding '" + b + "' must look like ROW=FILE");
    return {b.substr(0, eq), b.substr(eq + 1)};
}

RowAddress parse_binding_row(const std::string& name, const Geometry& g) {
    try {
        const RowAddress r = parse_row_address(name, g);
        if (!r.valid_in(g))
            throw UsageError("row '" + name + "' is outside the geometry");
        return r;
    } catch (const ParseError& e) {
        throw UsageError(e.message());
    }
}

void print_trace(const TraceEvent& e) {
    std::fprintf(stderr, "trace ins=%zu stripe=%llu sub=%u type=%d bl=%s\n", e.instruction,
                 static_cast<unsigned long long>(e.stripe), e.subarray, static_cast<int>(e.type), e.bl.to_hex().c_str());
}

// ---------------------------------------------------------------------------

int cmd_assemble(const GlobalOptions& go, const std::string& file, bool do_render) {
    const RunConfig cfg = load_config(go);
    const std::string text = read_file(file);
    Program p;
    try {
        p = parse(text, cfg.geometry);
    } catch (const ParseError& e) {
        std::cerr << file << ":" << e.line() << ":" << e.column() << ": " << e.message() << "\n";
        return 1;
    }
    const auto diags = validate(p, cfg.geometry);
    for (const auto& d : diags)
        std::cerr << file << ":" << p.instructions[d.instruction].line << ": instruction " << d.instruction << ": "
                  << d.message << "\n";
    if (!diags.empty())
        return 1;
    if (do_render)
        std::cout << render(p, cfg.geometry);
    else
        std::cout << "ok: " << p.instructions.size() << " instructions, " << p.stripes(cfg.geometry)
                  << " stripes\n";
    return 0;
}

struct RunArgs {
    std::string program;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string image_in;
    std::string image_out;
    bool trace = false;
    bool fill = false;
};

int cmd_run(const GlobalOptions& go, const RunArgs& a) {
    const RunConfig cfg = load_config(go);
    const Geometry& g = cfg.geometry;
    Program p;
    try {
        p = parse(read_file(a.program), g);
    } catch (const ParseError& e) {
        std::cerr << a.program << ":" << e.line() << ":" << e.column() << ": " << e.message() << "\n";
        return 1;
    }
    if (const auto diags = validate(p, g); !diags.empty()) {
        for (const auto& d : diags)
            std::cerr << a.program << ":" << p.instructions[d.instruction].line << ": instruction "
                      << d.instruction << ": " << d.message << "\n";
        return 1;
    }
    const StripeLayout layout(p, g);
    const std::size_t bits = layout.stripes * g.cols_per_row;

    MemoryState mem = a.image_in.empty() ? MemoryState(g, a.fill) : read_image(a.image_in);
    if (!(mem.geometry() == g))
        throw UsageError("memory image geometry differs from the configured geometry");

    for (const auto& b : a.inputs) {
        const auto [row, file] = split_binding(b);
        const RowAddress addr = parse_binding_row(row, g);
        BitRow v;
        try {
            v = read_vector(file, bits);
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        }
        try {
            store_vector(mem, layout, addr, v);
        } catch (const Error& e) {
            throw UsageError(row + ": " + e.what());
        }
    }

    ExecuteOptions opts;
    opts.jobs = cfg.effective_jobs();
    if (a.trace)
        opts.trace = print_trace;
    const ExecutionStats stats = execute(p, mem, AnalogEngine(cfg.analog), opts);

    for (const auto& b : a.outputs) {
        const auto [row, file] = split_binding(b);
        write_vector(file, load_vector(mem, layout, parse_binding_row(row, g)));
    }
    if (!a.image_out.empty())
        write_image(a.image_out, mem);
    std::cout << stats.to_json() << "\n";
    return 0;
}

struct KernelArgs {
    std::string op;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::uint32_t nbits = 0;
    bool verify = false;
    bool paper_literal = false;
    bool trace = false;
};

// Lanes of nbits-wide little-endian integers to bit-planes and back.
std::vector<BitRow> to_planes(const BitRow& lanes, std::uint32_t nbits) {
    const std::size_t n = lanes.size() / nbits;
    std::vector<BitRow> planes(nbits, BitRow(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::uint32_t k = 0; k < nbits; ++k)
            planes[k].set(j, lanes.get(j * nbits + k));
    return planes;
}

BitRow from_planes(std::span<const BitRow> planes) {
    const std::size_t nbits = planes.size();
    const std::size_t n = planes.front().size();
    BitRow lanes(n * nbits);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < nbits; ++k)
            lanes.set(j * nbits + k, planes[k].get(j));
    return lanes;
}

int cmd_kernel(const GlobalOptions& go, const KernelArgs& a) {
    const RunConfig cfg = load_config(go);
    const Geometry& g = cfg.geometry;
    const auto op = kernel_from_name(a.op);
    if (!op)
        throw UsageError("unknown kernel '" + a.op +
                         "' (expected copy, not, and2, or2, nand2, nor2, maj3, min3, xnor2, xor2, fulladd, fullsub, "
                         "add or sub)");
    const bool ripple = *op == KernelOp::RippleAdd || *op == KernelOp::RippleSub;
    const std::uint32_t nbits = ripple ? (a.nbits == 0 ? 8 : a.nbits) : 1;
    if (!ripple && a.nbits > 1)
        throw UsageError("--nbits only applies to add and sub");
    if (ripple && nbits > 63)
        throw UsageError("--nbits must be between 1 and 63");

    const std::size_t want_inputs = ripple ? 2 : operand_count(*op);
    if (a.inputs.size() != want_inputs)
        throw UsageError(a.op + " takes " + std::to_string(want_inputs) + " operands, got " +
                         std::to_string(a.inputs.size()));

    std::vector<BitRow> files;
    for (const auto& f : a.inputs) {
        try {
            files.push_back(read_vector(f));
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        }
    }
    for (const auto& f : files)
        if (f.size() != files.front().size())
            throw UsageError("operand files differ in length");

    std::vector<BitRow> operands;
    if (ripple) {
        if (files.front().size() % nbits != 0)
            throw UsageError("operand length " + std::to_string(files.front().size()) + " is not a multiple of " +
                             std::to_string(nbits) + "-bit lanes");
        for (const auto& f : files)
            for (auto& plane : to_planes(f, nbits))
                operands.push_back(std::move(plane));
    } else {
        operands = files;
    }
    const std::size_t width = operands.front().size();
    if (width == 0 || width % g.cols_per_row != 0)
        throw UsageError("size not multiple of row width: " + std::to_string(width) + " lanes, row width " +
                         std::to_string(g.cols_per_row));
    const std::uint64_t stripes = width / g.cols_per_row;

    const std::size_t nres = result_count(*op, nbits);
    const std::size_t nrows = operands.size() + nres;
    const std::uint64_t per = std::min<std::uint64_t>(stripes, g.user_data_rows() / nrows);
    if (per == 0)
        throw UsageError("kernel needs " + std::to_string(nrows) + " data rows, geometry has " +
                         std::to_string(g.user_data_rows()));
    if ((stripes + per - 1) / per > g.subarray_count())
        throw UsageError("vector of " + std::to_string(width) + " lanes does not fit in the geometry");

    KernelSpec spec;
    spec.op = *op;
    spec.nbits = nbits;
    spec.stripes = static_cast<std::uint32_t>(stripes);
    spec.stripes_per_subarray = static_cast<std::uint32_t>(per);
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < operands.size(); ++i, next += static_cast<std::uint32_t>(per))
        spec.operands.push_back(RowAddress{0, 0, RowKind::data(next)});
    for (std::size_t i = 0; i < nres; ++i, next += static_cast<std::uint32_t>(per))
        spec.results.push_back(RowAddress{0, 0, RowKind::data(next)});

    MemoryState mem(g);
    const StripeLayout layout(stripes, spec.stripes_per_subarray);
    for (std::size_t i = 0; i < operands.size(); ++i)
        store_vector(mem, layout, spec.operands[i], operands[i]);

    EmitOptions eo;
    eo.paper_literal = a.paper_literal;
    ExecuteOptions xo;
    xo.jobs = cfg.effective_jobs();
    if (a.trace)
        xo.trace = print_trace;
    ExecutionStats stats;
    const auto results = run_kernel(spec, mem, AnalogEngine(cfg.analog), eo, xo, &stats);

    std::vector<BitRow> outputs;
    if (ripple) {
        outputs.push_back(from_planes(std::span<const BitRow>(results.data(), nbits)));
        outputs.push_back(results.back());
    } else {
        outputs = results;
    }
    if (a.outputs.size() > outputs.size())
        throw UsageError(a.op + " produces " + std::to_string(outputs.size()) + " outputs, got " +
                         std::to_string(a.outputs.size()) + " --out files");
    for (std::size_t i = 0; i < a.outputs.size(); ++i)
        write_vector(a.outputs[i], outputs[i]);
    if (a.outputs.empty())
        for (std::size_t i = 0; i < outputs.size(); ++i)
            std::cout << "out" << i << " " << outputs[i].to_hex() << "\n";
    std::cout << stats.to_json() << "\n";

    if (a.verify) {
        const auto expect = oracle_eval(*op, operands, nbits);
        std::size_t bad = 0;
        for (std::size_t i = 0; i < expect.size(); ++i) {
            BitRow diff = expect[i];
            diff ^= results[i];
            bad += diff.count();
        }
        if (bad != 0) {
            std::cerr << "drimsim: verification failed: " << bad << " result bits differ from the reference\n";
            return 2;
        }
        std::cerr << "verify: ok (" << expect.size() << " result rows, " << width << " lanes)\n";
    }
    return 0;
}

struct SweepArgs {
    std::string levels = "0,5,10,15,20,30";
    std::string mechanisms = "dra,tra";
    std::optional<std::uint64_t> trials;
    std::string distribution;
    bool stratified = false;
    std::optional<double> noise;
    std::string threshold_scale;
    std::string out;
};

int cmd_sweep(const GlobalOptions& go, const SweepArgs& a) {
    const RunConfig cfg = load_config(go);
    VariationSpec spec = cfg.variation;
    if (a.trials) {
        if (*a.trials == 0)
            throw UsageError("--trials must be at least 1");
        spec.trials = *a.trials;
    }
    if (!a.distribution.empty()) {
        const auto d = distribution_from_name(a.distribution);
        if (!d)
            throw UsageError("--distribution must be uniform or gaussian");
        spec.distribution = *d;
    }
    if (a.stratified)
        spec.stratified = true;
    if (a.noise)
        spec.noise = *a.noise;
    if (!a.threshold_scale.empty()) {
        const auto t = threshold_scale_from_name(a.threshold_scale);
        if (!t)
            throw UsageError("--threshold-scale must be relative or absolute");
        spec.threshold_scale = *t;
    }

    std::vector<double> levels;
    for (const auto& s : split(a.levels, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || v < 0 || v >= 100)
            throw UsageError("bad level '" + s + "' (percent, 0 <= level < 100)");
        levels.push_back(v / 100.0);
    }
    std::vector<Mechanism> mechs;
    for (const auto& s : split(a.mechanisms, ',')) {
        if (s == "dra")
            mechs.push_back(Mechanism::Dra);
        else if (s == "tra")
            mechs.push_back(Mechanism::Tra);
        else
            throw UsageError("unknown mechanism '" + s + "' (expected dra or tra)");
    }
    if (levels.empty() || mechs.empty())
        throw UsageError("need at least one level and one mechanism");

    const SweepResult r = run_sweep(levels, mechs, spec, cfg.analog, cfg.effective_jobs());
    if (a.out.empty())
        std::cout << r.to_csv();
    else
        write_file(a.out, r.to_csv());
    return 0;
}

struct PerfArgs {
    std::vector<std::string> ops;
    std::string platforms = "drim,ambit,drisa-1t1c,drisa-3t1c";
    std::string sizes = "2^27,2^28,2^29";
    std::string format = "json";
    std::string out;
    std::optional<double> t_aap;
    std::optional<std::uint64_t> parallel;
    bool fit = false;
};

std::uint64_t parse_size(const std::string& s) {
    try {
        std::size_t used = 0;
        if (s.starts_with("2^")) {
            const auto e = std::stoul(s.substr(2), &used);
            if (used + 2 == s.size() && e < 63)
                return std::uint64_t{1} << e;
        } else {
            const auto v = std::stoull(s, &used);
            if (used == s.size())
                return v;
        }
    } catch (const std::exception&) {
    }
    throw UsageError("bad vector size '" + s + "'");
}

int cmd_perf(const GlobalOptions& go, const PerfArgs& a) {
    if (a.fit) {
        std::cout << Calibration::fit().to_json();
        return 0;
    }
    RunConfig cfg = load_config(go);
    if (a.t_aap)
        cfg.cost.t_aap_ns = *a.t_aap;
    if (a.parallel)
        cfg.cost.parallel_subarrays = *a.parallel;
    cfg.cost.validate();

    std::vector<PerfOp> ops;
    for (const auto& s : a.ops.empty() ? std::vector<std::string>{"not", "xnor2", "add"} : a.ops) {
        const auto op = perf_op_from_name(s);
        if (!op)
            throw UsageError("unknown op '" + s + "' (expected copy, not, xnor2 or add)");
        ops.push_back(*op);
    }
    std::vector<Platform> platforms;
    for (const auto& s : split(a.platforms, ',')) {
        const auto p = platform_from_name(s);
        if (!p)
            throw UsageError("unknown platform '" + s + "' (expected drim, ambit, drisa-1t1c or drisa-3t1c)");
        platforms.push_back(*p);
    }
    std::vector<std::uint64_t> sizes;
    for (const auto& s : split(a.sizes, ','))
        sizes.push_back(parse_size(s));
    if (platforms.empty() || sizes.empty())
        throw UsageError("need at least one platform and one size");

    std::string text;
    if (a.format == "json")
        text = perf_report_json(ops, platforms, sizes, cfg.cost);
    else if (a.format == "csv")
        text = perf_report_csv(ops, platforms, sizes, cfg.cost);
    else
        throw UsageError("--format must be json or csv");
    if (a.out.empty())
        std::cout << text;
    else
        write_file(a.out, text);
    return 0;
}

int cmd_area(const GlobalOptions& go, const std::string& out) {
    const RunConfig cfg = load_config(go);
    const std::string text = area_report_json(area_report(cfg.geometry));
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DRIM processing-in-DRAM simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions go;
    app.add_option("--config", go.config_path, std::string("JSON run configuration (default: $") + kConfigEnv + ")");
    app.add_option("--preset", go.preset, "Geometry preset: drim-r or drim-s");
    app.add_option("--seed", go.seed, "Random seed");
    app.add_option("--jobs", go.jobs, "Worker threads (default: all cores)");

    std::string asm_file;
    bool asm_render = false;
    auto* assemble = app.add_subcommand("assemble", "Parse and validate a program");
    assemble->add_option("program", asm_file, "Assembly file")->required();
    assemble->add_flag("--render", asm_render, "Print the canonical form");

    RunArgs ra;
    auto* run = app.add_subcommand("run", "Execute a program");
    run->add_option("program", ra.program, "Assembly file")->required();
    run->add_option("--in", ra.inputs, "ROW=FILE input binding");
    run->add_option("--out", ra.outputs, "ROW=FILE output binding");
    run->add_option("--image-in", ra.image_in, "Initial memory image");
    run->add_option("--image-out", ra.image_out, "Write the final memory image");
    run->add_flag("--trace", ra.trace, "Print one line per AAP to standard error");
    run->add_flag("--fill", ra.fill, "Start with all cells set to 1");

    KernelArgs ka;
    auto* kernel = app.add_subcommand("kernel", "Run a built-in kernel on vector files");
    kernel->add_option("op", ka.op, "Kernel name")->required();
    kernel->add_option("inputs", ka.inputs, "Operand files");
    kernel->add_option("--nbits", ka.nbits, "Lane width for add/sub (default 8)");
    kernel->add_option("--out", ka.outputs, "Result files, in result order");
    kernel->add_flag("--verify", ka.verify, "Compare with the host reference");
    kernel->add_flag("--paper-literal", ka.paper_literal, "Emit the adder carry step as originally tabulated");
    kernel->add_flag("--trace", ka.trace, "Print one line per AAP to standard error");

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo process-variation sweep");
    sweep->add_option("--levels", sa.levels, "Comma-separated variation levels in percent")->capture_default_str();
    sweep->add_option("--mechanisms", sa.mechanisms, "dra,tra")->capture_default_str();
    sweep->add_option("--trials", sa.trials, "Trials per level (default from config: 10000)");
    sweep->add_option("--distribution", sa.distribution, "uniform or gaussian");
    sweep->add_flag("--stratified", sa.stratified, "Cycle through input patterns");
    sweep->add_option("--noise", sa.noise, "Coupling noise amplitude in units of vdd");
    sweep->add_option("--threshold-scale", sa.threshold_scale, "relative or absolute threshold shifts");
    sweep->add_option("--out", sa.out, "CSV file (default: standard output)");

    PerfArgs pa;
    auto* perf = app.add_subcommand("perf", "Latency, throughput and energy report");
    perf->add_option("ops", pa.ops, "copy, not, xnor2, add (default: not xnor2 add)");
    perf->add_option("--platforms,--platform", pa.platforms, "Comma-separated platforms")->capture_default_str();
    perf->add_option("--sizes", pa.sizes, "Vector sizes in bits; 2^N accepted")->capture_default_str();
    perf->add_option("--format", pa.format, "json or csv")->capture_default_str();
    perf->add_option("--out", pa.out, "Report file (default: standard output)");
    perf->add_option("--t-aap", pa.t_aap, "AAP latency in ns");
    perf->add_option("--parallel-subarrays", pa.parallel, "Sub-arrays computing at once");
    perf->add_flag("--fit-calibration", pa.fit, "Print the fitted energy calibration and exit");

    std::string area_out;
    auto* area = app.add_subcommand("area", "Area overhead report");
    area->add_option("--out", area_out, "Report file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*assemble)
            return cmd_assemble(go, asm_file, asm_render);
        if (*run)
            return cmd_run(go, ra);
        if (*kernel)
            return cmd_kernel(go, ka);
        if (*sweep)
            return cmd_sweep(go, sa);
        if (*perf)
            return cmd_perf(go, pa);
        if (*area)
            return cmd_area(go, area_out);
    } catch (const UsageError& e) {
        std::cerr << "drimsim: error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "drimsim: error: " << e.what() << "\n";
        return 1;
    } catch (const ArityError& e) {
        std::cerr << "drimsim: error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "drimsim: runtime error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
