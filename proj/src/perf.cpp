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

#include "drim/perf.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "drim/error.hpp"
#include "drim/kernels.hpp"

namespace drim {

namespace {

constexpr double kBitsPerKb = 8192.0;

struct Named {
    const char* name;
    int value;
};

constexpr Named kPlatforms[] = {{"drim", 0}, {"ambit", 1}, {"drisa-1t1c", 2}, {"drisa-3t1c", 3}};
constexpr Named kOps[] = {{"copy", 0}, {"not", 1}, {"xnor2", 2}, {"add", 3}};

}  // namespace

std::string to_string(Platform p) {
    return kPlatforms[static_cast<int>(p)].name;
}

std::optional<Platform> platform_from_name(std::string_view name) {
    for (const auto& n : kPlatforms)
        if (name == n.name)
            return static_cast<Platform>(n.value);
    return std::nullopt;
}

std::string to_string(PerfOp op) {
    return kOps[static_cast<int>(op)].name;
}

std::optional<PerfOp> perf_op_from_name(std::string_view name) {
    for (const auto& n : kOps)
        if (name == n.name)
            return static_cast<PerfOp>(n.value);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Step sequences

namespace {

std::vector<Step> drim_steps(PerfOp op) {
    const Geometry g;
    KernelSpec spec;
    auto row = [](std::uint32_t i) { return RowAddress{0, 0, RowKind::data(i)}; };
    switch (op) {
    case PerfOp::Copy:
        spec.op = KernelOp::Copy;
        break;
    case PerfOp::Not:
        spec.op = KernelOp::Not;
        break;
    case PerfOp::Xnor2:
        spec.op = KernelOp::Xnor2;
        break;
    case PerfOp::Add:
        spec.op = KernelOp::FullAdd;
        break;
    }
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < operand_count(spec.op); ++i)
        spec.operands.push_back(row(next++));
    for (std::size_t i = 0; i < result_count(spec.op); ++i)
        spec.results.push_back(row(next++));

    std::vector<Step> steps;
    for (const auto& ins : emit(spec, g).instructions) {
        Step s;
        s.rows_activated = static_cast<std::uint32_t>(ins.sources.size());
        s.rows_written = static_cast<std::uint32_t>(ins.destinations.size());
        s.dra = ins.type == AapType::Type3;
        s.label = render(ins, g);
        steps.push_back(std::move(s));
    }
    return steps;
}

Step aap(std::uint32_t activated, std::uint32_t written, std::string label) {
    return Step{activated, written, false, false, std::move(label)};
}

// Ambit B-group sizes: B0..B7 one row, B8..B11 two rows, B12..B15 three.
std::vector<Step> ambit_xor_family(bool xnor, const std::string& a, const std::string& b, const std::string& r) {
    // T2/T3 hold the control pair; XNOR swaps which constant goes where.
    const std::string first = xnor ? "C1" : "C0";
    const std::string second = xnor ? "C0" : "C1";
    return {
        aap(1, 2, "AAP(" + a + ",B8)"),       aap(1, 2, "AAP(" + b + ",B9)"),
        aap(1, 2, "AAP(" + first + ",B10)"),  aap(3, 0, "AP(B14)"),
        aap(3, 0, "AP(B15)"),                 aap(1, 1, "AAP(" + second + ",B2)"),
        aap(3, 1, "AAP(B12," + r + ")"),
    };
}

std::vector<Step> ambit_steps(PerfOp op) {
    switch (op) {
    case PerfOp::Copy:
        return {aap(1, 1, "AAP(Di,Dr)")};
    case PerfOp::Not:
        return {aap(1, 1, "AAP(Di,B5)"), aap(1, 1, "AAP(B4,Dr)")};
    case PerfOp::Xnor2:
        return ambit_xor_family(true, "Di", "Dj", "Dr");
    case PerfOp::Add: {
        auto s = ambit_xor_family(false, "Di", "Dj", "Dt");
        auto s2 = ambit_xor_family(false, "Dt", "Dk", "Sum");
        s.insert(s.end(), s2.begin(), s2.end());
        s.push_back(aap(1, 1, "AAP(Di,B0)"));
        s.push_back(aap(1, 1, "AAP(Dj,B1)"));
        s.push_back(aap(1, 1, "AAP(Dk,B2)"));
        s.push_back(aap(3, 1, "AAP(B12,Cout)"));
        return s;
    }
    }
    return {};
}

void gate(std::vector<Step>& s, const std::string& name, const std::string& a, const std::string& b,
          const std::string& r) {
    s.push_back(Step{1, 0, false, true, "latch " + a});
    s.push_back(Step{1, 1, false, true, name + "(" + a + "," + b + ")->" + r});
}

std::vector<Step> drisa1t1c_steps(PerfOp op) {
    std::vector<Step> s;
    switch (op) {
    case PerfOp::Copy:
        s.push_back(aap(1, 1, "copy Di->Dr"));
        break;
    case PerfOp::Not:
        gate(s, "NOT", "Di", "Di", "Dr");
        break;
    case PerfOp::Xnor2:
        gate(s, "AND", "Di", "Dj", "T0");
        gate(s, "NOR", "Di", "Dj", "T1");
        gate(s, "OR", "T0", "T1", "Dr");
        break;
    case PerfOp::Add:
        gate(s, "AND", "Di", "Dj", "T0");
        gate(s, "NOR", "Di", "Dj", "T1");
        gate(s, "NOR", "T0", "T1", "T2");
        gate(s, "AND", "T2", "Dk", "T3");
        gate(s, "NOR", "T2", "Dk", "T4");
        gate(s, "NOR", "T3", "T4", "Sum");
        gate(s, "OR", "T0", "T3", "Cout");
        break;
    }
    return s;
}

std::vector<Step> drisa3t1c_steps(PerfOp op) {
    std::vector<Step> s;
    auto nor = [&](const std::string& a, const std::string& b, const std::string& r) { gate(s, "NOR", a, b, r); };
    switch (op) {
    case PerfOp::Copy:
        s.push_back(aap(1, 1, "copy Di->Dr"));
        break;
    case PerfOp::Not:
        nor("Di", "Di", "Dr");
        break;
    case PerfOp::Xnor2:
        nor("Di", "Dj", "T0");
        nor("Di", "T0", "T1");
        nor("Dj", "T0", "T2");
        nor("T1", "T2", "Dr");
        break;
    case PerfOp::Add:
        // Two four-NOR XNOR stages give the sum; the carry reuses
        // T0 = NOR(a,b) and T4 = (a XOR b) AND NOT c.
        nor("Di", "Dj", "T0");
        nor("Di", "T0", "T1");
        nor("Dj", "T0", "T2");
        nor("T1", "T2", "T3");
        nor("T3", "Dk", "T4");
        nor("T3", "T4", "T5");
        nor("Dk", "T4", "T6");
        nor("T5", "T6", "Sum");
        nor("T0", "T4", "Cout");
        break;
    }
    return s;
}

}  // namespace

std::vector<Step> step_sequence(PerfOp op, Platform platform) {
    switch (platform) {
    case Platform::Drim:
        return drim_steps(op);
    case Platform::Ambit:
        return ambit_steps(op);
    case Platform::Drisa1t1c:
        return drisa1t1c_steps(op);
    case Platform::Drisa3t1c:
        return drisa3t1c_steps(op);
    }
    throw ConfigError("unknown platform");
}

double step_energy(const Step& step, const EnergyConstants& e) {
    const double rows = step.rows_activated == 0 ? 0.0 : 1.0 + e.extra_row_fraction * (step.rows_activated - 1.0);
    return e.precharge + e.activate * rows + e.write * step.rows_written + (step.dra ? e.dra_sense : 0.0) +
           (step.gate ? e.drisa_gate : 0.0);
}

namespace {

double sequence_energy(const std::vector<Step>& steps, const EnergyConstants& e) {
    double sum = 0.0;
    for (const auto& s : steps)
        sum += step_energy(s, e);
    return sum;
}

}  // namespace

// ---------------------------------------------------------------------------
// Calibration

Calibration Calibration::fit(const EnergyConstants& base, const CalibrationTargets& t) {
    Calibration c;
    c.targets = t;
    EnergyConstants e = base;
    e.dra_sense = 0.0;
    e.drisa_gate = 0.0;

    const auto drim_xnor = step_sequence(PerfOp::Xnor2, Platform::Drim);
    std::size_t dra_steps = 0;
    for (const auto& s : drim_xnor)
        dra_steps += s.dra;
    const double ambit = sequence_energy(step_sequence(PerfOp::Xnor2, Platform::Ambit), e);
    e.dra_sense = (ambit / t.xnor_vs_ambit - sequence_energy(drim_xnor, e)) / static_cast<double>(dra_steps);

    const double drim = sequence_energy(drim_xnor, e);
    const auto drisa = step_sequence(PerfOp::Xnor2, Platform::Drisa1t1c);
    std::size_t gate_steps = 0;
    for (const auto& s : drisa)
        gate_steps += s.gate;
    e.drisa_gate = (t.xnor_vs_drisa1t1c * drim - sequence_energy(drisa, e)) / static_cast<double>(gate_steps);

    e.ddr4_copy_per_kb = t.copy_vs_ddr4 * sequence_energy(step_sequence(PerfOp::Copy, Platform::Drim), e) * kBitsPerKb;
    c.energy = e;
    c.notes = {
        "Energies are pJ per bit-line per step.",
        "precharge, activate, extra_row_fraction and write are chosen base values, not measurements.",
        "dra_sense is fitted so that DRIM XNOR2 uses xnor_vs_ambit times less energy than Ambit XNOR2.",
        "drisa_gate is fitted so that DRIM XNOR2 uses xnor_vs_drisa1t1c times less energy than DRISA-1T1C.",
        "ddr4_copy_per_kb is fitted so that a DDR4 interface copy costs copy_vs_ddr4 times a DRIM copy.",
    };
    return c;
}

const Calibration& Calibration::builtin() {
    static const Calibration c = fit();
    return c;
}

std::string Calibration::to_json() const {
    nlohmann::ordered_json j;
    j["version"] = version;
    j["energy_pj_per_bit"] = {
        {"precharge", energy.precharge},
        {"activate", energy.activate},
        {"extra_row_fraction", energy.extra_row_fraction},
        {"write", energy.write},
        {"dra_sense", energy.dra_sense},
        {"drisa_gate", energy.drisa_gate},
    };
    j["ddr4_copy_pj_per_kb"] = energy.ddr4_copy_per_kb;
    j["targets"] = {
        {"xnor_vs_ambit", targets.xnor_vs_ambit},
        {"xnor_vs_drisa1t1c", targets.xnor_vs_drisa1t1c},
        {"copy_vs_ddr4", targets.copy_vs_ddr4},
    };
    j["notes"] = notes;
    return j.dump(2) + "\n";
}

namespace {

void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> known, const std::string& where) {
    if (!obj.is_object())
        throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            ok = ok || key == k;
        if (!ok)
            throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double number(const nlohmann::json& obj, const char* key, double fallback, const std::string& where) {
    if (!obj.contains(key))
        return fallback;
    if (!obj[key].is_number())
        throw ConfigError(where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

}  // namespace

Calibration Calibration::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("calibration: ") + e.what());
    }
    reject_unknown(j, {"version", "energy_pj_per_bit", "ddr4_copy_pj_per_kb", "targets", "notes"}, "calibration");
    Calibration c;
    c.version = static_cast<int>(number(j, "version", 1, "calibration"));
    if (c.version != 1)
        throw ConfigError("calibration: unsupported version " + std::to_string(c.version));
    if (j.contains("energy_pj_per_bit")) {
        const auto& e = j["energy_pj_per_bit"];
        const std::string w = "calibration.energy_pj_per_bit";
        reject_unknown(e, {"precharge", "activate", "extra_row_fraction", "write", "dra_sense", "drisa_gate"}, w);
        c.energy.precharge = number(e, "precharge", c.energy.precharge, w);
        c.energy.activate = number(e, "activate", c.energy.activate, w);
        c.energy.extra_row_fraction = number(e, "extra_row_fraction", c.energy.extra_row_fraction, w);
        c.energy.write = number(e, "write", c.energy.write, w);
        c.energy.dra_sense = number(e, "dra_sense", c.energy.dra_sense, w);
        c.energy.drisa_gate = number(e, "drisa_gate", c.energy.drisa_gate, w);
    }
    c.energy.ddr4_copy_per_kb = number(j, "ddr4_copy_pj_per_kb", 0.0, "calibration");
    if (j.contains("targets")) {
        const auto& t = j["targets"];
        const std::string w = "calibration.targets";
        reject_unknown(t, {"xnor_vs_ambit", "xnor_vs_drisa1t1c", "copy_vs_ddr4"}, w);
        c.targets.xnor_vs_ambit = number(t, "xnor_vs_ambit", c.targets.xnor_vs_ambit, w);
        c.targets.xnor_vs_drisa1t1c = number(t, "xnor_vs_drisa1t1c", c.targets.xnor_vs_drisa1t1c, w);
        c.targets.copy_vs_ddr4 = number(t, "copy_vs_ddr4", c.targets.copy_vs_ddr4, w);
    }
    if (j.contains("notes")) {
        if (!j["notes"].is_array())
            throw ConfigError("calibration.notes: expected an array of strings");
        for (const auto& n : j["notes"]) {
            if (!n.is_string())
                throw ConfigError("calibration.notes: expected an array of strings");
            c.notes.push_back(n.get<std::string>());
        }
    }
    const auto& e = c.energy;
    if (e.precharge < 0 || e.activate <= 0 || e.extra_row_fraction < 0 || e.write < 0 || e.dra_sense < 0 ||
        e.drisa_gate < 0 || e.ddr4_copy_per_kb < 0)
        throw ConfigError("calibration: energies must be non-negative (activate positive)");
    return c;
}

Calibration Calibration::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open calibration file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Costs

void CostModel::validate() const {
    geometry.validate();
    if (!(t_aap_ns > 0.0) || !std::isfinite(t_aap_ns))
        throw ConfigError("t_aap_ns must be positive");
    if (parallel_subarrays > geometry.subarray_count())
        throw ConfigError("parallel_subarrays (" + std::to_string(parallel_subarrays) + ") exceeds the " +
                          std::to_string(geometry.subarray_count()) + " sub-arrays of the geometry");
}

std::uint64_t CostModel::active_subarrays() const {
    return parallel_subarrays == 0 ? geometry.subarray_count() : parallel_subarrays;
}

std::uint64_t CostModel::batch_bits() const {
    return std::uint64_t{geometry.cols_per_row} * active_subarrays();
}

OpCost cost_of(PerfOp op, Platform platform, const CostModel& model) {
    model.validate();
    const auto steps = step_sequence(op, platform);
    OpCost c;
    c.aap_count = steps.size();
    c.latency_ns = static_cast<double>(c.aap_count) * model.t_aap_ns;
    c.energy_per_bit_pj = sequence_energy(steps, model.calibration.energy);
    c.energy_per_kb_pj = c.energy_per_bit_pj * kBitsPerKb;
    return c;
}

double throughput(PerfOp op, Platform platform, std::uint64_t vector_bits, const CostModel& model) {
    model.validate();
    const std::uint64_t cols = model.geometry.cols_per_row;
    if (vector_bits == 0 || vector_bits % cols != 0)
        throw ConfigError("vector size " + std::to_string(vector_bits) + " is not a positive multiple of " +
                          std::to_string(cols) + " columns");
    const std::uint64_t batch = model.batch_bits();
    const std::uint64_t batches = (vector_bits + batch - 1) / batch;
    const double seconds = static_cast<double>(batches) * cost_of(op, platform, model).latency_ns * 1e-9;
    return static_cast<double>(vector_bits) / seconds;
}

double energy_pj(PerfOp op, Platform platform, std::uint64_t vector_bits, const CostModel& model) {
    return cost_of(op, platform, model).energy_per_bit_pj * static_cast<double>(vector_bits);
}

EnergyReport energy_report(PerfOp op, const CostModel& model) {
    EnergyReport r;
    r.op = op;
    r.drim_per_kb_pj = cost_of(op, Platform::Drim, model).energy_per_kb_pj;
    for (Platform p : {Platform::Ambit, Platform::Drisa1t1c, Platform::Drisa3t1c}) {
        const double e = cost_of(op, p, model).energy_per_kb_pj;
        r.baselines.push_back({p, e, e / r.drim_per_kb_pj});
    }
    if (op == PerfOp::Copy)
        r.ddr4_ratio = model.calibration.energy.ddr4_copy_per_kb / r.drim_per_kb_pj;
    return r;
}

// ---------------------------------------------------------------------------
// Area

AreaReport area_report(const Geometry& g) {
    g.validate();
    AreaReport r;
    r.cols = g.cols_per_row;
    r.subarrays = g.subarray_count();
    r.sa_transistors = std::uint64_t{r.sa_addon_each} * r.cols;
    r.dcc_rows = g.dcc_cells;
    r.dcc_transistors = std::uint64_t{r.dcc_rows} * r.cols;
    r.mrd_wordlines = g.compute_wordlines();
    r.mrd_transistors = 2ull * r.mrd_wordlines;
    r.ctrl_transistors = 6ull * r.ctrl_muxes;
    r.total_per_subarray = r.sa_transistors + r.dcc_transistors + r.mrd_transistors + r.ctrl_transistors;
    r.total_chip = r.total_per_subarray * r.subarrays;
    r.equivalent_rows = r.sa_addon_each + r.dcc_rows;
    r.equivalent_rows_exact = static_cast<double>(r.total_per_subarray) / r.cols;
    r.rows_fraction_pct = 100.0 * r.reported_rows / g.rows_per_subarray;
    std::ostringstream caveat;
    caveat << r.reported_rows << " rows of " << g.rows_per_subarray << " is " << r.rows_fraction_pct
           << "% of the array; the published " << r.reported_chip_area_pct
           << "% chip-area figure is echoed, not derived from these counts";
    r.caveat = caveat.str();
    return r;
}

std::string area_report_json(const AreaReport& r) {
    nlohmann::ordered_json j;
    j["cols_per_row"] = r.cols;
    j["subarrays"] = r.subarrays;
    j["per_subarray"] = {
        {"sense_amp", {{"per_sa", r.sa_addon_each}, {"transistors", r.sa_transistors}}},
        {"dcc", {{"rows", r.dcc_rows}, {"per_bitline_per_row", 1}, {"transistors", r.dcc_transistors}}},
        {"row_decoder", {{"wordlines", r.mrd_wordlines}, {"per_driver", 2}, {"transistors", r.mrd_transistors}}},
        {"ctrl", {{"muxes", r.ctrl_muxes}, {"per_mux", 6}, {"transistors", r.ctrl_transistors}}},
        {"total_transistors", r.total_per_subarray},
    };
    j["total_chip_transistors"] = r.total_chip;
    j["equivalent_rows"] = r.equivalent_rows;
    j["equivalent_rows_exact"] = r.equivalent_rows_exact;
    j["reported"] = {{"equivalent_rows", r.reported_rows}, {"chip_area_pct", r.reported_chip_area_pct}};
    j["rows_fraction_pct"] = r.rows_fraction_pct;
    j["caveat"] = r.caveat;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Reports

std::string perf_report_json(const std::vector<PerfOp>& ops, const std::vector<Platform>& platforms,
                             const std::vector<std::uint64_t>& sizes, const CostModel& model) {
    model.validate();
    nlohmann::ordered_json j;
    j["t_aap_ns"] = model.t_aap_ns;
    j["parallel_subarrays"] = model.active_subarrays();
    j["batch_bits"] = model.batch_bits();
    j["calibration_version"] = model.calibration.version;
    auto results = nlohmann::ordered_json::array();
    for (PerfOp op : ops) {
        const OpCost drim = cost_of(op, Platform::Drim, model);
        for (Platform p : platforms) {
            const OpCost c = cost_of(op, p, model);
            nlohmann::ordered_json row;
            row["op"] = to_string(op);
            row["platform"] = to_string(p);
            row["aap_count"] = c.aap_count;
            row["latency_ns"] = c.latency_ns;
            row["energy_per_kb_pj"] = c.energy_per_kb_pj;
            // DRIM speedup and energy reduction over this platform.
            row["ratio"] = static_cast<double>(c.aap_count) / static_cast<double>(drim.aap_count);
            row["energy_ratio"] = c.energy_per_kb_pj / drim.energy_per_kb_pj;
            auto per_size = nlohmann::ordered_json::array();
            for (auto v : sizes)
                per_size.push_back({{"vector_bits", v}, {"throughput_ops", throughput(op, p, v, model)}});
            row["throughput"] = per_size;
            auto seq = nlohmann::ordered_json::array();
            for (const auto& s : step_sequence(op, p))
                seq.push_back(s.label);
            row["sequence"] = seq;
            results.push_back(row);
        }
        if (op == PerfOp::Copy)
            j["ddr4_copy"] = {{"energy_per_kb_pj", model.calibration.energy.ddr4_copy_per_kb},
                              {"energy_ratio", model.calibration.energy.ddr4_copy_per_kb / drim.energy_per_kb_pj}};
    }
    j["results"] = results;
    return j.dump(2) + "\n";
}

std::string perf_report_csv(const std::vector<PerfOp>& ops, const std::vector<Platform>& platforms,
                            const std::vector<std::uint64_t>& sizes, const CostModel& model) {
    model.validate();
    std::ostringstream out;
    out.precision(17);
    out << "op,platform,vector_bits,aap_count,latency_ns,throughput_ops,energy_per_kb_pj,ratio,energy_ratio\n";
    for (PerfOp op : ops) {
        const OpCost drim = cost_of(op, Platform::Drim, model);
        for (Platform p : platforms) {
            const OpCost c = cost_of(op, p, model);
            for (auto v : sizes)
                out << to_string(op) << ',' << to_string(p) << ',' << v << ',' << c.aap_count << ','
                    << c.latency_ns << ',' << throughput(op, p, v, model) << ',' << c.energy_per_kb_pj << ','
                    << static_cast<double>(c.aap_count) / static_cast<double>(drim.aap_count) << ','
                    << c.energy_per_kb_pj / drim.energy_per_kb_pj << '\n';
        }
    }
    return out.str();
}

}  // namespace drim
