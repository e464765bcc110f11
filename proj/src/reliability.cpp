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

#include "drim/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

#include "drim/error.hpp"

namespace drim {

const char* to_string(Distribution d) {
    return d == Distribution::Uniform ? "uniform" : "gaussian";
}

std::optional<Distribution> distribution_from_name(std::string_view name) {
    if (name == "uniform")
        return Distribution::Uniform;
    if (name == "gaussian")
        return Distribution::Gaussian;
    return std::nullopt;
}

const char* to_string(ThresholdScale s) {
    return s == ThresholdScale::Relative ? "relative" : "absolute";
}

std::optional<ThresholdScale> threshold_scale_from_name(std::string_view name) {
    if (name == "relative")
        return ThresholdScale::Relative;
    if (name == "absolute")
        return ThresholdScale::Absolute;
    return std::nullopt;
}

void VariationSpec::validate() const {
    if (!(level >= 0.0) || !std::isfinite(level))
        throw ConfigError("variation level must be a non-negative number");
    if (level >= 1.0)
        throw ConfigError("variation level must be below 1 (100%)");
    if (trials == 0)
        throw ConfigError("trials must be at least 1");
    if (!(noise >= 0.0) || !std::isfinite(noise))
        throw ConfigError("noise must be non-negative");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// [0, 1) from the top 53 bits; std distributions are not portable.
double unit_interval(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double draw_one(std::mt19937_64& rng, Distribution d) {
    if (d == Distribution::Uniform)
        return 2.0 * unit_interval(rng) - 1.0;
    for (;;) {
        const double u1 = 1.0 - unit_interval(rng);
        const double u2 = unit_interval(rng);
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        if (std::abs(z) <= 3.0)
            return z / 3.0;
    }
}

}  // namespace

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ trial));
}

UnitDraws draw_unit(std::mt19937_64& rng, Distribution distribution) {
    UnitDraws d;
    d.pattern = static_cast<unsigned>(rng() >> 61);
    for (auto& u : d.u)
        u = draw_one(rng, distribution);
    return d;
}

VariationSample scale(const UnitDraws& d, const VariationSpec& spec, const AnalogParams& params) {
    VariationSample s;
    const double l = spec.level;
    for (std::size_t i = 0; i < VariationSample::max_cells; ++i) {
        if (spec.vary_cell_cap)
            s.d_cell_cap[i] = l * d.u[i];
        if (spec.vary_cell_voltage)
            s.d_cell_v[i] = l * d.u[3 + i];
    }
    if (spec.vary_bl_cap)
        s.d_bl_cap = l * d.u[6];
    if (spec.vary_thresholds) {
        const bool rel = spec.threshold_scale == ThresholdScale::Relative;
        s.d_vs_low = l * (rel ? params.vs_low : params.vdd) * d.u[7];
        s.d_vs_high = l * (rel ? params.vs_high : params.vdd) * d.u[8];
        s.d_vs_mid = l * (rel ? params.vs_mid : params.vdd) * d.u[9];
    }
    s.v_noise = spec.noise * params.vdd * d.u[10];
    // u[11] is reserved so adding a field later keeps the streams aligned.
    return s;
}

VariationSample sample(const VariationSpec& spec, const AnalogParams& params, std::mt19937_64& rng) {
    spec.validate();
    return scale(draw_unit(rng, spec.distribution), spec, params);
}

const SweepRow* SweepResult::find(double level, Mechanism m) const {
    for (const auto& r : rows)
        if (r.level == level && r.mechanism == m)
            return &r;
    return nullptr;
}

std::string SweepResult::to_csv() const {
    std::string out = "level,mechanism,trials,failures,failure_pct,seed\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.4f,%s,%llu,%llu,%.4f,%llu\n", r.level, to_string(r.mechanism),
                      static_cast<unsigned long long>(r.trials), static_cast<unsigned long long>(r.failures),
                      r.failure_pct(), static_cast<unsigned long long>(seed));
        out += buf;
    }
    return out;
}

SweepResult run_sweep(const std::vector<double>& levels, const std::vector<Mechanism>& mechanisms,
                      const VariationSpec& spec, const AnalogParams& params, unsigned jobs) {
    spec.validate();
    params.validate();
    for (double l : levels) {
        VariationSpec s = spec;
        s.level = l;
        s.validate();
    }

    const std::size_t cells = levels.size() * mechanisms.size();
    auto run_range = [&](std::uint64_t begin, std::uint64_t end, std::vector<std::uint64_t>& fails) {
        VariationSpec s = spec;
        for (std::uint64_t t = begin; t < end; ++t) {
            auto rng = trial_rng(spec.seed, t);
            UnitDraws d = draw_unit(rng, spec.distribution);
            if (spec.stratified)
                d.pattern = static_cast<unsigned>(t % 8);
            const bool bits[3] = {(d.pattern & 1u) != 0, (d.pattern & 2u) != 0, (d.pattern & 4u) != 0};
            for (std::size_t li = 0; li < levels.size(); ++li) {
                s.level = levels[li];
                const VariationSample v = scale(d, s, params);
                for (std::size_t mi = 0; mi < mechanisms.size(); ++mi) {
                    const std::size_t n = mechanisms[mi] == Mechanism::Dra ? 2 : 3;
                    const auto out = resolve_with_variation(std::span<const bool>(bits, n), mechanisms[mi], params, v);
                    fails[li * mechanisms.size() + mi] += out.failed;
                }
            }
        }
    };

    std::vector<std::uint64_t> total(cells, 0);
    const unsigned workers = static_cast<unsigned>(std::clamp<std::uint64_t>(jobs, 1, spec.trials));
    if (workers == 1) {
        run_range(0, spec.trials, total);
    } else {
        std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(cells, 0));
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = spec.trials * w / workers;
            const std::uint64_t end = spec.trials * (w + 1) / workers;
            threads.emplace_back([&, w, begin, end] { run_range(begin, end, partial[w]); });
        }
        for (auto& t : threads)
            t.join();
        for (const auto& p : partial)
            for (std::size_t i = 0; i < cells; ++i)
                total[i] += p[i];
    }

    SweepResult r;
    r.seed = spec.seed;
    for (std::size_t li = 0; li < levels.size(); ++li)
        for (std::size_t mi = 0; mi < mechanisms.size(); ++mi)
            r.rows.push_back({levels[li], mechanisms[mi], spec.trials, total[li * mechanisms.size() + mi]});
    return r;
}

}  // namespace drim
