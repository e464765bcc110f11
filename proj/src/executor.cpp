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

#include "drim/executor.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"

#include "drim/error.hpp"
#include "drim/striping.hpp"

namespace drim {

std::string ExecutionStats::to_json() const {
    nlohmann::ordered_json j;
    j["aaps"] = {{"type1", aaps[0]}, {"type2", aaps[1]}, {"type3", aaps[2]}, {"type4", aaps[3]}};
    j["stripes"] = stripes;
    j["total_aaps"] = total_aaps();
    j["subarrays"] = subarrays;
    j["host_mediated"] = host_mediated;
    return j.dump();
}

namespace {

void run_stripe(const Program& program, const StripeLayout& layout, std::uint64_t stripe, MemoryState& memory,
                const AnalogEngine& analog, const TraceSink& trace) {
    const Geometry& g = memory.geometry();
    for (std::size_t idx = 0; idx < program.instructions.size(); ++idx) {
        const auto& ins = program.instructions[idx];
        const std::uint32_t q = layout.subarray_of(ins.sources.front(), stripe, g);
        SubArrayState& sub = memory.subarray(q);

        std::array<RowKind, 3> src{};
        for (std::size_t i = 0; i < ins.sources.size(); ++i)
            src[i] = layout.row_of(ins.sources[i], stripe, g);
        const SenseMode mode = ins.type == AapType::Type3 ? SenseMode::Dra : SenseMode::Standard;
        try {
            sub.activate(std::span<const RowKind>(src.data(), ins.sources.size()), mode, analog);
            if (trace)
                trace(TraceEvent{idx, stripe, q, ins.type, *sub.sense_bl()});
            for (const auto& d : ins.destinations)
                sub.write_into_active(layout.row_of(d, stripe, g));
            sub.precharge();
        } catch (const ExecutionError&) {
            throw;
        } catch (const Error& e) {
            sub.precharge();
            throw ExecutionError(idx, e.what());
        }
    }
}

}  // namespace

void store_vector(MemoryState& memory, const StripeLayout& layout, const RowAddress& base, const BitRow& bits) {
    const Geometry& g = memory.geometry();
    const std::size_t cols = g.cols_per_row;
    if (bits.size() != layout.stripes * cols)
        throw AddressError("vector of " + std::to_string(bits.size()) + " bits does not match " +
                           std::to_string(layout.stripes) + " stripes of " + std::to_string(cols) + " columns");
    for (std::uint64_t s = 0; s < layout.stripes; ++s) {
        BitRow row(cols);
        for (std::size_t c = 0; c < cols; ++c)
            row.set(c, bits.get(s * cols + c));
        memory.subarray(layout.subarray_of(base, s, g)).write(layout.row_of(base, s, g), row);
    }
}

BitRow load_vector(const MemoryState& memory, const StripeLayout& layout, const RowAddress& base) {
    const Geometry& g = memory.geometry();
    const std::size_t cols = g.cols_per_row;
    BitRow out(layout.stripes * cols);
    for (std::uint64_t s = 0; s < layout.stripes; ++s) {
        const BitRow row = memory.subarray(layout.subarray_of(base, s, g)).read(layout.row_of(base, s, g));
        for (std::size_t c = 0; c < cols; ++c)
            out.set(s * cols + c, row.get(c));
    }
    return out;
}

ExecutionStats execute(const Program& program, MemoryState& memory, const AnalogEngine& analog,
                       const ExecuteOptions& options) {
    const Geometry& g = memory.geometry();
    if (const auto diags = validate(program, g); !diags.empty())
        throw ExecutionError(diags.front().instruction, diags.front().message);

    ExecutionStats stats;
    if (program.instructions.empty())
        return stats;

    const StripeLayout layout(program, g);
    stats.stripes = layout.stripes;
    for (const auto& ins : program.instructions)
        stats.aaps[static_cast<int>(ins.type) - 1] += layout.stripes;

    // Sub-arrays touched by each group of stripes.
    std::vector<std::set<std::uint32_t>> touched(layout.groups);
    std::set<std::uint32_t> all;
    for (std::uint32_t grp = 0; grp < layout.groups; ++grp)
        for (const auto& ins : program.instructions) {
            const std::uint32_t q = ins.sources.front().linear_subarray(g) + grp;
            touched[grp].insert(q);
            all.insert(q);
        }
    stats.subarrays = all.size();
    stats.host_mediated = layout.groups > 1;

    std::size_t sum = 0;
    for (const auto& t : touched)
        sum += t.size();
    const bool disjoint = sum == all.size();

    auto run_group = [&](std::uint32_t grp) {
        const std::uint64_t first = std::uint64_t{grp} * layout.per_subarray;
        const std::uint64_t last = std::min<std::uint64_t>(first + layout.per_subarray, layout.stripes);
        for (std::uint64_t s = first; s < last; ++s)
            run_stripe(program, layout, s, memory, analog, options.trace);
    };

    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, layout.groups));
    if (jobs == 1 || !disjoint || options.trace) {
        for (std::uint32_t grp = 0; grp < layout.groups; ++grp)
            run_group(grp);
        return stats;
    }

    // Groups touch disjoint sub-arrays, so any interleaving gives the same
    // memory image. The lowest failing group's error is reported.
    std::atomic<std::uint32_t> next{0};
    std::mutex err_mutex;
    std::uint32_t err_group = layout.groups;
    std::exception_ptr err;
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < jobs; ++t)
        workers.emplace_back([&] {
            for (std::uint32_t grp = next++; grp < layout.groups; grp = next++) {
                try {
                    run_group(grp);
                } catch (...) {
                    std::lock_guard lock(err_mutex);
                    if (grp < err_group) {
                        err_group = grp;
                        err = std::current_exception();
                    }
                }
            }
        });
    for (auto& w : workers)
        w.join();
    if (err)
        std::rethrow_exception(err);
    return stats;
}

}  // namespace drim
