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

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "drim/analog.hpp"
#include "drim/bitrow.hpp"
#include "drim/isa.hpp"
#include "drim/memory.hpp"

namespace drim {

struct ExecutionStats {
    /// AAPs issued per instruction type (index 0 = type 1), summed over stripes.
    std::array<std::uint64_t, 4> aaps{};
    std::uint64_t stripes = 0;
    /// Distinct sub-arrays touched.
    std::uint64_t subarrays = 0;
    /// True when vectors continue into further sub-arrays; moving data between
    /// them is left to the host.
    bool host_mediated = false;

    std::uint64_t total_aaps() const { return aaps[0] + aaps[1] + aaps[2] + aaps[3]; }
    std::uint64_t count(AapType t) const { return aaps[static_cast<int>(t) - 1]; }

    /// {"aaps": {"type1": n1, ..., "type4": n4}, "stripes": s, ...}
    std::string to_json() const;
};

struct TraceEvent {
    std::size_t instruction;
    std::uint64_t stripe;
    std::uint32_t subarray;
    AapType type;
    /// Bit-line values latched by the first ACTIVATE.
    BitRow bl;
};

using TraceSink = std::function<void(const TraceEvent&)>;

struct ExecuteOptions {
    /// Worker threads for independent sub-array groups. Results do not depend
    /// on this value.
    unsigned jobs = 1;
    /// Optional observer; forces sequential execution so events arrive in
    /// program order.
    TraceSink trace;
};

/// Runs every stripe of `program`: for each stripe, every instruction issues
/// ACTIVATE(sources), ACTIVATE(each destination), PRECHARGE.
/// Throws ExecutionError (with the instruction index) if the program does not
/// validate or a command is rejected.
ExecutionStats execute(const Program& program, MemoryState& memory, const AnalogEngine& analog,
                       const ExecuteOptions& options = {});

}  // namespace drim
