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
/// Vector files and memory images.
///
/// Raw vector files are bit-packed: bit i of the vector is bit i % 8 of byte
/// i / 8. An optional sidecar `<file>.json` holds {"bits": N, "format": ...}
/// and fixes the length when it is not a whole number of bytes. Hex files
/// hold two digits per byte in the same byte order; whitespace and `#`
/// comments are ignored.
///
/// A memory image is the magic "DRIMIMG1", seven little-endian uint32
/// geometry fields (banks, subarrays_per_bank, rows_per_subarray,
/// cols_per_row, data_rows, x_rows, dcc_cells), then every storage row of
/// every sub-array in order, each bit-packed to ceil(cols / 8) bytes.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "drim/bitrow.hpp"
#include "drim/memory.hpp"

namespace drim {

enum class VectorFormat { Raw, Hex };

/// Hex for *.hex and *.txt, raw otherwise.
VectorFormat format_for_path(const std::string& path);

/// Reads a vector. The length comes from the sidecar if present, else from
/// `bits`, else 8 * file bytes. Throws ConfigError on I/O or size problems.
BitRow read_vector(const std::string& path, std::optional<std::size_t> bits = std::nullopt,
                   std::optional<VectorFormat> format = std::nullopt);

/// Writes `bits` and, when `sidecar` is set, `<path>.json`.
void write_vector(const std::string& path, const BitRow& bits, std::optional<VectorFormat> format = std::nullopt,
                  bool sidecar = false);

std::string serialize_image(const MemoryState& memory);
MemoryState deserialize_image(const std::string& bytes);
void write_image(const std::string& path, const MemoryState& memory);
MemoryState read_image(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace drim
