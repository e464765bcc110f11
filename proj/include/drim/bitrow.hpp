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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace drim {

/// Fixed-width bit vector holding one DRAM row (one bit per column).
///
/// Bits are stored LSB-first in 64-bit words; bits beyond size() in the last
/// word are always zero so word-level equality is exact.
class BitRow {
  public:
    BitRow() = default;
    explicit BitRow(std::size_t nbits, bool fill = false);

    static BitRow from_bytes(std::span<const std::uint8_t> bytes, std::size_t nbits);
    /// Parses hex as written by to_hex(): byte 0 (columns 0..7) first, two
    /// digits per byte. Whitespace is ignored.
    static BitRow from_hex(std::string_view hex, std::size_t nbits);

    std::size_t size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= m;
        else
            words_[i >> 6] &= ~m;
    }

    void fill(bool v);
    std::size_t count() const;

    std::span<std::uint64_t> words() { return words_; }
    std::span<const std::uint64_t> words() const { return words_; }

    /// Call after writing words() directly.
    void trim();

    std::vector<std::uint8_t> to_bytes() const;
    std::string to_hex() const;
    /// '0'/'1' characters, column 0 first.
    std::string to_string() const;

    BitRow operator~() const;
    BitRow& operator&=(const BitRow& o);
    BitRow& operator|=(const BitRow& o);
    BitRow& operator^=(const BitRow& o);

    friend BitRow operator&(BitRow a, const BitRow& b) { return a &= b; }
    friend BitRow operator|(BitRow a, const BitRow& b) { return a |= b; }
    friend BitRow operator^(BitRow a, const BitRow& b) { return a ^= b; }
    friend bool operator==(const BitRow& a, const BitRow& b) = default;

  private:
    void check_same_size(const BitRow& o) const;

    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace drim
