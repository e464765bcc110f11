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

#include "drim/bitrow.hpp"

#include <bit>
#include <cctype>

#include "drim/error.hpp"

namespace drim {

BitRow::BitRow(std::size_t nbits, bool fill_value) : nbits_(nbits), words_((nbits + 63) / 64, 0) {
    fill(fill_value);
}

BitRow BitRow::from_bytes(std::span<const std::uint8_t> bytes, std::size_t nbits) {
    if (bytes.size() * 8 < nbits)
        throw Error("byte buffer holds " + std::to_string(bytes.size() * 8) + " bits, need " +
                    std::to_string(nbits));
    BitRow r(nbits);
    for (std::size_t i = 0; i < nbits; ++i)
        r.set(i, (bytes[i >> 3] >> (i & 7)) & 1u);
    return r;
}

BitRow BitRow::from_hex(std::string_view hex, std::size_t nbits) {
    std::vector<std::uint8_t> nibbles;
    for (char c : hex) {
        if (std::isspace(static_cast<unsigned char>(c)))
            continue;
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        else
            throw Error(std::string("invalid hex digit '") + c + "'");
        nibbles.push_back(static_cast<std::uint8_t>(v));
    }
    if (nibbles.size() % 2 != 0)
        throw Error("hex text has an odd number of digits");
    std::vector<std::uint8_t> bytes;
    bytes.reserve(nibbles.size() / 2);
    for (std::size_t i = 0; i < nibbles.size(); i += 2)
        bytes.push_back(static_cast<std::uint8_t>((nibbles[i] << 4) | nibbles[i + 1]));
    return from_bytes(bytes, nbits);
}

void BitRow::fill(bool v) {
    for (auto& w : words_)
        w = v ? ~std::uint64_t{0} : 0;
    trim();
}

std::size_t BitRow::count() const {
    std::size_t n = 0;
    for (auto w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

void BitRow::trim() {
    const std::size_t tail = nbits_ & 63;
    if (tail != 0 && !words_.empty())
        words_.back() &= (std::uint64_t{1} << tail) - 1;
}

std::vector<std::uint8_t> BitRow::to_bytes() const {
    std::vector<std::uint8_t> out((nbits_ + 7) / 8, 0);
    for (std::size_t i = 0; i < nbits_; ++i)
        if (get(i))
            out[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7));
    return out;
}

std::string BitRow::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    for (auto b : to_bytes()) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 15]);
    }
    return s;
}

std::string BitRow::to_string() const {
    std::string s(nbits_, '0');
    for (std::size_t i = 0; i < nbits_; ++i)
        if (get(i))
            s[i] = '1';
    return s;
}

BitRow BitRow::operator~() const {
    BitRow r = *this;
    for (auto& w : r.words_)
        w = ~w;
    r.trim();
    return r;
}

void BitRow::check_same_size(const BitRow& o) const {
    if (o.nbits_ != nbits_)
        throw Error("bit-row width mismatch: " + std::to_string(nbits_) + " vs " + std::to_string(o.nbits_));
}

BitRow& BitRow::operator&=(const BitRow& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] &= o.words_[i];
    return *this;
}

BitRow& BitRow::operator|=(const BitRow& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] |= o.words_[i];
    return *this;
}

BitRow& BitRow::operator^=(const BitRow& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] ^= o.words_[i];
    return *this;
}

}  // namespace drim
