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

#include "drim/vecio.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "drim/error.hpp"

namespace drim {

namespace {

constexpr char kMagic[] = "DRIMIMG1";

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string strip_comments(const std::string& text) {
    std::string out;
    bool comment = false;
    for (char c : text) {
        if (c == '#')
            comment = true;
        else if (c == '\n')
            comment = false;
        if (!comment)
            out.push_back(c);
    }
    return out;
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= std::uint32_t{static_cast<std::uint8_t>(in[at + i])} << (8 * i);
    return v;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    out << contents;
    if (!out)
        throw ConfigError("write to '" + path + "' failed");
}

VectorFormat format_for_path(const std::string& path) {
    return ends_with(path, ".hex") || ends_with(path, ".txt") ? VectorFormat::Hex : VectorFormat::Raw;
}

BitRow read_vector(const std::string& path, std::optional<std::size_t> bits, std::optional<VectorFormat> format) {
    VectorFormat fmt = format.value_or(format_for_path(path));
    if (std::ifstream sidecar(path + ".json"); sidecar) {
        std::ostringstream ss;
        ss << sidecar.rdbuf();
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(ss.str());
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(path + ".json: " + e.what());
        }
        if (!j.is_object())
            throw ConfigError(path + ".json: expected an object");
        for (const auto& [key, _] : j.items())
            if (key != "bits" && key != "format")
                throw ConfigError(path + ".json: unknown key '" + key + "'");
        if (j.contains("bits")) {
            if (!j["bits"].is_number_unsigned())
                throw ConfigError(path + ".json: bits must be a non-negative integer");
            const auto n = j["bits"].get<std::size_t>();
            if (bits && *bits != n)
                throw ConfigError(path + ": sidecar declares " + std::to_string(n) + " bits, expected " +
                                  std::to_string(*bits));
            bits = n;
        }
        if (j.contains("format") && !format) {
            const std::string f = j["format"].is_string() ? j["format"].get<std::string>() : "";
            if (f == "raw")
                fmt = VectorFormat::Raw;
            else if (f == "hex")
                fmt = VectorFormat::Hex;
            else
                throw ConfigError(path + ".json: format must be \"raw\" or \"hex\"");
        }
    }

    const std::string data = read_file(path);
    std::vector<std::uint8_t> bytes;
    if (fmt == VectorFormat::Raw) {
        bytes.assign(data.begin(), data.end());
    } else {
        try {
            const std::string hex = strip_comments(data);
            std::size_t digits = 0;
            for (char c : hex)
                digits += !std::isspace(static_cast<unsigned char>(c));
            bytes = BitRow::from_hex(hex, digits * 4).to_bytes();
        } catch (const Error& e) {
            throw ConfigError(path + ": " + e.what());
        }
    }
    const std::size_t n = bits.value_or(bytes.size() * 8);
    if (bytes.size() != (n + 7) / 8)
        throw ConfigError(path + ": holds " + std::to_string(bytes.size()) + " bytes, expected " +
                          std::to_string((n + 7) / 8) + " for " + std::to_string(n) + " bits");
    return BitRow::from_bytes(bytes, n);
}

void write_vector(const std::string& path, const BitRow& bits, std::optional<VectorFormat> format, bool sidecar) {
    const VectorFormat fmt = format.value_or(format_for_path(path));
    if (fmt == VectorFormat::Raw) {
        const auto bytes = bits.to_bytes();
        write_file(path, std::string(bytes.begin(), bytes.end()));
    } else {
        std::string hex = bits.to_hex();
        std::string out;
        // 32 bytes per line.
        for (std::size_t i = 0; i < hex.size(); i += 64)
            out += hex.substr(i, 64) + "\n";
        write_file(path, out);
    }
    if (sidecar) {
        nlohmann::ordered_json j;
        j["bits"] = bits.size();
        j["format"] = fmt == VectorFormat::Raw ? "raw" : "hex";
        write_file(path + ".json", j.dump() + "\n");
    }
}

std::string serialize_image(const MemoryState& memory) {
    const Geometry& g = memory.geometry();
    std::string out(kMagic, 8);
    for (std::uint32_t v : {g.banks, g.subarrays_per_bank, g.rows_per_subarray, g.cols_per_row, g.data_rows,
                            g.x_rows, g.dcc_cells})
        put_u32(out, v);
    for (std::uint32_t q = 0; q < g.subarray_count(); ++q)
        for (const auto& row : memory.subarray(q).storage()) {
            const auto bytes = row.to_bytes();
            out.append(bytes.begin(), bytes.end());
        }
    return out;
}

MemoryState deserialize_image(const std::string& bytes) {
    if (bytes.size() < 8 + 28 || bytes.compare(0, 8, kMagic) != 0)
        throw ConfigError("not a memory image (bad magic or truncated header)");
    Geometry g;
    g.banks = get_u32(bytes, 8);
    g.subarrays_per_bank = get_u32(bytes, 12);
    g.rows_per_subarray = get_u32(bytes, 16);
    g.cols_per_row = get_u32(bytes, 20);
    g.data_rows = get_u32(bytes, 24);
    g.x_rows = get_u32(bytes, 28);
    g.dcc_cells = get_u32(bytes, 32);
    g.validate();
    const std::size_t row_bytes = (g.cols_per_row + 7) / 8;
    const std::size_t expected = 36 + std::size_t{g.subarray_count()} * g.storage_rows() * row_bytes;
    if (bytes.size() != expected)
        throw ConfigError("memory image is " + std::to_string(bytes.size()) + " bytes, expected " +
                          std::to_string(expected));
    MemoryState m(g);
    std::size_t at = 36;
    for (std::uint32_t q = 0; q < g.subarray_count(); ++q)
        for (auto& row : m.subarray(q).storage()) {
            const auto* p = reinterpret_cast<const std::uint8_t*>(bytes.data() + at);
            row = BitRow::from_bytes(std::span<const std::uint8_t>(p, row_bytes), g.cols_per_row);
            at += row_bytes;
        }
    return m;
}

void write_image(const std::string& path, const MemoryState& memory) {
    write_file(path, serialize_image(memory));
}

MemoryState read_image(const std::string& path) {
    return deserialize_image(read_file(path));
}

}  // namespace drim
