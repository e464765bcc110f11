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

#include "drim/isa.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "drim/error.hpp"
#include "drim/striping.hpp"

namespace drim {

std::size_t source_count(AapType t) {
    switch (t) {
    case AapType::Type1:
    case AapType::Type2:
        return 1;
    case AapType::Type3:
        return 2;
    case AapType::Type4:
        return 3;
    }
    return 0;
}

std::size_t destination_count(AapType t) {
    return t == AapType::Type2 ? 2 : 1;
}

namespace {

RowAddress local(RowKind r) {
    return RowAddress{0, 0, r};
}

}  // namespace

AapInstruction AapInstruction::type1(RowKind src, RowKind des, std::uint64_t size) {
    return {AapType::Type1, {local(src)}, {local(des)}, size};
}

AapInstruction AapInstruction::type2(RowKind src, RowKind des1, RowKind des2, std::uint64_t size) {
    return {AapType::Type2, {local(src)}, {local(des1), local(des2)}, size};
}

AapInstruction AapInstruction::type3(RowKind src1, RowKind src2, RowKind des, std::uint64_t size) {
    return {AapType::Type3, {local(src1), local(src2)}, {local(des)}, size};
}

AapInstruction AapInstruction::type4(RowKind src1, RowKind src2, RowKind src3, RowKind des, std::uint64_t size) {
    return {AapType::Type4, {local(src1), local(src2), local(src3)}, {local(des)}, size};
}

std::uint64_t Program::stripes(const Geometry& g) const {
    if (instructions.empty() || g.cols_per_row == 0)
        return 0;
    return instructions.front().size / g.cols_per_row;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

std::vector<Token> split_tokens(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i >= line.size())
            break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

std::optional<std::uint64_t> parse_number(std::string_view s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

std::uint32_t parse_index(std::string_view s, std::size_t line, std::size_t column, std::string_view what) {
    auto v = parse_number(s);
    if (!v || *v > 0xFFFFFFFFull)
        throw ParseError(line, column, "malformed " + std::string(what) + " index '" + std::string(s) + "'");
    return static_cast<std::uint32_t>(*v);
}

RowAddress parse_row(const Token& tok, const Geometry& g, std::size_t line) {
    std::string_view s = tok.text;
    std::size_t col = tok.column;
    RowAddress addr;
    const std::string bad = "malformed row name '" + std::string(tok.text) + "'";

    if (!s.empty() && s[0] == 'b') {
        const auto dot1 = s.find('.');
        if (dot1 == std::string_view::npos)
            throw ParseError(line, col, bad);
        addr.bank = parse_index(s.substr(1, dot1 - 1), line, col, "bank");
        std::string_view rest = s.substr(dot1 + 1);
        if (rest.empty() || rest[0] != 's')
            throw ParseError(line, col + dot1 + 1, bad + " (expected s<sub> after the bank)");
        const auto dot2 = rest.find('.');
        if (dot2 == std::string_view::npos)
            throw ParseError(line, col + dot1 + 1, bad);
        addr.subarray = parse_index(rest.substr(1, dot2 - 1), line, col + dot1 + 1, "sub-array");
        col += dot1 + 1 + dot2 + 1;
        s = rest.substr(dot2 + 1);
    }

    if (s == "ctrl0") {
        addr.row = RowKind::data(g.ctrl0_row());
    } else if (s == "ctrl1") {
        addr.row = RowKind::data(g.ctrl1_row());
    } else if (s.starts_with("dcc")) {
        const auto n = parse_index(s.substr(3), line, col, "DCC wordline");
        if (n == 0)
            throw ParseError(line, col, "DCC wordlines are numbered from dcc1");
        addr.row = RowKind::dcc_wordline(n);
    } else if (s.starts_with("d")) {
        addr.row = RowKind::data(parse_index(s.substr(1), line, col, "data row"));
    } else if (s.starts_with("x")) {
        const auto n = parse_index(s.substr(1), line, col, "compute row");
        if (n == 0)
            throw ParseError(line, col, "compute rows are numbered from x1");
        addr.row = RowKind::x(n);
    } else {
        throw ParseError(line, col, bad);
    }
    return addr;
}

std::optional<AapType> mnemonic(std::string_view s) {
    std::string up(s);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    if (up == "AAP1")
        return AapType::Type1;
    if (up == "AAP2")
        return AapType::Type2;
    if (up == "AAP3")
        return AapType::Type3;
    if (up == "AAP4")
        return AapType::Type4;
    return std::nullopt;
}

}  // namespace

RowAddress parse_row_address(std::string_view text, const Geometry& geometry) {
    return parse_row(Token{text, 1}, geometry, 1);
}

Program parse(std::string_view text, const Geometry& geometry) {
    Program program;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        const auto tokens = split_tokens(line);
        if (tokens.empty())
            continue;

        if (tokens[0].text == ".stripes_per_subarray") {
            if (tokens.size() != 2)
                throw ParseError(line_no, tokens[0].column, ".stripes_per_subarray takes one count");
            const auto v = parse_number(tokens[1].text);
            if (!v || *v == 0 || *v > 0xFFFFFFFFull)
                throw ParseError(line_no, tokens[1].column, "stripe count must be a positive integer");
            if (program.stripes_per_subarray)
                throw ParseError(line_no, tokens[0].column, "duplicate .stripes_per_subarray directive");
            program.stripes_per_subarray = static_cast<std::uint32_t>(*v);
            continue;
        }

        const auto type = mnemonic(tokens[0].text);
        if (!type)
            throw ParseError(line_no, tokens[0].column, "unknown mnemonic '" + std::string(tokens[0].text) + "'");

        const Token& last = tokens.back();
        if (!last.text.starts_with("size="))
            throw ParseError(line_no, last.column, "missing size=<bits> operand");
        const auto size = parse_number(last.text.substr(5));
        if (!size)
            throw ParseError(line_no, last.column + 5, "malformed size '" + std::string(last.text.substr(5)) + "'");
        if (*size == 0 || *size % geometry.cols_per_row != 0)
            throw ParseError(line_no, last.column + 5,
                             "size not multiple of row width (" + std::to_string(*size) + " bits, row is " +
                                 std::to_string(geometry.cols_per_row) + ")");

        const std::size_t want = source_count(*type) + destination_count(*type);
        const std::size_t got = tokens.size() - 2;
        if (got != want)
            throw ParseError(line_no, tokens[0].column,
                             std::string(tokens[0].text) + " takes " + std::to_string(want) + " rows, got " +
                                 std::to_string(got));

        AapInstruction ins;
        ins.type = *type;
        ins.size = *size;
        ins.line = line_no;
        for (std::size_t i = 0; i < got; ++i) {
            const RowAddress r = parse_row(tokens[1 + i], geometry, line_no);
            (i < source_count(*type) ? ins.sources : ins.destinations).push_back(r);
        }
        program.instructions.push_back(std::move(ins));
    }
    return program;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string render_row(const RowAddress& r, const Geometry& g) {
    std::string s;
    if (r.bank != 0 || r.subarray != 0)
        s = "b" + std::to_string(r.bank) + ".s" + std::to_string(r.subarray) + ".";
    return s + to_string(r.row, g);
}

}  // namespace

std::string render(const AapInstruction& ins, const Geometry& g) {
    std::ostringstream os;
    os << "AAP" << static_cast<int>(ins.type);
    for (const auto& r : ins.sources)
        os << ' ' << render_row(r, g);
    for (const auto& r : ins.destinations)
        os << ' ' << render_row(r, g);
    os << " size=" << ins.size;
    return os.str();
}

std::string render(const Program& program, const Geometry& g) {
    std::string out;
    if (program.stripes_per_subarray)
        out += ".stripes_per_subarray " + std::to_string(*program.stripes_per_subarray) + "\n";
    for (const auto& ins : program.instructions)
        out += render(ins, g) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool same_dcc_cell(const RowKind& a, const RowKind& b) {
    return a.is_dcc() && b.is_dcc() && a.index == b.index && a.kind != b.kind;
}

bool is_constant(const RowKind& r, const Geometry& g) {
    return r.is_data() && (r.index == g.ctrl0_row() || r.index == g.ctrl1_row());
}

void check_group(const std::vector<RowAddress>& rows, std::string_view role, const Geometry& g, std::size_t idx,
                 std::vector<Diagnostic>& out) {
    bool data_reported = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const RowKind& r = rows[i].row;
        if (!r.is_compute() && !data_reported) {
            out.push_back({idx, "multi-activation of data rows: " + std::string(role) + " " + to_string(r, g) +
                                    " is not behind the modified row decoder"});
            data_reported = true;
        }
        if (r.kind == RowKind::Kind::DccComp && role == "source")
            out.push_back({idx, "complement wordline " + to_string(r, g) + " cannot take part in multi-row sensing"});
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            if (rows[j].row == r)
                out.push_back({idx, "duplicate " + std::string(role) + " row " + to_string(r, g)});
        }
    }
}

}  // namespace

std::vector<Diagnostic> validate(const Program& program, const Geometry& g) {
    std::vector<Diagnostic> out;
    if (program.instructions.empty())
        return out;
    const std::uint64_t program_size = program.instructions.front().size;

    bool rows_ok = true;
    for (std::size_t idx = 0; idx < program.instructions.size(); ++idx) {
        const auto& ins = program.instructions[idx];

        if (ins.sources.size() != source_count(ins.type) || ins.destinations.size() != destination_count(ins.type)) {
            out.push_back({idx, "AAP" + std::to_string(static_cast<int>(ins.type)) + " arity mismatch"});
            rows_ok = false;
            continue;
        }
        if (ins.size == 0 || ins.size % g.cols_per_row != 0)
            out.push_back({idx, "size not multiple of row width (" + std::to_string(ins.size) + " bits, row is " +
                                    std::to_string(g.cols_per_row) + ")"});
        else if (ins.size != program_size)
            out.push_back({idx, "size " + std::to_string(ins.size) + " disagrees with program vector size " +
                                    std::to_string(program_size)});

        bool in_range = true;
        auto all_rows = ins.sources;
        all_rows.insert(all_rows.end(), ins.destinations.begin(), ins.destinations.end());
        for (const auto& r : all_rows) {
            if (!r.valid_in(g)) {
                out.push_back({idx, "row " + render_row(r, g) + " is outside the geometry"});
                in_range = false;
            }
        }
        if (!in_range) {
            rows_ok = false;
            continue;
        }
        for (const auto& r : all_rows)
            if (r.bank != all_rows.front().bank || r.subarray != all_rows.front().subarray) {
                out.push_back({idx, "rows of one instruction must share a sub-array"});
                rows_ok = false;
                break;
            }

        if (ins.sources.size() >= 2)
            check_group(ins.sources, "source", g, idx, out);
        if (ins.destinations.size() >= 2)
            check_group(ins.destinations, "destination", g, idx, out);

        bool dcc_reported = false;
        for (std::size_t i = 0; i < all_rows.size() && !dcc_reported; ++i)
            for (std::size_t j = i + 1; j < all_rows.size(); ++j)
                if (same_dcc_cell(all_rows[i].row, all_rows[j].row)) {
                    out.push_back({idx, "DCC wordline conflict: " + to_string(all_rows[i].row, g) + " and " +
                                            to_string(all_rows[j].row, g) + " share a capacitor"});
                    dcc_reported = true;
                    break;
                }

        for (const auto& d : ins.destinations)
            if (is_constant(d.row, g))
                out.push_back({idx, "write to constant row " + to_string(d.row, g)});
    }

    if (!rows_ok || program_size == 0 || program_size % g.cols_per_row != 0)
        return out;

    // Stripe layout checks only make sense once every row is addressable.
    const StripeLayout layout(program, g);
    if (program.stripes_per_subarray && *program.stripes_per_subarray > layout.stripes)
        out.push_back({0, "stripes_per_subarray " + std::to_string(*program.stripes_per_subarray) +
                              " exceeds the " + std::to_string(layout.stripes) + " stripes of the vectors"});

    struct Region {
        std::uint32_t subarray;
        std::uint32_t row;
        std::size_t first_use;
    };
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> seen;
    std::vector<Region> regions;
    for (std::size_t idx = 0; idx < program.instructions.size(); ++idx) {
        const auto& ins = program.instructions[idx];
        auto check = [&](const RowAddress& r) {
            const std::uint32_t q = r.linear_subarray(g);
            if (std::uint64_t{q} + layout.groups - 1 >= g.subarray_count())
                out.push_back({idx, "vector at " + render_row(r, g) + " needs " + std::to_string(layout.groups) +
                                        " sub-arrays starting at linear index " + std::to_string(q) +
                                        ", only " + std::to_string(g.subarray_count()) + " exist"});
            if (!r.row.is_data() || is_constant(r.row, g))
                return;
            if (std::uint64_t{r.row.index} + layout.per_subarray > g.user_data_rows())
                out.push_back({idx, "vector at " + render_row(r, g) + " spans " +
                                        std::to_string(layout.per_subarray) + " rows and runs past the last data row"});
            if (seen.emplace(std::pair{q, r.row.index}, idx).second)
                regions.push_back({q, r.row.index, idx});
        };
        for (const auto& r : ins.sources)
            check(r);
        for (const auto& r : ins.destinations)
            check(r);
    }

    if (layout.per_subarray > 1 || layout.groups > 1) {
        const std::int64_t groups = layout.groups;
        const std::int64_t span = layout.per_subarray;
        for (std::size_t i = 0; i < regions.size(); ++i)
            for (std::size_t j = i + 1; j < regions.size(); ++j) {
                const auto& a = regions[i];
                const auto& b = regions[j];
                const std::int64_t dq = std::int64_t{b.subarray} - std::int64_t{a.subarray};
                const std::int64_t dr = std::int64_t{b.row} - std::int64_t{a.row};
                if (dq > -groups && dq < groups && dr > -span && dr < span)
                    out.push_back({std::max(a.first_use, b.first_use),
                                   "vector regions at d" + std::to_string(a.row) + " and d" + std::to_string(b.row) +
                                       " overlap when striped over " + std::to_string(span) + " rows"});
            }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.instruction < b.instruction; });
    return out;
}

}  // namespace drim
