#include "cgp/truth_table.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <sstream>

namespace cgp {

TruthTable::TruthTable(std::size_t num_inputs, std::vector<PackedVector> outputs)
    : num_inputs_(num_inputs), outputs_(std::move(outputs))
{
    if (num_inputs_ < 1 || num_inputs_ > kMaxInputs)
        throw std::out_of_range("truth table needs 1.." + std::to_string(kMaxInputs) + " inputs, got " +
                                std::to_string(num_inputs_));
    if (outputs_.empty()) throw std::invalid_argument("truth table needs at least one output");
    for (std::size_t k = 0; k < outputs_.size(); ++k) {
        if (outputs_[k].size() != num_rows())
            throw std::invalid_argument("output " + std::to_string(k) + " has " +
                                        std::to_string(outputs_[k].size()) + " bits, expected " +
                                        std::to_string(num_rows()));
        outputs_[k].canonicalize();
    }
}

std::uint64_t TruthTable::row_value(std::size_t row) const
{
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < outputs_.size() && k < 64; ++k)
        if (outputs_[k].test(row)) v |= std::uint64_t{1} << k;
    return v;
}

TruthTable tabulate(std::size_t num_inputs, std::size_t num_outputs,
                    const std::function<std::uint64_t(std::uint64_t)>& fn)
{
    if (num_inputs < 1 || num_inputs > TruthTable::kMaxInputs)
        throw std::out_of_range("input count " + std::to_string(num_inputs) + " out of range");
    if (num_outputs < 1 || num_outputs > 64) throw std::out_of_range("output count out of range");
    const std::size_t rows = std::size_t{1} << num_inputs;
    std::vector<PackedVector> outs(num_outputs, PackedVector(rows));
    for (std::size_t j = 0; j < rows; ++j) {
        const std::uint64_t y = fn(j);
        for (std::size_t k = 0; k < num_outputs; ++k)
            if ((y >> k) & 1U) outs[k].set(j);
    }
    return TruthTable(num_inputs, std::move(outs));
}

TruthTable parity_table(std::size_t n)
{
    if (n < 1 || n > TruthTable::kMaxInputs) throw std::out_of_range("parity width must be 1..20");
    return tabulate(n, 1, [](std::uint64_t j) { return static_cast<std::uint64_t>(std::popcount(j) & 1); });
}

TruthTable adder_table(std::size_t a_bits, std::size_t b_bits, bool carry_in)
{
    const std::size_t ni = a_bits + b_bits + (carry_in ? 1 : 0);
    if (a_bits < 1 || b_bits < 1 || ni > TruthTable::kMaxInputs)
        throw std::out_of_range("adder operand widths out of range");
    const std::uint64_t amask = (std::uint64_t{1} << a_bits) - 1;
    const std::uint64_t bmask = (std::uint64_t{1} << b_bits) - 1;
    return tabulate(ni, std::max(a_bits, b_bits) + 1, [=](std::uint64_t j) {
        const std::uint64_t a = j & amask;
        const std::uint64_t b = (j >> a_bits) & bmask;
        const std::uint64_t c = carry_in ? (j >> (a_bits + b_bits)) & 1U : 0;
        return a + b + c;
    });
}

TruthTable multiplier_table(std::size_t a_bits, std::size_t b_bits)
{
    if (a_bits < 1 || b_bits < 1 || a_bits + b_bits > TruthTable::kMaxInputs)
        throw std::out_of_range("multiplier operand widths out of range");
    const std::uint64_t amask = (std::uint64_t{1} << a_bits) - 1;
    return tabulate(a_bits + b_bits, a_bits + b_bits,
                    [=](std::uint64_t j) { return (j & amask) * (j >> a_bits); });
}

std::string write_pla(const TruthTable& table)
{
    const std::size_t ni = table.num_inputs();
    const std::size_t no = table.num_outputs();
    std::string out = ".i " + std::to_string(ni) + "\n.o " + std::to_string(no) + "\n";
    out.reserve(out.size() + table.num_rows() * (ni + no + 2));
    for (std::size_t j = 0; j < table.num_rows(); ++j) {
        for (std::size_t k = ni; k-- > 0;) out.push_back(((j >> k) & 1U) ? '1' : '0');
        out.push_back(' ');
        for (std::size_t k = no; k-- > 0;) out.push_back(table.bit(k, j) ? '1' : '0');
        out.push_back('\n');
    }
    return out;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> parts;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) parts.push_back(line.substr(start, i - start));
    }
    return parts;
}

std::size_t parse_count(std::string_view s, std::size_t line)
{
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError(line, "expected a count, got '" + std::string(s) + "'");
    return v;
}

}  // namespace

TruthTable read_pla(std::string_view text)
{
    std::optional<std::size_t> ni;
    std::optional<std::size_t> no;
    std::vector<PackedVector> outs;
    std::vector<unsigned char> seen;
    std::size_t rows_read = 0;
    std::size_t line_no = 0;
    bool ended = false;

    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto parts = split_ws(line);
        if (parts.empty()) continue;
        if (ended) throw ParseError(line_no, "content after .e");

        if (parts[0][0] == '.') {
            if (parts[0] == ".i" || parts[0] == ".o") {
                if (parts.size() != 2) throw ParseError(line_no, std::string(parts[0]) + " takes one count");
                if (rows_read > 0) throw ParseError(line_no, "header after rows");
                const std::size_t v = parse_count(parts[1], line_no);
                auto& slot = parts[0] == ".i" ? ni : no;
                if (slot) throw ParseError(line_no, "duplicate " + std::string(parts[0]));
                slot = v;
                if (parts[0] == ".i" && (v < 1 || v > TruthTable::kMaxInputs))
                    throw ParseError(line_no, "input count must be 1..20");
                if (parts[0] == ".o" && v < 1) throw ParseError(line_no, "output count must be positive");
            } else if (parts[0] == ".p" || parts[0] == ".type") {
                // informational
            } else if (parts[0] == ".e" || parts[0] == ".end") {
                ended = true;
            } else {
                throw ParseError(line_no, "unknown directive " + std::string(parts[0]));
            }
            continue;
        }

        if (!ni || !no) throw ParseError(line_no, "row before .i/.o header");
        if (outs.empty()) {
            outs.assign(*no, PackedVector(std::size_t{1} << *ni));
            seen.assign(std::size_t{1} << *ni, 0);
        }
        if (parts.size() != 2) throw ParseError(line_no, "row must be 'inputs outputs'");
        if (parts[0].size() != *ni) throw ParseError(line_no, "input width mismatch");
        if (parts[1].size() != *no) throw ParseError(line_no, "output width mismatch");

        std::size_t j = 0;
        for (char ch : parts[0]) {
            if (ch != '0' && ch != '1') throw ParseError(line_no, std::string("illegal input character '") + ch + "'");
            j = (j << 1) | static_cast<std::size_t>(ch == '1');
        }
        if (seen[j]) throw ParseError(line_no, "duplicate row " + std::string(parts[0]));
        seen[j] = 1;
        for (std::size_t c = 0; c < *no; ++c) {
            const char ch = parts[1][c];
            if (ch != '0' && ch != '1') throw ParseError(line_no, std::string("illegal output character '") + ch + "'");
            if (ch == '1') outs[*no - 1 - c].set(j);
        }
        ++rows_read;
    }

    if (!ni || !no) throw ParseError(line_no, "missing .i/.o header");
    const std::size_t expected = std::size_t{1} << *ni;
    if (rows_read != expected)
        throw ParseError(line_no, "expected " + std::to_string(expected) + " rows, found " + std::to_string(rows_read));
    return TruthTable(*ni, std::move(outs));
}

std::optional<std::size_t> reference_gate_count(BenchmarkKind kind, std::size_t width)
{
    switch (kind) {
    case BenchmarkKind::Adder:
        if (width >= 2 && width <= 10) return 5 * width - 3;
        break;
    case BenchmarkKind::Multiplier: {
        constexpr std::array<std::size_t, 4> n{11, 33, 67, 113};
        if (width >= 2 && width <= 5) return n[width - 2];
        break;
    }
    case BenchmarkKind::Parity:
        if (width >= 4 && width <= 10) return 3 * width - 3;
        break;
    }
    return std::nullopt;
}

}  // namespace cgp
