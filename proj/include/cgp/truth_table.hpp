#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cgp/bitvector.hpp"

namespace cgp {

/// Error raised while reading a PLA file; `line()` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Completely specified multi-output Boolean function.
///
/// Row j of the table is the input combination in which variable k takes the
/// value (j >> k) & 1. Output k is a packed vector with bit j set iff the
/// function requires 1 on that output for row j.
class TruthTable {
public:
    static constexpr std::size_t kMaxInputs = 20;

    TruthTable(std::size_t num_inputs, std::vector<PackedVector> outputs);

    std::size_t num_inputs() const noexcept { return num_inputs_; }
    std::size_t num_outputs() const noexcept { return outputs_.size(); }
    std::size_t num_rows() const noexcept { return std::size_t{1} << num_inputs_; }

    const PackedVector& output(std::size_t k) const { return outputs_.at(k); }
    const std::vector<PackedVector>& outputs() const noexcept { return outputs_; }
    bool bit(std::size_t output, std::size_t row) const { return outputs_.at(output).test(row); }

    /// Output word for `row`: bit k holds output k.
    std::uint64_t row_value(std::size_t row) const;

    bool operator==(const TruthTable&) const = default;

private:
    std::size_t num_inputs_;
    std::vector<PackedVector> outputs_;
};

/// Builds a table from an integer function of the row index; bit k of the
/// result is output k.
TruthTable tabulate(std::size_t num_inputs, std::size_t num_outputs,
                    const std::function<std::uint64_t(std::uint64_t)>& fn);

/// Odd parity of `n` variables.
TruthTable parity_table(std::size_t n);

/// Binary sum a + b (+ cin). Operand a occupies variables [0, a_bits), b the
/// next b_bits variables, and the carry-in (if any) the last variable. Output
/// k is bit k of the sum; there are max(a_bits, b_bits) + 1 outputs.
TruthTable adder_table(std::size_t a_bits, std::size_t b_bits, bool carry_in);

/// Binary product a * b with the same operand layout as `adder_table`;
/// a_bits + b_bits outputs.
TruthTable multiplier_table(std::size_t a_bits, std::size_t b_bits);

/// PLA text: ".i N", ".o M", then 2^N rows "inputs outputs" with the highest
/// numbered variable (and output) leftmost.
std::string write_pla(const TruthTable& table);
TruthTable read_pla(std::string_view text);

enum class BenchmarkKind { Adder, Multiplier, Parity };

/// Minimal number of standard gates for the built-in benchmarks (ripple-carry
/// adder k+k, array multiplier k x k, and/or/not parity), or nullopt for widths
/// outside the reference table.
std::optional<std::size_t> reference_gate_count(BenchmarkKind kind, std::size_t width);

}  // namespace cgp
