#pragma once

#include <span>
#include <vector>

#include "cgp/bitvector.hpp"
#include "cgp/genome.hpp"
#include "cgp/truth_table.hpp"

namespace cgp {

/// Writes the canonical pattern of variable k into row k for k < num_inputs:
/// bit j of row k is (j >> k) & 1.
void fill_input_patterns(Valuation& values, std::size_t num_inputs);

/// Valuation holding only the program-input rows.
Valuation input_patterns(std::size_t num_inputs);

/// out = f(a, b) word by word; the last word is masked with `tail`.
void apply_gate(NodeFunction f, std::span<const Word> a, std::span<const Word> b, std::span<Word> out,
                Word tail) noexcept;

/// Evaluates the gates in `order` into `values` (one row per node id). Every
/// source must already be present, either as a program input or earlier in
/// `order`; otherwise std::logic_error is thrown.
void evaluate(const CircuitGraph& graph, std::span<const NodeId> order, Valuation& values);

/// Full simulation of every gate of the graph.
Valuation simulate(const CircuitGraph& graph);

std::vector<PackedVector> output_vectors(const CircuitGraph& graph, const Valuation& values);

/// Re-evaluates `downstream` (gates in topological order) with the value on
/// edge `e` replaced by the constant `forced`, reading every other source from
/// `upstream`. Returns the vector of each program output. A gate sink of `e`
/// must belong to `downstream`.
std::vector<PackedVector> evaluate_forced(const CircuitGraph& graph, std::span<const NodeId> downstream, EdgeRef e,
                                          bool forced, const Valuation& upstream);

/// Total count of output bits that differ from the specification.
std::size_t hamming_distance(std::span<const PackedVector> outputs, const TruthTable& table);

/// Hamming distance between the circuit encoded by `genotype` and `table`.
/// Only active nodes are simulated.
std::size_t fitness(const CgpParams& params, const Genotype& genotype, const TruthTable& table);

}  // namespace cgp
