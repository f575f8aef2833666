#include "cgp/simulator.hpp"

#include <array>
#include <bit>
#include <stdexcept>

namespace cgp {

namespace {

constexpr std::array<Word, 6> kLowPatterns{
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

std::size_t check_width(std::size_t num_inputs)
{
    if (num_inputs < 1 || num_inputs > TruthTable::kMaxInputs)
        throw std::out_of_range("input count must be 1..20, got " + std::to_string(num_inputs));
    return std::size_t{1} << num_inputs;
}

}  // namespace

void fill_input_patterns(Valuation& values, std::size_t num_inputs)
{
    const std::size_t bits = check_width(num_inputs);
    if (values.bits() != bits || values.rows() < num_inputs)
        throw std::logic_error("valuation shape does not fit the input patterns");
    const Word tail = tail_mask(bits);
    for (std::size_t k = 0; k < num_inputs; ++k) {
        auto row = values.row(k);
        for (std::size_t w = 0; w < row.size(); ++w) {
            if (k < kLowPatterns.size())
                row[w] = kLowPatterns[k];
            else
                row[w] = ((w >> (k - kLowPatterns.size())) & 1U) ? ~Word{0} : Word{0};
        }
        row.back() &= tail;
        values.mark_ready(k);
    }
}

Valuation input_patterns(std::size_t num_inputs)
{
    Valuation v(num_inputs, check_width(num_inputs));
    fill_input_patterns(v, num_inputs);
    return v;
}

void apply_gate(NodeFunction f, std::span<const Word> a, std::span<const Word> b, std::span<Word> out,
                Word tail) noexcept
{
    const std::size_t n = out.size();
    switch (f) {
    case NodeFunction::Not:
        for (std::size_t i = 0; i < n; ++i) out[i] = ~a[i];
        break;
    case NodeFunction::And:
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] & b[i];
        break;
    case NodeFunction::Or:
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] | b[i];
        break;
    case NodeFunction::Xor:
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] ^ b[i];
        break;
    case NodeFunction::Nand:
        for (std::size_t i = 0; i < n; ++i) out[i] = ~(a[i] & b[i]);
        break;
    case NodeFunction::Nor:
        for (std::size_t i = 0; i < n; ++i) out[i] = ~(a[i] | b[i]);
        break;
    case NodeFunction::Xnor:
        for (std::size_t i = 0; i < n; ++i) out[i] = ~(a[i] ^ b[i]);
        break;
    }
    out[n - 1] &= tail;
}

void evaluate(const CircuitGraph& graph, std::span<const NodeId> order, Valuation& values)
{
    const Word tail = tail_mask(values.bits());
    for (NodeId id : order) {
        const Gate& gate = graph.gate(id);
        const NodeId a = gate.inputs[0];
        const NodeId b = gate.inputs[1];
        if (!values.ready(a) || !values.ready(b))
            throw std::logic_error("gate " + std::to_string(id) + " depends on an unevaluated node");
        apply_gate(gate.function, values.row(a), values.row(b), values.row(id), tail);
        values.mark_ready(id);
    }
}

Valuation simulate(const CircuitGraph& graph)
{
    Valuation values(graph.node_count(), check_width(graph.num_inputs));
    fill_input_patterns(values, graph.num_inputs);
    const auto order = topological_order(graph);
    evaluate(graph, order, values);
    return values;
}

std::vector<PackedVector> output_vectors(const CircuitGraph& graph, const Valuation& values)
{
    std::vector<PackedVector> outs;
    outs.reserve(graph.outputs.size());
    for (NodeId src : graph.outputs) {
        if (!values.ready(src)) throw std::logic_error("output source " + std::to_string(src) + " is unevaluated");
        outs.push_back(values.vector(src));
    }
    return outs;
}

std::vector<PackedVector> evaluate_forced(const CircuitGraph& graph, std::span<const NodeId> downstream, EdgeRef e,
                                          bool forced, const Valuation& upstream)
{
    if (!graph.is_output(e.sink) && !graph.is_gate(e.sink))
        throw std::invalid_argument("forced edge must end at a gate or an output");
    if (e.slot > (graph.is_output(e.sink) ? 0 : 1)) throw std::invalid_argument("forced edge slot out of range");

    const std::size_t bits = upstream.bits();
    const std::size_t words = upstream.word_count();
    const Word tail = tail_mask(bits);

    std::vector<std::int32_t> local(graph.node_count(), -1);
    for (std::size_t i = 0; i < downstream.size(); ++i) local.at(downstream[i]) = static_cast<std::int32_t>(i);
    if (graph.is_gate(e.sink) && local[e.sink] < 0)
        throw std::invalid_argument("sink of the forced edge is not in the downstream set");

    std::vector<Word> scratch(downstream.size() * words);
    const std::vector<Word> constant(words, forced ? ~Word{0} : Word{0});
    std::vector<Word> constant_masked = constant;
    constant_masked.back() &= tail;

    const auto row_of = [&](NodeId id) -> std::span<const Word> {
        if (local[id] >= 0) return {scratch.data() + static_cast<std::size_t>(local[id]) * words, words};
        if (!upstream.ready(id)) throw std::logic_error("node " + std::to_string(id) + " is unevaluated upstream");
        return upstream.row(id);
    };

    for (std::size_t i = 0; i < downstream.size(); ++i) {
        const NodeId id = downstream[i];
        const Gate& gate = graph.gate(id);
        std::span<const Word> a = row_of(gate.inputs[0]);
        std::span<const Word> b = row_of(gate.inputs[1]);
        if (id == e.sink) (e.slot == 0 ? a : b) = constant_masked;
        apply_gate(gate.function, a, b, {scratch.data() + i * words, words}, tail);
    }

    std::vector<PackedVector> outs;
    outs.reserve(graph.outputs.size());
    for (std::size_t o = 0; o < graph.outputs.size(); ++o) {
        if (graph.output_node(o) == e.sink)
            outs.push_back(PackedVector::from_words(bits, constant_masked));
        else
            outs.push_back(PackedVector::from_words(bits, row_of(graph.outputs[o])));
    }
    return outs;
}

std::size_t hamming_distance(std::span<const PackedVector> outputs, const TruthTable& table)
{
    if (outputs.size() != table.num_outputs()) throw std::invalid_argument("output count does not match the table");
    std::size_t d = 0;
    for (std::size_t o = 0; o < outputs.size(); ++o) {
        const auto got = outputs[o].words();
        const auto want = table.output(o).words();
        if (got.size() != want.size()) throw std::invalid_argument("output width does not match the table");
        for (std::size_t w = 0; w < got.size(); ++w) d += static_cast<std::size_t>(std::popcount(got[w] ^ want[w]));
    }
    return d;
}

std::size_t fitness(const CgpParams& params, const Genotype& genotype, const TruthTable& table)
{
    if (params.num_inputs != table.num_inputs() || params.num_outputs != table.num_outputs())
        throw std::invalid_argument("genotype arity does not match the truth table");
    if (genotype.nodes.size() != params.num_columns || genotype.outputs.size() != params.num_outputs)
        throw std::invalid_argument("genotype shape does not match the parameters");

    const std::size_t ni = params.num_inputs;
    const std::size_t nc = params.num_columns;

    // Active gates by reverse label scan; a valid chromosome only references
    // smaller labels.
    std::vector<unsigned char> active(ni + nc, 0);
    for (NodeId o : genotype.outputs) active.at(o) = 1;
    for (std::size_t k = nc; k-- > 0;) {
        if (!active[ni + k]) continue;
        const Node& n = genotype.nodes[k];
        if (n.in1 >= ni + k || n.in2 >= ni + k) throw GenotypeError("connection gene violates label order");
        active[n.in1] = 1;
        active[n.in2] = 1;
    }

    std::vector<std::uint32_t> row(ni + nc, 0);
    std::size_t rows = ni;
    for (std::size_t i = 0; i < ni; ++i) row[i] = static_cast<std::uint32_t>(i);
    for (std::size_t k = 0; k < nc; ++k)
        if (active[ni + k]) row[ni + k] = static_cast<std::uint32_t>(rows++);

    Valuation values(rows, table.num_rows());
    fill_input_patterns(values, ni);
    const Word tail = tail_mask(values.bits());
    for (std::size_t k = 0; k < nc; ++k) {
        if (!active[ni + k]) continue;
        const Node& n = genotype.nodes[k];
        apply_gate(params.functions.at(n.function), values.row(row[n.in1]), values.row(row[n.in2]),
                   values.row(row[ni + k]), tail);
    }

    std::size_t d = 0;
    for (std::size_t o = 0; o < params.num_outputs; ++o) {
        const auto got = values.row(row[genotype.outputs[o]]);
        const auto want = table.output(o).words();
        for (std::size_t w = 0; w < got.size(); ++w) d += static_cast<std::size_t>(std::popcount(got[w] ^ want[w]));
    }
    return d;
}

}  // namespace cgp
