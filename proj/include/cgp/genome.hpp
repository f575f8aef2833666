#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cgp {

using Rng = std::mt19937_64;
using NodeId = std::uint32_t;

enum class NodeFunction : std::uint8_t { Not, And, Or, Xor, Nand, Nor, Xnor };

std::string_view function_name(NodeFunction f) noexcept;
std::optional<NodeFunction> parse_function(std::string_view name) noexcept;

/// True for functions that read only their first input.
constexpr bool is_unary(NodeFunction f) noexcept { return f == NodeFunction::Not; }

/// Scalar semantics; NOT complements `a` and ignores `b`.
constexpr bool apply(NodeFunction f, bool a, bool b) noexcept
{
    switch (f) {
    case NodeFunction::Not: return !a;
    case NodeFunction::And: return a && b;
    case NodeFunction::Or: return a || b;
    case NodeFunction::Xor: return a != b;
    case NodeFunction::Nand: return !(a && b);
    case NodeFunction::Nor: return !(a || b);
    case NodeFunction::Xnor: return a == b;
    }
    return false;
}

using FunctionSet = std::vector<NodeFunction>;

/// {not, and, or, xor, nand, nor, xnor}
FunctionSet full_function_set();
/// {not, and, or, nand, nor}
FunctionSet reduced_function_set();

/// Raised for chromosomes or parameters that break the encoding rules.
class GenotypeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Shape of a one-row CGP array with full levels-back.
struct CgpParams {
    std::size_t num_inputs = 0;
    std::size_t num_outputs = 0;
    std::size_t num_columns = 0;
    std::size_t num_rows = 1;
    std::size_t levels_back = 0;
    FunctionSet functions;

    static CgpParams make(std::size_t num_inputs, std::size_t num_outputs, std::size_t num_columns,
                          FunctionSet functions);

    std::size_t node_count() const noexcept { return num_inputs + num_columns; }
    std::size_t gene_count() const noexcept { return 3 * num_columns + num_outputs; }

    /// Index of `f` in the function set; throws if absent.
    std::uint32_t function_index(NodeFunction f) const;

    void validate() const;
    bool operator==(const CgpParams&) const = default;
};

/// One computational node: two connection genes and a function gene.
struct Node {
    NodeId in1 = 0;
    NodeId in2 = 0;
    std::uint32_t function = 0;
    bool operator==(const Node&) const = default;
};

/// Labels 0..n_i-1 are program inputs, label n_i + k is the node in column k.
struct Genotype {
    std::vector<Node> nodes;
    std::vector<NodeId> outputs;
    bool operator==(const Genotype&) const = default;
};

void validate(const Genotype& genotype, const CgpParams& params);

/// Half-open range [0, upper) of values accepted by gene `gene`; the gene
/// order is in1, in2, fn for each column followed by the output genes.
std::uint32_t gene_upper_bound(const CgpParams& params, std::size_t gene);
std::uint32_t gene_value(const Genotype& genotype, std::size_t gene);
void set_gene(Genotype& genotype, std::size_t gene, std::uint32_t value);

struct Gate {
    NodeFunction function = NodeFunction::And;
    std::array<NodeId, 2> inputs{};
};

/// In-edge `slot` of `sink`. Sinks are gates or output pseudo-nodes
/// (whose only slot is 0).
struct EdgeRef {
    NodeId sink = 0;
    std::uint8_t slot = 0;
    bool operator==(const EdgeRef&) const = default;
};

/// Decoded phenotype graph.
///
/// Node ids: program inputs [0, n_i), gates [n_i, n_i + n_c), output
/// pseudo-nodes [n_i + n_c, n_i + n_c + n_o). Every gate is present whether
/// it is active or not. Edges may be edited freely as long as the graph stays
/// acyclic; `encode` restores label order.
class CircuitGraph {
public:
    std::size_t num_inputs = 0;
    std::vector<Gate> gates;
    std::vector<NodeId> outputs;        // source of each output pseudo-node
    std::vector<bool> active;           // by node id, inputs and gates
    std::vector<std::size_t> topo_index;  // by node id, inputs and gates

    std::size_t node_count() const noexcept { return num_inputs + gates.size(); }
    std::size_t total_count() const noexcept { return node_count() + outputs.size(); }

    bool is_input(NodeId id) const noexcept { return id < num_inputs; }
    bool is_gate(NodeId id) const noexcept { return id >= num_inputs && id < node_count(); }
    bool is_output(NodeId id) const noexcept { return id >= node_count() && id < total_count(); }
    NodeId output_node(std::size_t k) const noexcept { return static_cast<NodeId>(node_count() + k); }

    Gate& gate(NodeId id) { return gates.at(id - num_inputs); }
    const Gate& gate(NodeId id) const { return gates.at(id - num_inputs); }

    NodeId source(EdgeRef e) const;
    void set_source(EdgeRef e, NodeId src);
    std::vector<EdgeRef> in_edges(NodeId sink) const;

    std::size_t active_gate_count() const;
};

CircuitGraph decode(const Genotype& genotype, const CgpParams& params);

/// Nodes (inputs and gates) with a path to some output pseudo-node.
std::vector<bool> active_nodes(const CircuitGraph& graph);

/// Gate ids in a topological order; ties resolved by smallest id. Throws
/// std::logic_error on a cycle.
std::vector<NodeId> topological_order(const CircuitGraph& graph);

/// Flags (indexed by id over inputs, gates and outputs) of every node reachable
/// from `from`, including `from` itself.
std::vector<bool> descendants(const CircuitGraph& graph, NodeId from);

/// Re-encodes a graph after mutating node `mutated`. Gates are emitted in
/// three groups: previously active gates preceding `mutated`, then previously
/// inactive gates, then `mutated` and the remaining active gates. Within and
/// across groups the order is forced to be topological; ties keep the old
/// label order. Inactive gates keep their genes with connections remapped.
Genotype encode(const CircuitGraph& graph, NodeId mutated, const std::vector<bool>& originally_inactive,
                const CgpParams& params);

/// Outputs wired to random program inputs; node genes random, all inactive.
Genotype somo_seed(const CgpParams& params, Rng& rng);

/// Every gene uniform over its valid range.
Genotype random_genotype(const CgpParams& params, Rng& rng);

/// Graphviz view of the active part plus program inputs and outputs.
std::string to_dot(const CircuitGraph& graph);

/// BLIF netlist of the active gates; each output gets a buffer.
std::string to_netlist(const CircuitGraph& graph, std::string_view model = "cgp");

/// One line: "cgp ni=.. no=.. nc=.. fs=a,b,..; (in1,in2,f)...; (o1,...,on)".
std::string serialize(const CgpParams& params, const Genotype& genotype);

struct Chromosome {
    CgpParams params;
    Genotype genotype;
};

/// Throws std::runtime_error on malformed text and GenotypeError on an
/// invalid chromosome.
Chromosome deserialize(std::string_view text);

}  // namespace cgp
