#include "cgp/genome.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <queue>
#include <sstream>

namespace cgp {

namespace {

constexpr std::array<NodeFunction, 7> kAllFunctions{NodeFunction::Not,  NodeFunction::And, NodeFunction::Or,
                                                    NodeFunction::Xor,  NodeFunction::Nand, NodeFunction::Nor,
                                                    NodeFunction::Xnor};

std::uint32_t uniform_below(Rng& rng, std::uint32_t upper)
{
    return std::uniform_int_distribution<std::uint32_t>(0, upper - 1)(rng);
}

}  // namespace

std::string_view function_name(NodeFunction f) noexcept
{
    switch (f) {
    case NodeFunction::Not: return "not";
    case NodeFunction::And: return "and";
    case NodeFunction::Or: return "or";
    case NodeFunction::Xor: return "xor";
    case NodeFunction::Nand: return "nand";
    case NodeFunction::Nor: return "nor";
    case NodeFunction::Xnor: return "xnor";
    }
    return "?";
}

std::optional<NodeFunction> parse_function(std::string_view name) noexcept
{
    for (NodeFunction f : kAllFunctions)
        if (function_name(f) == name) return f;
    return std::nullopt;
}

FunctionSet full_function_set()
{
    return {kAllFunctions.begin(), kAllFunctions.end()};
}

FunctionSet reduced_function_set()
{
    return {NodeFunction::Not, NodeFunction::And, NodeFunction::Or, NodeFunction::Nand, NodeFunction::Nor};
}

CgpParams CgpParams::make(std::size_t num_inputs, std::size_t num_outputs, std::size_t num_columns,
                          FunctionSet functions)
{
    CgpParams p;
    p.num_inputs = num_inputs;
    p.num_outputs = num_outputs;
    p.num_columns = num_columns;
    p.num_rows = 1;
    p.levels_back = num_columns;
    p.functions = std::move(functions);
    p.validate();
    return p;
}

std::uint32_t CgpParams::function_index(NodeFunction f) const
{
    const auto it = std::find(functions.begin(), functions.end(), f);
    if (it == functions.end())
        throw GenotypeError("function " + std::string(function_name(f)) + " is not in the function set");
    return static_cast<std::uint32_t>(it - functions.begin());
}

void CgpParams::validate() const
{
    if (num_inputs < 1) throw GenotypeError("at least one program input is required");
    if (num_outputs < 1) throw GenotypeError("at least one program output is required");
    if (num_columns < 1) throw GenotypeError("at least one column is required");
    if (num_rows != 1) throw GenotypeError("only one-row arrays are supported");
    if (levels_back != num_columns) throw GenotypeError("levels-back must equal the column count");
    if (functions.empty()) throw GenotypeError("function set is empty");
    for (std::size_t i = 0; i < functions.size(); ++i)
        for (std::size_t j = i + 1; j < functions.size(); ++j)
            if (functions[i] == functions[j]) throw GenotypeError("duplicate function in the function set");
    if (node_count() + num_outputs >= std::size_t{0xFFFFFFFF}) throw GenotypeError("array too large");
}

void validate(const Genotype& g, const CgpParams& p)
{
    if (g.nodes.size() != p.num_columns)
        throw GenotypeError("chromosome has " + std::to_string(g.nodes.size()) + " nodes, expected " +
                            std::to_string(p.num_columns));
    if (g.outputs.size() != p.num_outputs)
        throw GenotypeError("chromosome has " + std::to_string(g.outputs.size()) + " outputs, expected " +
                            std::to_string(p.num_outputs));
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const NodeId limit = static_cast<NodeId>(p.num_inputs + k);
        const Node& n = g.nodes[k];
        if (n.in1 >= limit) throw GenotypeError("gene in1 of column " + std::to_string(k) + " is " + std::to_string(n.in1) + ", must be < " + std::to_string(limit));
        if (n.in2 >= limit) throw GenotypeError("gene in2 of column " + std::to_string(k) + " is " + std::to_string(n.in2) + ", must be < " + std::to_string(limit));
        if (n.function >= p.functions.size())
            throw GenotypeError("gene fn of column " + std::to_string(k) + " is " + std::to_string(n.function) +
                                ", function set has " + std::to_string(p.functions.size()) + " entries");
    }
    for (std::size_t o = 0; o < g.outputs.size(); ++o)
        if (g.outputs[o] >= p.node_count())
            throw GenotypeError("output gene " + std::to_string(o) + " is " + std::to_string(g.outputs[o]) +
                                ", must be < " + std::to_string(p.node_count()));
}

std::uint32_t gene_upper_bound(const CgpParams& p, std::size_t gene)
{
    if (gene < 3 * p.num_columns) {
        const std::size_t column = gene / 3;
        if (gene % 3 == 2) return static_cast<std::uint32_t>(p.functions.size());
        return static_cast<std::uint32_t>(p.num_inputs + column);
    }
    return static_cast<std::uint32_t>(p.node_count());
}

std::uint32_t gene_value(const Genotype& g, std::size_t gene)
{
    if (gene < 3 * g.nodes.size()) {
        const Node& n = g.nodes[gene / 3];
        switch (gene % 3) {
        case 0: return n.in1;
        case 1: return n.in2;
        default: return n.function;
        }
    }
    return g.outputs.at(gene - 3 * g.nodes.size());
}

void set_gene(Genotype& g, std::size_t gene, std::uint32_t value)
{
    if (gene < 3 * g.nodes.size()) {
        Node& n = g.nodes[gene / 3];
        switch (gene % 3) {
        case 0: n.in1 = value; break;
        case 1: n.in2 = value; break;
        default: n.function = value; break;
        }
        return;
    }
    g.outputs.at(gene - 3 * g.nodes.size()) = value;
}

NodeId CircuitGraph::source(EdgeRef e) const
{
    if (is_output(e.sink)) return outputs[e.sink - node_count()];
    return gate(e.sink).inputs.at(e.slot);
}

void CircuitGraph::set_source(EdgeRef e, NodeId src)
{
    if (is_output(e.sink))
        outputs[e.sink - node_count()] = src;
    else
        gate(e.sink).inputs.at(e.slot) = src;
}

std::vector<EdgeRef> CircuitGraph::in_edges(NodeId sink) const
{
    if (is_output(sink)) return {EdgeRef{sink, 0}};
    if (is_gate(sink)) return {EdgeRef{sink, 0}, EdgeRef{sink, 1}};
    return {};
}

std::size_t CircuitGraph::active_gate_count() const
{
    std::size_t n = 0;
    for (std::size_t id = num_inputs; id < node_count(); ++id) n += active[id] ? 1 : 0;
    return n;
}

CircuitGraph decode(const Genotype& g, const CgpParams& p)
{
    validate(g, p);
    CircuitGraph graph;
    graph.num_inputs = p.num_inputs;
    graph.gates.resize(g.nodes.size());
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        graph.gates[k].function = p.functions[g.nodes[k].function];
        graph.gates[k].inputs = {g.nodes[k].in1, g.nodes[k].in2};
    }
    graph.outputs = g.outputs;
    graph.active = active_nodes(graph);
    graph.topo_index.resize(graph.node_count());
    for (std::size_t id = 0; id < graph.node_count(); ++id) graph.topo_index[id] = id;
    return graph;
}

std::vector<bool> active_nodes(const CircuitGraph& graph)
{
    std::vector<bool> active(graph.node_count(), false);
    std::vector<NodeId> stack;
    stack.reserve(graph.node_count());
    for (NodeId src : graph.outputs) {
        if (!active[src]) {
            active[src] = true;
            stack.push_back(src);
        }
    }
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        if (!graph.is_gate(id)) continue;
        for (NodeId src : graph.gate(id).inputs) {
            if (!active[src]) {
                active[src] = true;
                stack.push_back(src);
            }
        }
    }
    return active;
}

namespace {

/// Kahn's algorithm over gates, always emitting the ready gate with the
/// smallest key.
template <typename Key>
std::vector<NodeId> prioritized_order(const CircuitGraph& graph, Key key)
{
    const std::size_t ni = graph.num_inputs;
    const std::size_t nc = graph.gates.size();
    std::vector<std::uint32_t> pending(nc, 0);
    std::vector<std::vector<NodeId>> fanout(nc);
    for (std::size_t k = 0; k < nc; ++k) {
        for (NodeId src : graph.gates[k].inputs) {
            if (graph.is_gate(src)) {
                ++pending[k];
                fanout[src - ni].push_back(static_cast<NodeId>(ni + k));
            }
        }
    }
    using Entry = std::pair<std::uint64_t, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
    for (std::size_t k = 0; k < nc; ++k)
        if (pending[k] == 0) ready.emplace(key(static_cast<NodeId>(ni + k)), static_cast<NodeId>(ni + k));

    std::vector<NodeId> order;
    order.reserve(nc);
    while (!ready.empty()) {
        const NodeId id = ready.top().second;
        ready.pop();
        order.push_back(id);
        for (NodeId next : fanout[id - ni])
            if (--pending[next - ni] == 0) ready.emplace(key(next), next);
    }
    if (order.size() != nc) throw std::logic_error("circuit graph contains a cycle");
    return order;
}

}  // namespace

std::vector<NodeId> topological_order(const CircuitGraph& graph)
{
    const std::size_t ni = graph.num_inputs;
    const std::size_t nc = graph.gates.size();
    // Fast path: decoded graphs are already in label order.
    bool monotone = true;
    for (std::size_t k = 0; k < nc && monotone; ++k)
        for (NodeId src : graph.gates[k].inputs)
            if (src >= ni + k) monotone = false;
    if (monotone) {
        std::vector<NodeId> order(nc);
        for (std::size_t k = 0; k < nc; ++k) order[k] = static_cast<NodeId>(ni + k);
        return order;
    }
    return prioritized_order(graph, [](NodeId id) { return std::uint64_t{id}; });
}

std::vector<bool> descendants(const CircuitGraph& graph, NodeId from)
{
    std::vector<bool> reach(graph.total_count(), false);
    reach.at(from) = true;
    if (graph.is_output(from)) return reach;

    const std::size_t ni = graph.num_inputs;
    const std::size_t nc = graph.gates.size();
    std::vector<std::vector<NodeId>> fanout(graph.node_count());
    for (std::size_t k = 0; k < nc; ++k)
        for (NodeId src : graph.gates[k].inputs) fanout[src].push_back(static_cast<NodeId>(ni + k));
    for (std::size_t o = 0; o < graph.outputs.size(); ++o) fanout[graph.outputs[o]].push_back(graph.output_node(o));

    std::vector<NodeId> stack{from};
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        if (graph.is_output(id)) continue;
        for (NodeId next : fanout[id]) {
            if (!reach[next]) {
                reach[next] = true;
                stack.push_back(next);
            }
        }
    }
    return reach;
}

Genotype encode(const CircuitGraph& graph, NodeId mutated, const std::vector<bool>& originally_inactive,
                const CgpParams& params)
{
    const std::size_t ni = graph.num_inputs;
    const std::size_t nc = graph.gates.size();
    if (nc != params.num_columns || ni != params.num_inputs || graph.outputs.size() != params.num_outputs)
        throw std::logic_error("graph shape does not match parameters");

    const bool mutated_output = graph.is_output(mutated);
    const auto group_key = [&](NodeId id) -> std::uint64_t {
        std::uint64_t group = 0;
        if (originally_inactive[id])
            group = 1;
        else if (!mutated_output && id >= mutated)
            group = 2;
        return (group << 32) | id;
    };
    const std::vector<NodeId> order = prioritized_order(graph, group_key);

    std::vector<NodeId> label(graph.node_count());
    for (std::size_t i = 0; i < ni; ++i) label[i] = static_cast<NodeId>(i);
    for (std::size_t pos = 0; pos < nc; ++pos) label[order[pos]] = static_cast<NodeId>(ni + pos);

    Genotype g;
    g.nodes.resize(nc);
    for (std::size_t pos = 0; pos < nc; ++pos) {
        const Gate& gate = graph.gate(order[pos]);
        g.nodes[pos] = Node{label[gate.inputs[0]], label[gate.inputs[1]], params.function_index(gate.function)};
    }
    g.outputs.resize(graph.outputs.size());
    for (std::size_t o = 0; o < graph.outputs.size(); ++o) g.outputs[o] = label[graph.outputs[o]];
    return g;
}

Genotype random_genotype(const CgpParams& p, Rng& rng)
{
    Genotype g;
    g.nodes.resize(p.num_columns);
    g.outputs.resize(p.num_outputs);
    for (std::size_t gene = 0; gene < p.gene_count(); ++gene) set_gene(g, gene, uniform_below(rng, gene_upper_bound(p, gene)));
    return g;
}

Genotype somo_seed(const CgpParams& p, Rng& rng)
{
    Genotype g = random_genotype(p, rng);
    for (auto& o : g.outputs) o = uniform_below(rng, static_cast<std::uint32_t>(p.num_inputs));
    return g;
}

namespace {

std::string node_name(const CircuitGraph& graph, NodeId id)
{
    if (graph.is_input(id)) return "x" + std::to_string(id);
    return "n" + std::to_string(id);
}

/// BLIF single-output cover for each function; inputs listed in1 then in2.
std::string_view blif_cover(NodeFunction f)
{
    switch (f) {
    case NodeFunction::Not: return "0 1\n";
    case NodeFunction::And: return "11 1\n";
    case NodeFunction::Or: return "1- 1\n-1 1\n";
    case NodeFunction::Xor: return "10 1\n01 1\n";
    case NodeFunction::Nand: return "0- 1\n-0 1\n";
    case NodeFunction::Nor: return "00 1\n";
    case NodeFunction::Xnor: return "11 1\n00 1\n";
    }
    return "";
}

}  // namespace

std::string to_dot(const CircuitGraph& graph)
{
    std::ostringstream os;
    os << "digraph cgp {\n  rankdir=LR;\n";
    for (std::size_t i = 0; i < graph.num_inputs; ++i) os << "  x" << i << " [shape=box];\n";
    for (NodeId id : topological_order(graph)) {
        if (!graph.active[id]) continue;
        const Gate& gate = graph.gate(id);
        os << "  n" << id << " [label=\"" << function_name(gate.function) << "\"];\n";
        os << "  " << node_name(graph, gate.inputs[0]) << " -> n" << id << ";\n";
        if (!is_unary(gate.function)) os << "  " << node_name(graph, gate.inputs[1]) << " -> n" << id << ";\n";
    }
    for (std::size_t o = 0; o < graph.outputs.size(); ++o) {
        os << "  y" << o << " [shape=box];\n";
        os << "  " << node_name(graph, graph.outputs[o]) << " -> y" << o << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string to_netlist(const CircuitGraph& graph, std::string_view model)
{
    std::ostringstream os;
    os << ".model " << model << "\n.inputs";
    for (std::size_t i = 0; i < graph.num_inputs; ++i) os << " x" << i;
    os << "\n.outputs";
    for (std::size_t o = 0; o < graph.outputs.size(); ++o) os << " y" << o;
    os << "\n";
    for (NodeId id : topological_order(graph)) {
        if (!graph.active[id]) continue;
        const Gate& gate = graph.gate(id);
        os << ".names " << node_name(graph, gate.inputs[0]);
        if (!is_unary(gate.function)) os << " " << node_name(graph, gate.inputs[1]);
        os << " n" << id << "\n" << blif_cover(gate.function);
    }
    for (std::size_t o = 0; o < graph.outputs.size(); ++o)
        os << ".names " << node_name(graph, graph.outputs[o]) << " y" << o << "\n1 1\n";
    os << ".end\n";
    return os.str();
}

std::string serialize(const CgpParams& p, const Genotype& g)
{
    std::ostringstream os;
    os << "cgp ni=" << p.num_inputs << " no=" << p.num_outputs << " nc=" << p.num_columns << " fs=";
    for (std::size_t i = 0; i < p.functions.size(); ++i) os << (i ? "," : "") << function_name(p.functions[i]);
    os << "; ";
    for (const Node& n : g.nodes) os << '(' << n.in1 << ',' << n.in2 << ',' << n.function << ')';
    os << "; (";
    for (std::size_t o = 0; o < g.outputs.size(); ++o) os << (o ? "," : "") << g.outputs[o];
    os << ')';
    return os.str();
}

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_ws()
    {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) ++pos_;
    }
    bool peek(char c)
    {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    void expect(char c)
    {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    void expect(std::string_view word)
    {
        skip_ws();
        if (text_.substr(pos_, word.size()) != word) fail("expected '" + std::string(word) + "'");
        pos_ += word.size();
    }
    std::uint32_t number()
    {
        skip_ws();
        std::uint32_t v = 0;
        const auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec != std::errc{}) fail("expected a number");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return v;
    }
    std::string_view word()
    {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ';' && text_[pos_] != ' ' && text_[pos_] != '\t' && text_[pos_] != '\n') ++pos_;
        return text_.substr(start, pos_ - start);
    }
    bool at_end()
    {
        skip_ws();
        return pos_ >= text_.size();
    }
    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::runtime_error("chromosome parse error at offset " + std::to_string(pos_) + ": " + what);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Chromosome deserialize(std::string_view text)
{
    Cursor in(text);
    in.expect("cgp");
    std::optional<std::size_t> ni, no, nc;
    std::optional<FunctionSet> fs;
    while (!in.peek(';')) {
        if (in.at_end()) in.fail("unterminated header");
        const std::string_view item = in.word();
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) in.fail("expected key=value, got '" + std::string(item) + "'");
        const std::string_view key = item.substr(0, eq);
        const std::string_view value = item.substr(eq + 1);
        if (key == "fs") {
            FunctionSet set;
            std::size_t start = 0;
            while (start <= value.size()) {
                std::size_t comma = value.find(',', start);
                if (comma == std::string_view::npos) comma = value.size();
                const auto f = parse_function(value.substr(start, comma - start));
                if (!f) in.fail("unknown function '" + std::string(value.substr(start, comma - start)) + "'");
                set.push_back(*f);
                start = comma + 1;
            }
            fs = std::move(set);
        } else {
            std::size_t v = 0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc{} || ptr != value.data() + value.size()) in.fail("bad value for " + std::string(key));
            if (key == "ni")
                ni = v;
            else if (key == "no")
                no = v;
            else if (key == "nc")
                nc = v;
            else
                in.fail("unknown key '" + std::string(key) + "'");
        }
    }
    in.expect(';');
    if (!ni || !no || !nc || !fs) in.fail("header needs ni, no, nc and fs");

    Chromosome c;
    c.params = CgpParams::make(*ni, *no, *nc, std::move(*fs));
    while (in.peek('(')) {
        in.expect('(');
        Node n;
        n.in1 = in.number();
        in.expect(',');
        n.in2 = in.number();
        in.expect(',');
        n.function = in.number();
        in.expect(')');
        c.genotype.nodes.push_back(n);
    }
    in.expect(';');
    in.expect('(');
    if (!in.peek(')')) {
        c.genotype.outputs.push_back(in.number());
        while (in.peek(',')) {
            in.expect(',');
            c.genotype.outputs.push_back(in.number());
        }
    }
    in.expect(')');
    if (!in.at_end()) in.fail("trailing characters");
    validate(c.genotype, c.params);
    return c;
}

}  // namespace cgp
