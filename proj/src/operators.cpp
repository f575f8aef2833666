#include "cgp/operators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "cgp/simulator.hpp"

namespace cgp {

namespace {

std::size_t uniform_index(Rng& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace

std::string ReqPattern::to_string() const
{
    std::string s(size(), 'X');
    for (std::size_t j = 0; j < size(); ++j) s[j] = static_cast<char>(at(j));
    return s;
}

ReqPattern build_req(const TruthTable& table, std::span<const PackedVector> forced0,
                     std::span<const PackedVector> forced1)
{
    const std::size_t no = table.num_outputs();
    if (forced0.size() != no || forced1.size() != no)
        throw std::invalid_argument("forced output sets must cover every output");
    const std::size_t bits = table.num_rows();
    ReqPattern req{PackedVector(bits), PackedVector(bits)};
    auto care = req.care.words();
    auto value = req.value.words();
    const Word tail = tail_mask(bits);

    for (std::size_t o = 0; o < no; ++o) {
        const auto t = table.output(o).words();
        const auto v0 = forced0[o].words();
        const auto v1 = forced1[o].words();
        if (v0.size() != care.size() || v1.size() != care.size())
            throw std::invalid_argument("forced output width does not match the table");
        for (std::size_t w = 0; w < care.size(); ++w) {
            Word definite = v0[w] ^ v1[w];
            if (w + 1 == care.size()) definite &= tail;
            // where v0 != v1 the edge must be 1 exactly when forcing 0 misses t
            const Word want_one = definite & (v0[w] ^ t[w]);
            const Word fresh = definite & ~care[w];
            value[w] |= want_one & fresh;
            care[w] |= fresh;
        }
    }
    return req;
}

std::size_t req_score(const ReqPattern& req, std::span<const Word> val) noexcept
{
    const auto care = req.care.words();
    const auto value = req.value.words();
    std::size_t s = 0;
    for (std::size_t w = 0; w < care.size(); ++w)
        s += static_cast<std::size_t>(std::popcount(care[w] & ~(val[w] ^ value[w])));
    return s;
}

void SomoConfig::validate() const
{
    if (!(function_rate >= 0.0 && function_rate <= 1.0)) throw std::invalid_argument("function rate must be in [0, 1]");
    if (!(inactive_ratio >= 0.0 && inactive_ratio <= 1.0)) throw std::invalid_argument("inactive ratio must be in [0, 1]");
}

BestNode identify_best_node(const CircuitGraph& graph, NodeId c, EdgeRef e, const TruthTable& table)
{
    if (e.sink != c) throw std::invalid_argument("edge is not an in-edge of the mutated node");
    if (!graph.is_gate(c) && !graph.is_output(c)) throw std::invalid_argument("mutated node must be a gate or an output");
    if (graph.num_inputs != table.num_inputs() || graph.outputs.size() != table.num_outputs())
        throw std::invalid_argument("graph arity does not match the truth table");

    const std::vector<bool> reach = descendants(graph, c);
    const std::vector<NodeId> order = topological_order(graph);
    std::vector<NodeId> upstream_order;
    std::vector<NodeId> downstream_order;
    upstream_order.reserve(order.size());
    for (NodeId id : order) (reach[id] ? downstream_order : upstream_order).push_back(id);

    Valuation values(graph.node_count(), table.num_rows());
    fill_input_patterns(values, graph.num_inputs);
    evaluate(graph, upstream_order, values);

    const auto f0 = evaluate_forced(graph, downstream_order, e, false, values);
    const auto f1 = evaluate_forced(graph, downstream_order, e, true, values);

    BestNode best;
    best.req = build_req(table, f0, f1);
    best.scores.assign(graph.node_count(), std::nullopt);
    bool found = false;
    for (NodeId id = 0; id < graph.node_count(); ++id) {
        if (reach[id]) continue;
        const std::size_t s = req_score(best.req, values.row(id));
        best.scores[id] = s;
        if (!found || s > best.score) {
            best.node = id;
            best.score = s;
            found = true;
        }
    }
    if (!found) throw std::logic_error("no connection candidate available");
    return best;
}

SomoTrace somo_mutate_graph(CircuitGraph& graph, const CgpParams& params, const TruthTable& table,
                            const SomoConfig& config, Rng& rng)
{
    const std::size_t ni = graph.num_inputs;
    const std::size_t n_nodes = graph.node_count();

    std::vector<NodeId> pool;
    std::vector<NodeId> inactive;
    for (NodeId id = static_cast<NodeId>(ni); id < n_nodes; ++id) (graph.active[id] ? pool : inactive).push_back(id);
    for (std::size_t o = 0; o < graph.outputs.size(); ++o) pool.push_back(graph.output_node(o));

    SomoTrace trace;
    trace.mutated = pool[uniform_index(rng, pool.size())];
    trace.originally_inactive.assign(n_nodes, false);
    for (NodeId id : inactive) trace.originally_inactive[id] = true;
    const NodeId c = trace.mutated;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (graph.is_gate(c) && unit(rng) < config.function_rate) {
        trace.branch = SomoBranch::Function;
        graph.gate(c).function = params.functions[uniform_index(rng, params.functions.size())];
        return trace;
    }
    trace.branch = SomoBranch::Connection;

    // Regenerate a share of the inactive gates. Their sources are program
    // inputs, active gates preceding c, or inactive gates with a smaller id,
    // which keeps every non-mutated edge pointing to a smaller id.
    std::vector<NodeId> active_before;
    for (NodeId id = static_cast<NodeId>(ni); id < n_nodes; ++id)
        if (graph.active[id] && (graph.is_output(c) || id < c)) active_before.push_back(id);

    const auto quota = static_cast<std::size_t>(std::ceil(config.inactive_ratio * static_cast<double>(inactive.size())));
    std::vector<std::size_t> chosen(inactive.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] = i;
    if (quota < chosen.size()) {
        for (std::size_t i = 0; i < quota; ++i) std::swap(chosen[i], chosen[i + uniform_index(rng, chosen.size() - i)]);
        chosen.resize(quota);
        std::sort(chosen.begin(), chosen.end());
    }
    for (std::size_t pos : chosen) {
        Gate& gate = graph.gate(inactive[pos]);
        gate.function = params.functions[uniform_index(rng, params.functions.size())];
        const std::size_t choices = ni + active_before.size() + pos;
        for (NodeId& src : gate.inputs) {
            std::size_t r = uniform_index(rng, choices);
            if (r < ni)
                src = static_cast<NodeId>(r);
            else if ((r -= ni) < active_before.size())
                src = active_before[r];
            else
                src = inactive[r - active_before.size()];
        }
    }
    trace.regenerated = chosen.size();

    std::vector<EdgeRef> edges;
    for (EdgeRef e : graph.in_edges(c))
        if (graph.active[graph.source(e)]) edges.push_back(e);
    if (edges.empty()) throw std::logic_error("mutated node has no active in-edge");
    const EdgeRef e = edges[uniform_index(rng, edges.size())];

    const BestNode best = identify_best_node(graph, c, e, table);
    trace.edge = e;
    trace.previous_source = graph.source(e);
    trace.chosen = best.node;
    trace.score = best.score;
    graph.set_source(e, best.node);
    return trace;
}

Genotype somo_mutate(const Genotype& parent, const CgpParams& params, const TruthTable& table,
                     const SomoConfig& config, Rng& rng, SomoTrace* trace)
{
    CircuitGraph graph = decode(parent, params);
    SomoTrace t = somo_mutate_graph(graph, params, table, config, rng);
    Genotype child = encode(graph, t.mutated, t.originally_inactive, params);
    if (trace) *trace = std::move(t);
    return child;
}

Genotype point_mutate(const Genotype& parent, const CgpParams& params, std::size_t genes, Rng& rng)
{
    Genotype child = parent;
    for (std::size_t i = 0; i < genes; ++i) {
        const std::size_t gene = uniform_index(rng, params.gene_count());
        set_gene(child, gene, static_cast<std::uint32_t>(uniform_index(rng, gene_upper_bound(params, gene))));
    }
    return child;
}

Genotype sam_mutate(const Genotype& parent, const CgpParams& params, Rng& rng)
{
    const CircuitGraph graph = decode(parent, params);
    Genotype child = parent;
    const std::size_t node_genes = 3 * params.num_columns;
    for (;;) {
        const std::size_t gene = uniform_index(rng, params.gene_count());
        const std::uint32_t upper = gene_upper_bound(params, gene);
        const bool active = gene >= node_genes || graph.active[params.num_inputs + gene / 3];
        if (!active) {
            set_gene(child, gene, static_cast<std::uint32_t>(uniform_index(rng, upper)));
            continue;
        }
        if (upper < 2) continue;
        const std::uint32_t current = gene_value(child, gene);
        auto value = static_cast<std::uint32_t>(uniform_index(rng, upper - 1));
        if (value >= current) ++value;
        set_gene(child, gene, value);
        return child;
    }
}

}  // namespace cgp
