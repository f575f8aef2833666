#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgp/bitvector.hpp"
#include "cgp/genome.hpp"
#include "cgp/truth_table.hpp"

namespace cgp {

/// Desired value at a mutated edge: a definite bit or don't-care.
enum class Trit : char { Zero = '0', One = '1', X = 'X' };

/// Which value of the edge makes an output equal `target`, given the output
/// values `v0`/`v1` obtained with the edge forced to 0/1.
constexpr Trit theta(bool target, bool v0, bool v1) noexcept
{
    if (v0 == v1) return Trit::X;
    return v0 == target ? Trit::Zero : Trit::One;
}

/// First non-X operand wins; not commutative.
constexpr Trit reduce_req(Trit a, Trit b) noexcept { return a != Trit::X ? a : b; }

/// 1 iff `req` is definite and equals `val`.
constexpr int hd_star(Trit req, bool val) noexcept
{
    return req != Trit::X && (req == Trit::One) == val ? 1 : 0;
}

/// Packed ternary pattern: `care` marks definite positions and `value` holds
/// the desired bit there (zero elsewhere).
struct ReqPattern {
    PackedVector care;
    PackedVector value;

    std::size_t size() const noexcept { return care.size(); }
    Trit at(std::size_t j) const noexcept
    {
        if (!care.test(j)) return Trit::X;
        return value.test(j) ? Trit::One : Trit::Zero;
    }
    /// Position 0 first.
    std::string to_string() const;
};

/// Folds theta over the outputs in index order with reduce_req, bitwise over
/// all rows.
ReqPattern build_req(const TruthTable& table, std::span<const PackedVector> forced0,
                     std::span<const PackedVector> forced1);

/// Sum of hd_star over all rows: popcount(care & ~(val ^ value)).
std::size_t req_score(const ReqPattern& req, std::span<const Word> val) noexcept;

struct SomoConfig {
    double function_rate = 0.0;   // probability of mutating a node function
    double inactive_ratio = 1.0;  // share of inactive nodes regenerated per connection mutation

    void validate() const;
};

struct BestNode {
    NodeId node = 0;
    std::size_t score = 0;
    ReqPattern req;
    /// Score per node id over inputs and gates; nullopt for nodes that would
    /// close a cycle.
    std::vector<std::optional<std::size_t>> scores;
};

/// Picks the node whose output best matches the value required at edge `e` of
/// node `c` (a gate or output pseudo-node). Candidates are all program inputs
/// and gates not reachable from `c`; ties go to the smallest id.
BestNode identify_best_node(const CircuitGraph& graph, NodeId c, EdgeRef e, const TruthTable& table);

enum class SomoBranch { Function, Connection };

struct SomoTrace {
    SomoBranch branch = SomoBranch::Connection;
    NodeId mutated = 0;
    std::optional<EdgeRef> edge;
    NodeId previous_source = 0;
    NodeId chosen = 0;
    std::size_t score = 0;
    std::size_t regenerated = 0;
    std::vector<bool> originally_inactive;  // by node id over inputs and gates
};

/// One semantically-oriented mutation applied to `graph` in place, without
/// re-encoding. `graph.active` must be current.
SomoTrace somo_mutate_graph(CircuitGraph& graph, const CgpParams& params, const TruthTable& table,
                            const SomoConfig& config, Rng& rng);

/// Decode, mutate, and re-encode.
Genotype somo_mutate(const Genotype& parent, const CgpParams& params, const TruthTable& table,
                     const SomoConfig& config, Rng& rng, SomoTrace* trace = nullptr);

/// Replaces `genes` uniformly chosen genes (with repetition) with uniform
/// valid values.
Genotype point_mutate(const Genotype& parent, const CgpParams& params, std::size_t genes, Rng& rng);

/// Mutates random genes until one gene of an active node or an output gene has
/// changed value. Inactive genes hit on the way are randomized too.
Genotype sam_mutate(const Genotype& parent, const CgpParams& params, Rng& rng);

}  // namespace cgp
