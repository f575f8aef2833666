#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cgp/genome.hpp"
#include "cgp/operators.hpp"
#include "cgp/truth_table.hpp"

namespace cgp {

enum class MutationKind { Point, Sam, Somo };

std::string_view mutation_name(MutationKind kind) noexcept;
std::optional<MutationKind> parse_mutation(std::string_view name) noexcept;

/// Raised before a run starts when the configuration is inconsistent.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct EvolveConfig {
    std::size_t lambda = 1;
    MutationKind mutation = MutationKind::Somo;
    SomoConfig somo;
    std::size_t point_genes = 1;  // h for point mutation

    std::optional<std::uint64_t> max_generations;
    std::optional<std::uint64_t> max_evaluations;
    std::optional<double> wall_time_limit;          // seconds
    std::optional<double> stall_seconds;            // without strict improvement
    std::optional<std::uint64_t> stall_generations;  // without strict improvement

    std::uint64_t seed = 1;

    void validate() const;
};

struct RunRecord {
    std::uint64_t seed = 0;
    bool success = false;
    std::uint64_t generations = 0;
    std::uint64_t evaluations = 0;
    double wall_time = 0.0;
    std::size_t final_fitness = 0;
    std::size_t active_nodes = 0;
    Genotype best;
};

struct Individual {
    Genotype genotype;
    std::size_t fitness = 0;
};

/// Best offspring (lowest index among equals), unless the parent is strictly
/// better than all of them.
const Individual& select_fittest(std::span<const Individual> offspring, const Individual& parent);

/// (1+lambda) evolution. Generation 0 evaluates the initial population of
/// 1 + lambda individuals; every later generation evaluates lambda offspring,
/// so evaluations == (1 + lambda) + generations * lambda.
RunRecord evolve(const EvolveConfig& config, const CgpParams& params, const TruthTable& table, Rng& rng);
RunRecord evolve(const EvolveConfig& config, const CgpParams& params, const TruthTable& table);

/// Koza's I(i, z) = lambda * i * R(z, i) with R = ceil(ln(1 - z) / ln(1 - P(i)))
/// (R = 1 when P(i) = 1), evaluated at the generation where the final success
/// rate is reached, i.e. the slowest successful run. With every run successful
/// this equals lambda times the largest generation count. nullopt without
/// successes.
std::optional<std::uint64_t> computational_effort(std::span<const RunRecord> runs, double z, std::size_t lambda = 1);

/// Same expression minimised over every generation count at which some run
/// succeeded.
std::optional<std::uint64_t> minimum_computational_effort(std::span<const RunRecord> runs, double z,
                                                          std::size_t lambda = 1);

/// Number of independent runs needed to hit success probability z.
std::uint64_t runs_required(double z, double success_probability);

struct Summary {
    std::size_t count = 0;
    double min = 0.0;
    double mean = 0.0;
    double ci95 = 0.0;  // half-width, 1.96 * s / sqrt(n)
    double median = 0.0;
    double max = 0.0;

    static Summary of(std::vector<double> values);
};

/// Aggregates over a batch; the summaries cover successful runs only.
struct ExperimentStats {
    std::vector<RunRecord> runs;
    std::size_t successes = 0;
    double success_rate = 0.0;
    std::optional<std::uint64_t> effort;
    std::optional<std::uint64_t> minimum_effort;
    Summary wall_time;
    Summary generations;
    Summary active_nodes;
};

ExperimentStats summarize(std::vector<RunRecord> runs, std::size_t lambda, double z = 0.99);

/// Runs seeds config.seed + 0 .. config.seed + n_runs - 1 on up to `jobs`
/// threads. Results are in run order and do not depend on `jobs`.
ExperimentStats run_batch(const EvolveConfig& config, const CgpParams& params, const TruthTable& table,
                          std::size_t n_runs, std::size_t jobs = 1);

/// One per-run CSV line.
struct CsvRow {
    std::size_t nc = 0;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    bool success = false;
    std::uint64_t generations = 0;
    std::uint64_t evaluations = 0;
    double wall_time_s = 0.0;
    std::size_t active_nodes = 0;
    bool operator==(const CsvRow&) const = default;
};

std::string_view runs_csv_header() noexcept;
CsvRow make_csv_row(std::size_t nc, std::size_t run, const RunRecord& record, bool with_wall_time);
std::string format_csv_row(const CsvRow& row);
/// Throws std::runtime_error on a malformed line.
CsvRow parse_csv_row(std::string_view line);

std::string_view summary_csv_header() noexcept;
std::string format_summary_row(std::size_t nc, const ExperimentStats& stats, bool with_wall_time);

}  // namespace cgp
