#include "cgp/engine.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "cgp/simulator.hpp"

namespace cgp {

std::string_view mutation_name(MutationKind kind) noexcept
{
    switch (kind) {
    case MutationKind::Point: return "point";
    case MutationKind::Sam: return "sam";
    case MutationKind::Somo: return "somo";
    }
    return "?";
}

std::optional<MutationKind> parse_mutation(std::string_view name) noexcept
{
    for (MutationKind k : {MutationKind::Point, MutationKind::Sam, MutationKind::Somo})
        if (mutation_name(k) == name) return k;
    return std::nullopt;
}

void EvolveConfig::validate() const
{
    if (lambda < 1) throw ConfigError("lambda must be at least 1");
    try {
        somo.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (max_generations && *max_generations == 0) throw ConfigError("generation limit must be positive");
    if (max_evaluations && *max_evaluations == 0) throw ConfigError("evaluation limit must be positive");
    if (wall_time_limit && !(*wall_time_limit > 0.0)) throw ConfigError("wall-time limit must be positive");
    if (stall_seconds && !(*stall_seconds > 0.0)) throw ConfigError("stall limit must be positive");
    if (stall_generations && *stall_generations == 0) throw ConfigError("stall limit must be positive");
}

const Individual& select_fittest(std::span<const Individual> offspring, const Individual& parent)
{
    if (offspring.empty()) return parent;
    const Individual* best = &offspring.front();
    for (const Individual& ind : offspring.subspan(1))
        if (ind.fitness < best->fitness) best = &ind;
    return best->fitness <= parent.fitness ? *best : parent;
}

namespace {

Genotype mutate(const EvolveConfig& cfg, const Genotype& parent, const CgpParams& params, const TruthTable& table,
                Rng& rng)
{
    switch (cfg.mutation) {
    case MutationKind::Point: return point_mutate(parent, params, cfg.point_genes, rng);
    case MutationKind::Sam: return sam_mutate(parent, params, rng);
    case MutationKind::Somo: return somo_mutate(parent, params, table, cfg.somo, rng);
    }
    throw std::logic_error("unknown mutation kind");
}

std::size_t count_active_gates(const CgpParams& params, const Genotype& g)
{
    return decode(g, params).active_gate_count();
}

}  // namespace

RunRecord evolve(const EvolveConfig& cfg, const CgpParams& params, const TruthTable& table, Rng& rng)
{
    cfg.validate();
    try {
        params.validate();
    } catch (const GenotypeError& e) {
        throw ConfigError(e.what());
    }
    if (params.num_inputs != table.num_inputs() || params.num_outputs != table.num_outputs())
        throw ConfigError("CGP arity " + std::to_string(params.num_inputs) + "/" + std::to_string(params.num_outputs) +
                          " does not match the truth table " + std::to_string(table.num_inputs()) + "/" +
                          std::to_string(table.num_outputs()));

    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const auto seconds_since = [](Clock::time_point t) {
        return std::chrono::duration<double>(Clock::now() - t).count();
    };

    RunRecord rec;
    rec.seed = cfg.seed;

    std::vector<Individual> population(cfg.lambda + 1);
    for (auto& ind : population) {
        ind.genotype = cfg.mutation == MutationKind::Somo ? somo_seed(params, rng) : random_genotype(params, rng);
        ind.fitness = fitness(params, ind.genotype, table);
    }
    rec.evaluations = population.size();
    // fitness(NULL) is infinite, so the fittest initial individual always wins.
    Individual parent = select_fittest(population,
                                       Individual{{}, std::numeric_limits<std::size_t>::max()});

    std::uint64_t generation = 0;
    std::uint64_t last_improvement = 0;
    auto last_improvement_time = start;
    std::vector<Individual> offspring(cfg.lambda);

    while (parent.fitness > 0) {
        if (cfg.max_generations && generation >= *cfg.max_generations) break;
        if (cfg.max_evaluations && rec.evaluations + cfg.lambda > *cfg.max_evaluations) break;
        if (cfg.stall_generations && generation - last_improvement >= *cfg.stall_generations) break;
        if (cfg.wall_time_limit || cfg.stall_seconds) {
            if (cfg.wall_time_limit && seconds_since(start) >= *cfg.wall_time_limit) break;
            if (cfg.stall_seconds && seconds_since(last_improvement_time) >= *cfg.stall_seconds) break;
        }

        ++generation;
        for (auto& child : offspring) {
            child.genotype = mutate(cfg, parent.genotype, params, table, rng);
            child.fitness = fitness(params, child.genotype, table);
        }
        rec.evaluations += cfg.lambda;

        const Individual& alpha = select_fittest(offspring, parent);
        if (&alpha != &parent) {
            if (alpha.fitness < parent.fitness) {
                last_improvement = generation;
                last_improvement_time = Clock::now();
            }
            parent = alpha;
        }
    }

    rec.wall_time = seconds_since(start);
    rec.generations = generation;
    rec.final_fitness = parent.fitness;
    rec.success = parent.fitness == 0;
    rec.active_nodes = count_active_gates(params, parent.genotype);
    rec.best = std::move(parent.genotype);
    return rec;
}

RunRecord evolve(const EvolveConfig& config, const CgpParams& params, const TruthTable& table)
{
    Rng rng(config.seed);
    return evolve(config, params, table, rng);
}

std::uint64_t runs_required(double z, double p)
{
    if (p >= 1.0) return 1;
    if (p <= 0.0) throw std::domain_error("success probability must be positive");
    const double r = std::log(1.0 - z) / std::log(1.0 - p);
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(r - 1e-9)));
}

namespace {

std::vector<std::uint64_t> success_generations(std::span<const RunRecord> runs)
{
    std::vector<std::uint64_t> g;
    for (const auto& r : runs)
        if (r.success) g.push_back(r.generations);
    std::sort(g.begin(), g.end());
    return g;
}

}  // namespace

std::optional<std::uint64_t> computational_effort(std::span<const RunRecord> runs, double z, std::size_t lambda)
{
    const auto g = success_generations(runs);
    if (g.empty()) return std::nullopt;
    const double p = static_cast<double>(g.size()) / static_cast<double>(runs.size());
    return g.back() * lambda * runs_required(z, p);
}

std::optional<std::uint64_t> minimum_computational_effort(std::span<const RunRecord> runs, double z,
                                                          std::size_t lambda)
{
    const auto g = success_generations(runs);
    if (g.empty()) return std::nullopt;
    std::optional<std::uint64_t> best;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (k + 1 < g.size() && g[k + 1] == g[k]) continue;  // P(i) counts every run finished by i
        const double p = static_cast<double>(k + 1) / static_cast<double>(runs.size());
        const std::uint64_t e = g[k] * lambda * runs_required(z, p);
        if (!best || e < *best) best = e;
    }
    return best;
}

Summary Summary::of(std::vector<double> v)
{
    Summary s;
    s.count = v.size();
    if (v.empty()) return s;
    std::sort(v.begin(), v.end());
    s.min = v.front();
    s.max = v.back();
    const std::size_t n = v.size();
    s.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double sq = 0.0;
        for (double x : v) sq += (x - s.mean) * (x - s.mean);
        s.ci95 = 1.96 * std::sqrt(sq / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
    }
    return s;
}

ExperimentStats summarize(std::vector<RunRecord> runs, std::size_t lambda, double z)
{
    ExperimentStats st;
    std::vector<double> t, g, a;
    for (const auto& r : runs) {
        if (!r.success) continue;
        ++st.successes;
        t.push_back(r.wall_time);
        g.push_back(static_cast<double>(r.generations));
        a.push_back(static_cast<double>(r.active_nodes));
    }
    st.success_rate = runs.empty() ? 0.0 : static_cast<double>(st.successes) / static_cast<double>(runs.size());
    st.effort = computational_effort(runs, z, lambda);
    st.minimum_effort = minimum_computational_effort(runs, z, lambda);
    st.wall_time = Summary::of(std::move(t));
    st.generations = Summary::of(std::move(g));
    st.active_nodes = Summary::of(std::move(a));
    st.runs = std::move(runs);
    return st;
}

ExperimentStats run_batch(const EvolveConfig& config, const CgpParams& params, const TruthTable& table,
                          std::size_t n_runs, std::size_t jobs)
{
    if (n_runs < 1) throw ConfigError("at least one run is required");
    config.validate();
    std::vector<RunRecord> runs(n_runs);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n_runs; i = next++) {
            EvolveConfig cfg = config;
            cfg.seed = config.seed + i;
            runs[i] = evolve(cfg, params, table);
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(jobs, 1, n_runs);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    return summarize(std::move(runs), config.lambda);
}

std::string_view runs_csv_header() noexcept
{
    return "nc,run,seed,success,generations,evaluations,wall_time_s,active_nodes";
}

CsvRow make_csv_row(std::size_t nc, std::size_t run, const RunRecord& r, bool with_wall_time)
{
    return CsvRow{nc, run, r.seed, r.success, r.generations, r.evaluations, with_wall_time ? r.wall_time : 0.0,
                  r.active_nodes};
}

std::string format_csv_row(const CsvRow& row)
{
    char time[64];
    std::snprintf(time, sizeof time, "%.6f", row.wall_time_s);
    return std::to_string(row.nc) + ',' + std::to_string(row.run) + ',' + std::to_string(row.seed) + ',' +
           (row.success ? "1" : "0") + ',' + std::to_string(row.generations) + ',' +
           std::to_string(row.evaluations) + ',' + time + ',' + std::to_string(row.active_nodes);
}

namespace {

template <typename T>
T parse_field(std::string_view s)
{
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("malformed CSV field '" + std::string(s) + "'");
    return v;
}

}  // namespace

CsvRow parse_csv_row(std::string_view line)
{
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        f.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (f.size() != 8) throw std::runtime_error("expected 8 CSV fields, got " + std::to_string(f.size()));
    if (f[3] != "0" && f[3] != "1") throw std::runtime_error("success field must be 0 or 1");
    CsvRow r;
    r.nc = parse_field<std::size_t>(f[0]);
    r.run = parse_field<std::size_t>(f[1]);
    r.seed = parse_field<std::uint64_t>(f[2]);
    r.success = f[3] == "1";
    r.generations = parse_field<std::uint64_t>(f[4]);
    r.evaluations = parse_field<std::uint64_t>(f[5]);
    r.wall_time_s = std::stod(std::string(f[6]));
    r.active_nodes = parse_field<std::size_t>(f[7]);
    return r;
}

std::string_view summary_csv_header() noexcept
{
    return "nc,runs,successes,success_rate,effort,min_effort,"
           "gen_min,gen_mean,gen_ci95,gen_median,gen_max,"
           "time_min,time_mean,time_ci95,time_max,"
           "active_min,active_mean,active_ci95,active_max";
}

std::string format_summary_row(std::size_t nc, const ExperimentStats& s, bool with_wall_time)
{
    const auto opt = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string(); };
    char buf[512];
    const Summary& g = s.generations;
    const Summary& a = s.active_nodes;
    const Summary t = with_wall_time ? s.wall_time : Summary{};
    std::snprintf(buf, sizeof buf,
                  "%.4f,%s,%s,%.1f,%.1f,%.1f,%.1f,%.1f,%.6f,%.6f,%.6f,%.6f,%.1f,%.1f,%.1f,%.1f",
                  s.success_rate, opt(s.effort).c_str(), opt(s.minimum_effort).c_str(), g.min, g.mean, g.ci95,
                  g.median, g.max, t.min, t.mean, t.ci95, t.max, a.min, a.mean, a.ci95, a.max);
    return std::to_string(nc) + ',' + std::to_string(s.runs.size()) + ',' + std::to_string(s.successes) + ',' + buf;
}

}  // namespace cgp
