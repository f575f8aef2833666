// cgp-somo: benchmark tables, single runs, n_c sweeps and circuit export.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cgp/engine.hpp"
#include "cgp/genome.hpp"
#include "cgp/truth_table.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TableSource {
    std::string pla;
    std::size_t parity = 0;
    std::vector<std::size_t> adder;
    std::vector<std::size_t> mult;
    bool carry = false;

    void add_to(CLI::App& app)
    {
        auto* group = app.add_option_group("table", "truth-table source (exactly one)");
        group->add_option("--table", pla, "PLA file")->check(CLI::ExistingFile);
        group->add_option("--parity", parity, "n-input odd parity")->check(CLI::Range(1, 20));
        group->add_option("--adder", adder, "a-bit + b-bit adder")->expected(2);
        group->add_option("--mult", mult, "a-bit x b-bit multiplier")->expected(2);
        group->require_option(1);
        app.add_flag("--carry", carry, "adder carry-in");
    }

    cgp::TruthTable load() const
    {
        if (!pla.empty()) {
            std::ifstream in(pla, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            try {
                return cgp::read_pla(ss.str());
            } catch (const cgp::ParseError& e) {
                throw UsageError(pla + ": " + e.what());
            }
        }
        try {
            if (parity) return cgp::parity_table(parity);
            if (!adder.empty()) return cgp::adder_table(adder[0], adder[1], carry);
            return cgp::multiplier_table(mult[0], mult[1]);
        } catch (const std::out_of_range& e) {
            throw UsageError(e.what());
        }
    }

    /// Built-in reference gate count N, when the benchmark has one.
    std::optional<std::size_t> reference() const
    {
        if (parity) return cgp::reference_gate_count(cgp::BenchmarkKind::Parity, parity);
        if (!adder.empty() && adder[0] == adder[1] && !carry)
            return cgp::reference_gate_count(cgp::BenchmarkKind::Adder, adder[0]);
        if (!mult.empty() && mult[0] == mult[1])
            return cgp::reference_gate_count(cgp::BenchmarkKind::Multiplier, mult[0]);
        return std::nullopt;
    }
};

struct RunOptions {
    std::string mutation = "somo";
    std::string fs = "full";
    double pf = 0.0;
    double pq = 1.0;
    std::size_t h = 1;
    std::size_t lambda = 1;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> max_gens;
    std::optional<std::uint64_t> max_evals;
    std::optional<double> time_limit;
    std::optional<double> stall_seconds;
    std::optional<std::uint64_t> stall_gens;
    bool wall_time = false;

    void add_to(CLI::App& app)
    {
        app.add_option("--mutation", mutation, "somo | sam | point")
            ->check(CLI::IsMember({"somo", "sam", "point"}))
            ->capture_default_str();
        app.add_option("--fs", fs, "function set: full | reduced")
            ->check(CLI::IsMember({"full", "reduced"}))
            ->capture_default_str();
        app.add_option("--pf", pf, "SOMO function-mutation probability")->capture_default_str();
        app.add_option("--pq", pq, "SOMO share of inactive nodes regenerated")->capture_default_str();
        app.add_option("--genes", h, "genes changed per point mutation (h)")->capture_default_str();
        app.add_option("--lambda", lambda, "offspring per generation")->capture_default_str();
        app.add_option("--seed", seed, "RNG seed")->capture_default_str();
        app.add_option("--max-gens", max_gens, "generation limit");
        app.add_option("--max-evals", max_evals, "evaluation limit");
        app.add_option("--time-limit", time_limit, "wall-clock limit in seconds");
        app.add_option("--stall-seconds", stall_seconds, "abort after this long without improvement");
        app.add_option("--stall-gens", stall_gens, "abort after this many generations without improvement");
        app.add_flag("--wall-time", wall_time, "write measured wall time (outputs stop being reproducible)");
    }

    cgp::EvolveConfig config() const
    {
        cgp::EvolveConfig c;
        c.lambda = lambda;
        c.mutation = *cgp::parse_mutation(mutation);
        c.somo.function_rate = pf;
        c.somo.inactive_ratio = pq;
        c.point_genes = h;
        c.seed = seed;
        c.max_generations = max_gens;
        c.max_evaluations = max_evals;
        c.wall_time_limit = time_limit;
        c.stall_seconds = stall_seconds;
        c.stall_generations = stall_gens;
        return c;
    }

    cgp::FunctionSet functions() const { return fs == "full" ? cgp::full_function_set() : cgp::reduced_function_set(); }
};

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::size_t> parse_list(const std::string& s)
{
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != item.size() || v == 0) throw UsageError("bad list entry '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

std::size_t default_jobs()
{
    if (const char* env = std::getenv("CGP_JOBS")) {
        try {
            return std::max<std::size_t>(1, std::stoul(env));
        } catch (const std::exception&) {
            throw UsageError("CGP_JOBS must be a positive integer");
        }
    }
    return 1;
}

std::string summary_path_for(const std::string& csv)
{
    const auto dot = csv.rfind('.');
    const auto slash = csv.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return csv + ".summary.csv";
    return csv.substr(0, dot) + ".summary" + csv.substr(dot);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cartesian genetic programming with semantically-oriented mutation"};
    app.require_subcommand(1);

    // gen-table
    TableSource gt_src;
    std::string gt_out;
    auto* gen = app.add_subcommand("gen-table", "write a benchmark truth table as PLA");
    gt_src.add_to(*gen);
    gen->add_option("-o,--output", gt_out, "output file (stdout if omitted)");

    // evolve
    TableSource ev_src;
    RunOptions ev_run;
    std::optional<std::size_t> ev_nc;
    std::string ev_out, ev_record, ev_dot, ev_netlist;
    auto* evolve = app.add_subcommand("evolve", "run one evolution");
    ev_src.add_to(*evolve);
    ev_run.add_to(*evolve);
    evolve->add_option("--nc", ev_nc, "number of nodes (default: reference gate count)");
    evolve->add_option("-o,--output", ev_out, "serialized chromosome");
    evolve->add_option("--record", ev_record, "run record as JSON");
    evolve->add_option("--dot", ev_dot, "Graphviz file of the best circuit");
    evolve->add_option("--netlist", ev_netlist, "BLIF netlist of the best circuit");

    // batch
    TableSource bt_src;
    RunOptions bt_run;
    std::string bt_multiples = "1,2,5,10,20,50,100,200,500,1000";
    std::string bt_nc;
    std::size_t bt_runs = 15;
    std::optional<std::size_t> bt_jobs;
    std::string bt_out, bt_summary;
    auto* batch = app.add_subcommand("batch", "independent runs over a grid of n_c values");
    bt_src.add_to(*batch);
    bt_run.add_to(*batch);
    auto* mult_opt = batch->add_option("--nc-multiples", bt_multiples, "n_c as multiples of the reference gate count")
                         ->capture_default_str();
    batch->add_option("--nc", bt_nc, "explicit comma-separated n_c values")->excludes(mult_opt);
    batch->add_option("--runs", bt_runs, "runs per n_c")->check(CLI::PositiveNumber)->capture_default_str();
    batch->add_option("--jobs", bt_jobs, "worker threads (default: $CGP_JOBS or 1)")->check(CLI::PositiveNumber);
    batch->add_option("-o,--output", bt_out, "per-run CSV")->required();
    batch->add_option("--summary", bt_summary, "summary CSV (default: <output>.summary.csv)");

    // export
    std::string ex_in, ex_dot, ex_netlist;
    auto* exp = app.add_subcommand("export", "convert a serialized chromosome");
    exp->add_option("--chromosome", ex_in, "chromosome file")->required()->check(CLI::ExistingFile);
    exp->add_option("--dot", ex_dot, "Graphviz output");
    exp->add_option("--netlist", ex_netlist, "BLIF output (stdout if no output given)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            const std::string pla = cgp::write_pla(gt_src.load());
            if (gt_out.empty())
                std::cout << pla;
            else
                write_file(gt_out, pla);
            return kExitOk;
        }

        if (evolve->parsed()) {
            const cgp::TruthTable table = ev_src.load();
            const std::size_t nc = ev_nc ? *ev_nc : ev_src.reference().value_or(0);
            if (nc == 0) throw UsageError("--nc is required for this table");
            const auto params = cgp::CgpParams::make(table.num_inputs(), table.num_outputs(), nc, ev_run.functions());
            const cgp::EvolveConfig cfg = ev_run.config();
            const cgp::RunRecord rec = cgp::evolve(cfg, params, table);

            const std::string chromosome = cgp::serialize(params, rec.best);
            const cgp::CircuitGraph graph = cgp::decode(rec.best, params);
            nlohmann::ordered_json j;
            j["seed"] = rec.seed;
            j["nc"] = nc;
            j["mutation"] = ev_run.mutation;
            j["success"] = rec.success;
            j["generations"] = rec.generations;
            j["evaluations"] = rec.evaluations;
            j["wall_time_s"] = ev_run.wall_time ? rec.wall_time : 0.0;
            j["final_fitness"] = rec.final_fitness;
            j["active_nodes"] = rec.active_nodes;
            j["chromosome"] = chromosome;

            if (!ev_out.empty()) write_file(ev_out, chromosome + "\n");
            if (!ev_record.empty()) write_file(ev_record, j.dump(2) + "\n");
            if (!ev_dot.empty()) write_file(ev_dot, cgp::to_dot(graph));
            if (!ev_netlist.empty()) write_file(ev_netlist, cgp::to_netlist(graph));
            std::cout << (rec.success ? "success" : "no solution") << " generations=" << rec.generations
                      << " evaluations=" << rec.evaluations << " fitness=" << rec.final_fitness
                      << " active=" << rec.active_nodes << "\n";
            return rec.success ? kExitOk : kExitFailed;
        }

        if (batch->parsed()) {
            const cgp::TruthTable table = bt_src.load();
            std::vector<std::size_t> grid;
            if (!bt_nc.empty()) {
                grid = parse_list(bt_nc);
            } else {
                const auto n = bt_src.reference();
                if (!n) throw UsageError("no reference gate count for this table; use --nc");
                for (std::size_t k : parse_list(bt_multiples)) grid.push_back(k * *n);
            }
            const cgp::EvolveConfig cfg = bt_run.config();
            const std::size_t jobs = bt_jobs ? *bt_jobs : default_jobs();

            std::string runs_csv = std::string(cgp::runs_csv_header()) + "\n";
            std::string summary_csv = std::string(cgp::summary_csv_header()) + "\n";
            for (std::size_t nc : grid) {
                const auto params =
                    cgp::CgpParams::make(table.num_inputs(), table.num_outputs(), nc, bt_run.functions());
                const cgp::ExperimentStats st = cgp::run_batch(cfg, params, table, bt_runs, jobs);
                for (std::size_t i = 0; i < st.runs.size(); ++i)
                    runs_csv += cgp::format_csv_row(cgp::make_csv_row(nc, i, st.runs[i], bt_run.wall_time)) + "\n";
                const std::string row = cgp::format_summary_row(nc, st, bt_run.wall_time);
                summary_csv += row + "\n";
                std::cout << "nc=" << nc << " success=" << st.successes << "/" << st.runs.size()
                          << " effort=" << (st.effort ? std::to_string(*st.effort) : std::string("-"))
                          << " median_gens=" << st.generations.median << "\n";
            }
            write_file(bt_out, runs_csv);
            write_file(bt_summary.empty() ? summary_path_for(bt_out) : bt_summary, summary_csv);
            return kExitOk;
        }

        if (exp->parsed()) {
            cgp::Chromosome ch;
            try {
                ch = cgp::deserialize(read_file(ex_in));
            } catch (const std::runtime_error& e) {
                throw UsageError(ex_in + ": " + e.what());
            }
            const cgp::CircuitGraph graph = cgp::decode(ch.genotype, ch.params);
            if (!ex_dot.empty()) write_file(ex_dot, cgp::to_dot(graph));
            if (!ex_netlist.empty()) write_file(ex_netlist, cgp::to_netlist(graph));
            if (ex_dot.empty() && ex_netlist.empty()) std::cout << cgp::to_netlist(graph);
            return kExitOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {  // ConfigError, GenotypeError
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
