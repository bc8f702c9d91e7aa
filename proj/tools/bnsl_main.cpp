// Command-line front end: dataset generation, QUBO encoding, solving,
// divide-et-impera decomposition, and evaluation against a ground truth.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bnsl/bnsl.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitCap = 4;

struct CommonArgs {
    std::string net_path;
    std::string data_path;
    std::string method = "sample";
    std::int64_t n_rows = 10000;
    std::uint64_t seed = 0;
    std::string alpha_rule = "inv_riqi";
    double penalty_mult = 1.0;
    int threads = 0;
};

struct SolveArgs {
    std::string qubo_path;
    std::string solver = "sa";
    std::int64_t reads = 100;
    std::int64_t sweeps = 256;
    std::int64_t runs = 1;
    bool include_reads = false;
};

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw bnsl::IoError("cannot write output file: " + path);
    out << doc.dump(2) << "\n";
}

bnsl::Dataset obtain_dataset(const CommonArgs& args, const bnsl::BayesNet* net) {
    if (!args.data_path.empty()) {
        if (net) return bnsl::load_dataset_csv_file(args.data_path, *net);
        return bnsl::load_dataset_csv_file(args.data_path);
    }
    if (!net)
        throw bnsl::ConfigError("need --data, or --net to generate a dataset from");
    if (args.method == "sample") return bnsl::ancestral_sample(*net, args.n_rows, args.seed);
    if (args.method == "expected") return bnsl::expected_dataset(*net, args.n_rows);
    throw bnsl::ConfigError("unknown generation method '" + args.method + "'");
}

json params_json(const bnsl::SolverParams& p, const std::string& solver) {
    return json{{"solver", solver},
                {"reads", p.reads},
                {"sweeps", p.sweeps},
                {"seed", p.seed},
                {"threads", p.threads}};
}

int cmd_generate(const CommonArgs& args, const std::string& out_path) {
    const bnsl::BayesNet net = bnsl::load_network_file(args.net_path);
    const bnsl::Dataset data = obtain_dataset(args, &net);
    bnsl::save_dataset_csv_file(out_path, data);
    std::cout << "generated rows=" << data.num_rows() << " method=" << args.method
              << " out=" << out_path << "\n";
    return 0;
}

int cmd_encode(const CommonArgs& args, const std::string& out_path) {
    std::optional<bnsl::BayesNet> net;
    if (!args.net_path.empty()) net = bnsl::load_network_file(args.net_path);
    const bnsl::Dataset data = obtain_dataset(args, net ? &*net : nullptr);

    bnsl::EncoderOptions options;
    options.alpha_rule = bnsl::parse_alpha_rule(args.alpha_rule);
    options.penalty_multiplier = args.penalty_mult;

    const auto start = std::chrono::steady_clock::now();
    const bnsl::QuboMatrix q = bnsl::build_qubo(data, options);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    bnsl::write_qubo_file(out_path, q);
    write_json_file(out_path + ".map.json", bnsl::index_roles_json(q.index_map));
    std::cout << "encoded dim=" << q.dim << " n=" << q.index_map.n
              << " build_seconds=" << elapsed.count() << " out=" << out_path << "\n";
    return 0;
}

int cmd_solve(const CommonArgs& args, const SolveArgs& sargs, const std::string& out_path) {
    std::optional<bnsl::BayesNet> net;
    if (!args.net_path.empty()) net = bnsl::load_network_file(args.net_path);

    bnsl::QuboMatrix q;
    if (!sargs.qubo_path.empty()) {
        q = bnsl::read_qubo_file(sargs.qubo_path);
    } else {
        bnsl::EncoderOptions options;
        options.alpha_rule = bnsl::parse_alpha_rule(args.alpha_rule);
        options.penalty_multiplier = args.penalty_mult;
        q = bnsl::build_qubo(obtain_dataset(args, net ? &*net : nullptr), options);
    }

    const auto sampler = bnsl::make_sampler(sargs.solver);
    bnsl::SolverParams params;
    params.reads = sargs.reads;
    params.sweeps = sargs.sweeps;
    params.threads = args.threads;

    std::optional<bnsl::Structure> truth;
    double expected_energy = std::numeric_limits<double>::quiet_NaN();
    if (net && net->num_vars() == q.index_map.n) {
        truth = net->structure();
        expected_energy = bnsl::energy(q, bnsl::encode_expected(*truth, q));
    }

    json doc;
    doc["config"] = params_json(params, sargs.solver);
    doc["config"]["runs"] = sargs.runs;
    doc["config"]["alpha_rule"] = args.alpha_rule;
    if (std::isfinite(expected_energy)) doc["expected_energy"] = expected_energy;
    auto& runs_doc = doc["runs"] = json::array();

    std::vector<bnsl::RunOutcome> outcomes;
    for (std::int64_t r = 0; r < sargs.runs; ++r) {
        params.seed = bnsl::derive_seed(args.seed, static_cast<std::uint64_t>(r));
        const bnsl::SolveResult result = sampler->solve(q, params);
        json run_doc = bnsl::solve_result_to_json(result, sargs.include_reads);
        if (truth) {
            bnsl::RunOutcome outcome;
            outcome.found = bnsl::decode_solution(result.best_read().x, q.index_map);
            outcome.energy = result.best_read().energy;
            outcome.expected_energy = expected_energy;
            const auto conf = bnsl::edge_confusion(outcome.found, *truth);
            run_doc["correct_edges"] = conf.correct;
            run_doc["wrong_edges"] = conf.wrong;
            outcomes.push_back(std::move(outcome));
        }
        runs_doc.push_back(std::move(run_doc));
    }

    if (truth) {
        const bnsl::EvalReport rep = bnsl::aggregate(*truth, outcomes);
        doc["eval"] = bnsl::eval_report_to_json(rep);
        std::cout << "solved runs=" << sargs.runs << " success_rate=" << rep.success_rate
                  << " average_result=" << rep.average_result << " out=" << out_path << "\n";
    } else {
        std::cout << "solved runs=" << sargs.runs
                  << " best_energy=" << runs_doc.front()["best_energy"].get<double>()
                  << " out=" << out_path << "\n";
    }
    write_json_file(out_path, doc);
    return 0;
}

int cmd_divide(const CommonArgs& args, const SolveArgs& sargs, int k, int strategy,
               double fraction, const std::string& out_path, const std::string& csv_path) {
    std::optional<bnsl::BayesNet> net;
    if (!args.net_path.empty()) net = bnsl::load_network_file(args.net_path);
    const bnsl::Dataset data = obtain_dataset(args, net ? &*net : nullptr);

    const auto sampler = bnsl::make_sampler(sargs.solver);
    bnsl::DivideOptions options;
    options.k = k;
    options.strategy = strategy;
    options.subproblem_fraction = fraction;
    options.encoder.alpha_rule = bnsl::parse_alpha_rule(args.alpha_rule);
    options.encoder.penalty_multiplier = args.penalty_mult;
    options.solver.reads = sargs.reads;
    options.solver.sweeps = sargs.sweeps;
    options.threads = args.threads;

    std::optional<bnsl::Structure> truth;
    if (net) truth = net->structure();

    json doc;
    doc["config"] = params_json(options.solver, sargs.solver);
    doc["config"]["runs"] = sargs.runs;
    doc["config"]["k"] = k;
    doc["config"]["strategy"] = strategy;
    doc["config"]["alpha_rule"] = args.alpha_rule;
    auto& runs_doc = doc["runs"] = json::array();

    const auto total_start = std::chrono::steady_clock::now();
    std::vector<bnsl::RunOutcome> outcomes;
    for (std::int64_t r = 0; r < sargs.runs; ++r) {
        options.solver.seed = bnsl::derive_seed(args.seed, static_cast<std::uint64_t>(r));
        const bnsl::DivideResult result = bnsl::divide_et_impera(data, *sampler, options);
        json manifest = bnsl::divide_manifest_json(result, data.num_vars(), k, strategy,
                                                   sargs.solver, options.solver);
        if (truth) {
            const auto conf = bnsl::edge_confusion(result.structure, *truth);
            manifest["correct_edges"] = conf.correct;
            manifest["wrong_edges"] = conf.wrong;
            outcomes.push_back({result.structure, std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN()});
        }
        runs_doc.push_back(std::move(manifest));
    }
    const std::chrono::duration<double> total = std::chrono::steady_clock::now() - total_start;
    doc["total_seconds"] = total.count();

    if (truth) {
        const bnsl::EvalReport rep = bnsl::aggregate(*truth, outcomes);
        doc["eval"] = bnsl::eval_report_to_json(rep);
        std::cout << "divide k=" << k << " runs=" << sargs.runs
                  << " sensitivity=" << rep.sensitivity << " specificity=" << rep.specificity
                  << " out=" << out_path << "\n";
        if (!csv_path.empty()) {
            const bool fresh = !std::ifstream(csv_path).good();
            std::ofstream csv(csv_path, std::ios::app);
            if (!csv) throw bnsl::IoError("cannot write csv file: " + csv_path);
            if (fresh) csv << bnsl::eval_report_csv_header() << "\n";
            const std::string problem = net ? net->name : "unknown";
            csv << bnsl::eval_report_csv_row(rep, problem, k, sargs.solver) << "\n";
        }
    } else {
        std::cout << "divide k=" << k << " runs=" << sargs.runs << " out=" << out_path << "\n";
    }
    write_json_file(out_path, doc);
    return 0;
}

bnsl::Structure structure_from_report_item(const json& item, int n) {
    bnsl::Structure g(n);
    if (item.contains("adjacency")) {
        const auto& adj = item.at("adjacency");
        if (static_cast<int>(adj.size()) != n)
            throw bnsl::ConfigError("report adjacency size does not match network");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && adj.at(i).at(j).get<int>()) g.set_edge(i, j);
        return g;
    }
    if (item.contains("best_assignment")) {
        const auto map = bnsl::VariableIndexMap::for_nodes(n);
        const std::string bits = item.at("best_assignment").get<std::string>();
        if (static_cast<int>(bits.size()) != map.total)
            throw bnsl::ConfigError("report assignment length does not match network");
        std::vector<std::uint8_t> x(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) x[i] = bits[i] == '1';
        return bnsl::decode_solution(x, map);
    }
    throw bnsl::ConfigError("report item has neither 'adjacency' nor 'best_assignment'");
}

int cmd_evaluate(const std::string& net_path, const std::string& report_path,
                 const std::string& out_path) {
    const bnsl::BayesNet net = bnsl::load_network_file(net_path);
    const bnsl::Structure truth = net.structure();

    std::ifstream in(report_path);
    if (!in) throw bnsl::IoError("cannot open report file: " + report_path);
    json report;
    try {
        in >> report;
    } catch (const json::exception& e) {
        throw bnsl::IoError(std::string("report: invalid JSON: ") + e.what());
    }

    const double expected =
        report.value("expected_energy", std::numeric_limits<double>::quiet_NaN());
    std::vector<bnsl::RunOutcome> outcomes;
    auto add_item = [&](const json& item) {
        bnsl::RunOutcome outcome;
        outcome.found = structure_from_report_item(item, net.num_vars());
        outcome.energy = item.value("best_energy", std::numeric_limits<double>::quiet_NaN());
        outcome.expected_energy = expected;
        outcomes.push_back(std::move(outcome));
    };
    if (report.contains("runs"))
        for (const auto& item : report.at("runs")) add_item(item);
    else
        add_item(report);

    const bnsl::EvalReport rep = bnsl::aggregate(truth, outcomes);
    write_json_file(out_path, bnsl::eval_report_to_json(rep));
    std::cout << "evaluated runs=" << rep.runs << " sensitivity=" << rep.sensitivity
              << " specificity=" << rep.specificity << " out=" << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian-network structure learning as QUBO: encode, solve, decompose, evaluate"};
    app.require_subcommand(1);

    CommonArgs args;
    SolveArgs sargs;
    std::string out_path, csv_path, report_path;
    int k = 3, strategy = 2;
    double fraction = 1.0;

    auto add_common = [&](CLI::App* cmd, bool net_required) {
        auto* net = cmd->add_option("--net", args.net_path, "network spec JSON");
        if (net_required) net->required();
        cmd->add_option("--seed", args.seed, "master RNG seed");
        cmd->add_option("--threads", args.threads, "worker thread cap (0 = hardware)");
    };
    auto add_data = [&](CLI::App* cmd) {
        cmd->add_option("--data", args.data_path, "dataset CSV (else generated from --net)");
        cmd->add_option("--method", args.method, "generation method: sample | expected")
            ->check(CLI::IsMember({"sample", "expected"}));
        cmd->add_option("-N,--rows", args.n_rows, "dataset size for generation");
    };
    auto add_encoder = [&](CLI::App* cmd) {
        cmd->add_option("--alpha-rule", args.alpha_rule, "inv_riqi | inv_ri | one | n_over_riqi")
            ->check(CLI::IsMember({"inv_riqi", "inv_ri", "one", "n_over_riqi"}));
        cmd->add_option("--penalty-mult", args.penalty_mult, "uniform penalty scale (default 1)");
    };
    auto add_solver = [&](CLI::App* cmd) {
        cmd->add_option("--solver", sargs.solver, "sa | es")
            ->check(CLI::IsMember({"sa", "es"}));
        cmd->add_option("--reads", sargs.reads, "reads per solve");
        cmd->add_option("--sweeps", sargs.sweeps, "SA sweeps per read");
        cmd->add_option("--runs", sargs.runs, "independent runs");
    };

    auto* generate = app.add_subcommand("generate", "sample or expected dataset from a network");
    add_common(generate, true);
    add_data(generate);
    generate->add_option("--out", out_path, "output CSV path")->required();

    auto* encode = app.add_subcommand("encode", "build and export the QUBO matrix");
    add_common(encode, false);
    add_data(encode);
    add_encoder(encode);
    encode->add_option("--out", out_path, "output QUBO path (sidecar <out>.map.json)")->required();

    auto* solve = app.add_subcommand("solve", "solve one instance, optionally scored vs truth");
    add_common(solve, false);
    add_data(solve);
    add_encoder(solve);
    add_solver(solve);
    solve->add_option("--qubo", sargs.qubo_path, "pre-built QUBO file (skips encoding)");
    solve->add_flag("--include-reads", sargs.include_reads, "embed every read in the report");
    solve->add_option("--out", out_path, "output report JSON")->required();

    auto* divide = app.add_subcommand("divide", "divide-et-impera decomposition run");
    add_common(divide, false);
    add_data(divide);
    add_encoder(divide);
    add_solver(divide);
    divide->add_option("--k", k, "variables per subproblem")->required();
    divide->add_option("--strategy", strategy, "reconstruction strategy 1 | 2")
        ->check(CLI::IsMember({1, 2}));
    divide->add_option("--subproblem-fraction", fraction,
                       "solve a seeded random subset of subproblems (default 1 = all)");
    divide->add_option("--csv", csv_path, "append a sweep row to this CSV");
    divide->add_option("--out", out_path, "output report JSON")->required();

    auto* evaluate = app.add_subcommand("evaluate", "score a report against a truth network");
    evaluate->add_option("--net", args.net_path, "truth network JSON")->required();
    evaluate->add_option("--report", report_path, "solve/divide report JSON")->required();
    evaluate->add_option("--out", out_path, "output EvalReport JSON")->required();

    try {
        app.parse(argc, argv);
        if (generate->parsed()) return cmd_generate(args, out_path);
        if (encode->parsed()) return cmd_encode(args, out_path);
        if (solve->parsed()) return cmd_solve(args, sargs, out_path);
        if (divide->parsed())
            return cmd_divide(args, sargs, k, strategy, fraction, out_path, csv_path);
        if (evaluate->parsed()) return cmd_evaluate(args.net_path, report_path, out_path);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    } catch (const bnsl::CapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const bnsl::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const bnsl::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
