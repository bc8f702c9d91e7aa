#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bnsl/dataset.hpp"
#include "bnsl/encoder.hpp"
#include "bnsl/errors.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/rng.hpp"
#include "bnsl/solvers.hpp"

namespace bnsl {

/// All C(n,k) index sets, lexicographic, each ascending. k = n degenerates to
/// the single full problem.
inline std::vector<std::vector<int>> generate_subproblems(int n, int k) {
    if (k < 3 || k > n)
        throw ConfigError("subproblem size k must satisfy 3 <= k <= n, got k=" + std::to_string(k));
    std::vector<std::vector<int>> out;
    std::vector<int> combo(k);
    for (int i = 0; i < k; ++i) combo[i] = i;
    while (true) {
        out.push_back(combo);
        int pos = k - 1;
        while (pos >= 0 && combo[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++combo[pos];
        for (int i = pos + 1; i < k; ++i) combo[i] = combo[i - 1] + 1;
    }
    return out;
}

/// Column slice preserving row order and count.
inline Dataset project_dataset(const Dataset& data, const std::vector<int>& indices) {
    Dataset out;
    for (int idx : indices) {
        if (idx < 0 || idx >= data.num_vars())
            throw ConfigError("project_dataset: column index out of range");
        out.variable_names.push_back(data.variable_names[idx]);
        out.num_states.push_back(data.num_states[idx]);
    }
    const std::int64_t rows = data.num_rows();
    const int k = static_cast<int>(indices.size());
    out.cells.resize(static_cast<std::size_t>(rows) * k);
    for (std::int64_t r = 0; r < rows; ++r)
        for (int c = 0; c < k; ++c) out.cells[r * k + c] = data.at(r, indices[c]);
    return out;
}

/// Directed-edge evidence accumulated over subproblem solutions: C counts
/// appearances of (i,j), P counts subproblems holding both endpoints where
/// (i,j) was absent.
struct ReconstructionTally {
    int n = 0;
    std::vector<std::int64_t> c, p;  // row-major n x n

    explicit ReconstructionTally(int nodes = 0)
        : n(nodes),
          c(static_cast<std::size_t>(nodes) * nodes, 0),
          p(static_cast<std::size_t>(nodes) * nodes, 0) {}

    std::int64_t count(int i, int j) const { return c[static_cast<std::size_t>(i) * n + j]; }
    std::int64_t penalty(int i, int j) const { return p[static_cast<std::size_t>(i) * n + j]; }

    void add_solution(const std::vector<int>& indices, const Structure& solution) {
        const int k = static_cast<int>(indices.size());
        if (solution.n != k)
            throw ConfigError("tally: solution dimension does not match its index set");
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) {
                if (a == b) continue;
                auto& cell = solution.edge(a, b) ? c : p;
                cell[static_cast<std::size_t>(indices[a]) * n + indices[b]] += 1;
            }
    }
};

inline ReconstructionTally accumulate_tally(
    int n, const std::vector<std::pair<std::vector<int>, Structure>>& solutions) {
    ReconstructionTally tally(n);
    for (const auto& [indices, solution] : solutions) tally.add_solution(indices, solution);
    return tally;
}

/// Keep (i,j) iff it appeared at least once and strictly more often than its
/// reverse; the C_ij == C_ji > 0 tie keeps neither direction.
inline Structure reconstruct_strategy1(const ReconstructionTally& tally) {
    Structure g(tally.n);
    for (int i = 0; i < tally.n; ++i)
        for (int j = 0; j < tally.n; ++j)
            if (i != j && tally.count(i, j) > 0 && tally.count(i, j) > tally.count(j, i))
                g.set_edge(i, j);
    return g;
}

/// Keep (i,j) iff C_ij - P_ij > 0, i.e. present in a strict majority of the
/// subproblems containing both endpoints. Satisfying this implies strategy
/// 1's condition as well.
inline Structure reconstruct_strategy2(const ReconstructionTally& tally) {
    Structure g(tally.n);
    for (int i = 0; i < tally.n; ++i)
        for (int j = 0; j < tally.n; ++j)
            if (i != j && tally.count(i, j) - tally.penalty(i, j) > 0) g.set_edge(i, j);
    return g;
}

struct DivideOptions {
    int k = 3;
    int strategy = 2;  // the published experiments use strategy 2
    EncoderOptions encoder;
    SolverParams solver;
    int threads = 0;
    double subproblem_fraction = 1.0;  // < 1 solves a seeded random subset
};

struct DivideResult {
    Structure structure;
    ReconstructionTally tally;
    std::int64_t subproblem_count = 0;
    std::int64_t failed_subproblems = 0;
    bool is_dag = false;
    double formulation_seconds = 0;  // projection + matrix construction, summed
    double solve_seconds = 0;        // sampler time, summed over subproblems
};

/// Algorithm: enumerate the C(n,k) variable subsets, encode and solve each
/// projected subproblem, tally directed-edge evidence, reconstruct. Subproblem
/// s solves with seed derive_seed(seed, s), so the outcome is independent of
/// scheduling; a subproblem whose sampler returns no read contributes nothing.
inline DivideResult divide_et_impera(const Dataset& data, const Sampler& sampler,
                                     const DivideOptions& options) {
    const int n = data.num_vars();
    auto subsets = generate_subproblems(n, options.k);
    if (options.subproblem_fraction < 1.0) {
        if (options.subproblem_fraction <= 0.0)
            throw ConfigError("divide: subproblem fraction must be in (0, 1]");
        const auto keep = static_cast<std::size_t>(
            std::ceil(options.subproblem_fraction * static_cast<double>(subsets.size())));
        std::mt19937_64 rng(derive_seed(options.solver.seed, 0x5ab5e7u));
        std::shuffle(subsets.begin(), subsets.end(), rng);
        subsets.resize(std::max<std::size_t>(1, keep));
        std::sort(subsets.begin(), subsets.end());
    }

    const auto count = static_cast<std::int64_t>(subsets.size());
    std::vector<SolveResult> solved(count);
    std::vector<double> formulation(count, 0), solving(count, 0);
    const int workers = static_cast<int>(std::min<std::int64_t>(
        detail::resolve_threads(options.threads), count));

    auto run_range = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t s = lo; s < hi; ++s) {
            const auto t0 = std::chrono::steady_clock::now();
            const Dataset sub = project_dataset(data, subsets[s]);
            const QuboMatrix q = build_qubo(sub, options.encoder);
            const auto t1 = std::chrono::steady_clock::now();
            SolverParams params = options.solver;
            params.seed = derive_seed(options.solver.seed, static_cast<std::uint64_t>(s));
            if (workers > 1) params.threads = 1;  // outer pool owns the cores
            solved[s] = sampler.solve(q, params);
            const auto t2 = std::chrono::steady_clock::now();
            formulation[s] = std::chrono::duration<double>(t1 - t0).count();
            solving[s] = std::chrono::duration<double>(t2 - t1).count();
        }
    };
    if (workers <= 1) {
        run_range(0, count);
    } else {
        std::vector<std::thread> pool;
        const std::int64_t chunk = (count + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::int64_t lo = w * chunk, hi = std::min<std::int64_t>(lo + chunk, count);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    DivideResult res{Structure(n), ReconstructionTally(n), count, 0, false, 0, 0};
    const VariableIndexMap sub_map = VariableIndexMap::for_nodes(options.k);
    for (std::int64_t s = 0; s < count; ++s) {
        res.formulation_seconds += formulation[s];
        res.solve_seconds += solving[s];
        if (solved[s].reads.empty()) {
            ++res.failed_subproblems;
            continue;
        }
        res.tally.add_solution(subsets[s], decode_solution(solved[s].best_read().x, sub_map));
    }
    res.structure = options.strategy == 1 ? reconstruct_strategy1(res.tally)
                                          : reconstruct_strategy2(res.tally);
    res.is_dag = topological_order(res.structure).is_dag;
    return res;
}

/// Run manifest for one decomposition execution.
inline nlohmann::json divide_manifest_json(const DivideResult& res, int n, int k, int strategy,
                                           const std::string& solver_name,
                                           const SolverParams& params) {
    nlohmann::json doc;
    doc["n"] = n;
    doc["k"] = k;
    doc["strategy"] = strategy;
    doc["solver"] = solver_name;
    doc["params"] = {{"reads", params.reads},
                     {"sweeps", params.sweeps},
                     {"seed", params.seed},
                     {"threads", params.threads}};
    doc["subproblem_count"] = res.subproblem_count;
    doc["failed_subproblems"] = res.failed_subproblems;
    doc["formulation_seconds"] = res.formulation_seconds;
    doc["solve_seconds"] = res.solve_seconds;
    auto dump_counts = [&](const std::vector<std::int64_t>& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < res.tally.n; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int j = 0; j < res.tally.n; ++j) row.push_back(m[static_cast<std::size_t>(i) * res.tally.n + j]);
            rows.push_back(row);
        }
        return rows;
    };
    doc["tally"] = {{"C", dump_counts(res.tally.c)}, {"P", dump_counts(res.tally.p)}};
    nlohmann::json adj = nlohmann::json::array();
    for (int i = 0; i < res.structure.n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < res.structure.n; ++j) row.push_back(res.structure.edge(i, j) ? 1 : 0);
        adj.push_back(row);
    }
    doc["adjacency"] = adj;
    doc["is_dag"] = res.is_dag;
    return doc;
}

}  // namespace bnsl
