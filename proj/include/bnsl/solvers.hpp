#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bnsl/errors.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/index_map.hpp"
#include "bnsl/qubo.hpp"
#include "bnsl/rng.hpp"

namespace bnsl {

struct SolverParams {
    std::int64_t reads = 100;
    std::int64_t sweeps = 256;   // SA only
    std::uint64_t seed = 0;
    double t_start = 0;          // 0 = auto: max |Q entry|
    double t_end = 0;            // 0 = auto: 1e-3 * min nonzero |Q entry|
    int threads = 0;             // 0 = hardware concurrency

    void validate() const {
        if (reads < 1) throw ConfigError("solver params: reads must be >= 1");
        if (sweeps < 1) throw ConfigError("solver params: sweeps must be >= 1");
    }
};

struct Read {
    std::vector<std::uint8_t> x;
    double energy = 0;
};

/// All reads of one solve, sorted ascending by (energy, assignment).
struct SolveResult {
    std::vector<Read> reads;
    std::size_t best = 0;
    std::int64_t occurrences_of_best = 0;

    const Read& best_read() const { return reads[best]; }
};

inline constexpr double kEnergyRelTol = 1e-9;

/// x^T Q x over the upper triangle (diagonal = linear coefficients).
inline double energy(const QuboMatrix& q, const std::vector<std::uint8_t>& x) {
    if (static_cast<int>(x.size()) != q.dim)
        throw std::invalid_argument("energy: assignment length mismatch");
    std::vector<int> on;
    on.reserve(x.size());
    for (int i = 0; i < q.dim; ++i)
        if (x[i]) on.push_back(i);
    double e = 0.0;
    for (std::size_t a = 0; a < on.size(); ++a) {
        const double* row = q.coeff.data() + static_cast<std::size_t>(on[a]) * q.dim;
        e += row[on[a]];
        for (std::size_t b = a + 1; b < on.size(); ++b) e += row[on[b]];
    }
    return e;
}

/// Ising form over z in {-1,+1}: E(z) = sum h_i z_i + sum_{i<j} J_ij z_i z_j.
struct IsingModel {
    int dim = 0;
    std::vector<double> h;
    std::vector<double> j;  // dense upper triangle
    double offset = 0;

    double coupling(int a, int b) const { return j[static_cast<std::size_t>(a) * dim + b]; }
};

/// Exact change of variables x_i = (1 + z_i) / 2, so that for every spin
/// vector, ising_energy(z) + offset == energy(Q, x(z)).
inline IsingModel qubo_to_ising(const QuboMatrix& q) {
    IsingModel m;
    m.dim = q.dim;
    m.h.assign(q.dim, 0.0);
    m.j.assign(static_cast<std::size_t>(q.dim) * q.dim, 0.0);
    for (int i = 0; i < q.dim; ++i) {
        m.h[i] += q.at(i, i) / 2;
        m.offset += q.at(i, i) / 2;
        for (int jj = i + 1; jj < q.dim; ++jj) {
            const double v = q.at(i, jj);
            if (v == 0.0) continue;
            m.j[static_cast<std::size_t>(i) * q.dim + jj] = v / 4;
            m.h[i] += v / 4;
            m.h[jj] += v / 4;
            m.offset += v / 4;
        }
    }
    return m;
}

inline double ising_energy(const IsingModel& m, const std::vector<int>& z) {
    double e = 0.0;
    for (int i = 0; i < m.dim; ++i) {
        e += m.h[i] * z[i];
        for (int jj = i + 1; jj < m.dim; ++jj) e += m.coupling(i, jj) * z[i] * z[jj];
    }
    return e;
}

/// Adjacency from the d block; y and r bits are dropped.
inline Structure decode_solution(const std::vector<std::uint8_t>& x, const VariableIndexMap& map) {
    if (static_cast<int>(x.size()) != map.total)
        throw std::invalid_argument("decode_solution: assignment length mismatch");
    Structure g(map.n);
    for (int i = 0; i < map.n; ++i)
        for (int jj = 0; jj < map.n; ++jj)
            if (i != jj && x[map.d_index(i, jj)]) g.set_edge(i, jj);
    return g;
}

namespace detail {

// Order from reverse DFS finish times; roots and neighbours scanned ascending.
// Used when the d graph is cyclic and some cycle penalty is unavoidable.
inline std::vector<int> dfs_finish_order(const Structure& g) {
    const int n = g.n;
    std::vector<std::uint8_t> state(n, 0);
    std::vector<int> finish;
    finish.reserve(n);
    std::vector<std::pair<int, int>> stack;
    for (int root = 0; root < n; ++root) {
        if (state[root]) continue;
        stack.emplace_back(root, 0);
        state[root] = 1;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            int child = -1;
            for (int j = next; j < n; ++j) {
                if (g.edge(v, j) && !state[j]) {
                    child = j;
                    break;
                }
            }
            if (child >= 0) {
                next = child + 1;
                state[child] = 1;
                stack.emplace_back(child, 0);
            } else {
                finish.push_back(v);
                stack.pop_back();
            }
        }
    }
    std::reverse(finish.begin(), finish.end());
    return finish;
}

}  // namespace detail

/// Best-case completion of an edge assignment, the ES building block:
/// y_i = max(0, m - in_degree(i)) cancels H_max wherever possible, and the r
/// bits come from a total order compatible with d. For an acyclic d the graph
/// is completed one pair at a time (i -> j unless a path j ~> i exists), which
/// yields a full order and zero cycle penalty; for a cyclic d the order falls
/// back to reverse DFS finish times and the transitivity penalty stands.
inline std::vector<std::uint8_t> complete_assignment(const std::vector<std::uint8_t>& d,
                                                     const VariableIndexMap& map) {
    if (static_cast<int>(d.size()) != map.d_count())
        throw std::invalid_argument("complete_assignment: d length mismatch");
    const int n = map.n;
    std::vector<std::uint8_t> x(map.total, 0);
    std::copy(d.begin(), d.end(), x.begin());

    Structure g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && d[map.d_index(i, j)]) g.set_edge(i, j);

    for (int i = 0; i < n; ++i) {
        const int y = std::max(0, map.m - g.in_degree(i));
        for (int l = 0; l < map.mu; ++l)
            if ((y >> l) & 1) x[map.y_index(i, l)] = 1;
    }

    std::vector<int> order;
    const TopoResult topo = topological_order(g);
    if (topo.is_dag) {
        Structure completed = g;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (has_path(completed, j, i))
                    completed.set_edge(j, i);
                else
                    completed.set_edge(i, j);
            }
        order = topological_order(completed).order;
    } else {
        order = detail::dfs_finish_order(g);
    }

    std::vector<int> pos(n, 0);
    for (int p = 0; p < n; ++p) pos[order[p]] = p;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (pos[i] < pos[j]) x[map.r_index(i, j)] = 1;
    return x;
}

namespace detail {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

inline bool assignment_less(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline void finalize_reads(SolveResult& res) {
    std::sort(res.reads.begin(), res.reads.end(), [](const Read& a, const Read& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return assignment_less(a.x, b.x);
    });
    res.best = 0;
    const double best = res.reads.front().energy;
    const double tol = kEnergyRelTol * std::max(1.0, std::abs(best));
    res.occurrences_of_best = 0;
    for (const Read& r : res.reads)
        if (std::abs(r.energy - best) <= tol) ++res.occurrences_of_best;
}

// Geometric temperature ladder; auto bounds are scale-aware in the matrix.
inline std::pair<double, double> sa_schedule(const QuboMatrix& q, const SolverParams& p) {
    double t0 = p.t_start, t1 = p.t_end;
    if (t0 <= 0 || t1 <= 0) {
        double max_abs = 0, min_abs = 0;
        for (double v : q.coeff) {
            if (v == 0.0) continue;
            const double a = std::abs(v);
            max_abs = std::max(max_abs, a);
            min_abs = min_abs == 0 ? a : std::min(min_abs, a);
        }
        if (max_abs == 0) max_abs = 1.0;
        if (min_abs == 0) min_abs = 1.0;
        if (t0 <= 0) t0 = max_abs;
        if (t1 <= 0) t1 = 1e-3 * min_abs;
    }
    t1 = std::min(t1, t0);
    return {t0, t1};
}

inline Read sa_single_read(const QuboMatrix& q, const std::vector<double>& sym,
                           std::int64_t sweeps, double t0, double t1, std::mt19937_64& rng) {
    const int dim = q.dim;
    std::vector<std::uint8_t> x(dim);
    for (int i = 0; i < dim; ++i) x[i] = static_cast<std::uint8_t>(rng() & 1);

    // local fields: flipping bit i changes the energy by (1 - 2 x_i) * g_i
    std::vector<double> g(dim);
    for (int i = 0; i < dim; ++i) {
        double acc = q.at(i, i);
        const double* row = sym.data() + static_cast<std::size_t>(i) * dim;
        for (int j = 0; j < dim; ++j)
            if (x[j]) acc += row[j];
        g[i] = acc;
    }

    const double ratio = sweeps > 1 ? std::pow(t1 / t0, 1.0 / static_cast<double>(sweeps - 1)) : 1.0;
    double temp = sweeps > 1 ? t0 : t1;
    for (std::int64_t s = 0; s < sweeps; ++s, temp *= ratio) {
        const double inv_t = 1.0 / temp;
        for (int i = 0; i < dim; ++i) {
            const double de = (x[i] ? -1.0 : 1.0) * g[i];
            if (de > 0 && canonical(rng) >= std::exp(-de * inv_t)) continue;
            const double sign = x[i] ? -1.0 : 1.0;
            x[i] ^= 1;
            const double* row = sym.data() + static_cast<std::size_t>(i) * dim;
            for (int j = 0; j < dim; ++j) g[j] += sign * row[j];
        }
    }
    return Read{std::move(x), 0.0};
}

}  // namespace detail

/// Simulated annealing: `reads` independent restarts of single-bit Metropolis
/// sweeps under a geometric schedule. Read r draws its own generator from
/// derive_seed(seed, r), so results do not depend on thread count or
/// scheduling; reported energies are recomputed exactly from Q.
inline SolveResult solve_sa(const QuboMatrix& q, const SolverParams& params) {
    params.validate();
    const auto [t0, t1] = detail::sa_schedule(q, params);
    const int dim = q.dim;

    // symmetrized off-diagonal matrix for O(1) flip deltas
    std::vector<double> sym(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            const double v = q.at(i, j);
            sym[static_cast<std::size_t>(i) * dim + j] = v;
            sym[static_cast<std::size_t>(j) * dim + i] = v;
        }

    SolveResult res;
    res.reads.resize(params.reads);
    const int workers = std::min<std::int64_t>(detail::resolve_threads(params.threads), params.reads);
    auto run_range = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t r = lo; r < hi; ++r) {
            std::mt19937_64 rng(derive_seed(params.seed, static_cast<std::uint64_t>(r)));
            Read read = detail::sa_single_read(q, sym, params.sweeps, t0, t1, rng);
            read.energy = energy(q, read.x);
            res.reads[r] = std::move(read);
        }
    };
    if (workers <= 1) {
        run_range(0, params.reads);
    } else {
        std::vector<std::thread> pool;
        const std::int64_t chunk = (params.reads + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::int64_t lo = w * chunk, hi = std::min<std::int64_t>(lo + chunk, params.reads);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& t : pool) t.join();
    }
    detail::finalize_reads(res);
    return res;
}

struct EsOptions {
    int max_d_bits = 24;  // enumeration cap in edge bits, not nodes
    int threads = 0;
};

/// Optimized exhaustive search: enumerate only the 2^(n(n-1)) edge
/// assignments, complete each with the best y/r setup, and keep the global
/// minimum. Exact up to completion optimality; deterministic regardless of
/// the number of worker threads.
inline SolveResult solve_es(const QuboMatrix& q, const EsOptions& options = {}) {
    const VariableIndexMap& map = q.index_map;
    const int nd = map.d_count();
    if (nd > options.max_d_bits)
        throw CapError("exhaustive search: " + std::to_string(nd) + " edge bits exceed cap " +
                       std::to_string(options.max_d_bits));
    const std::uint64_t total = std::uint64_t{1} << nd;
    const int workers = static_cast<int>(
        std::min<std::uint64_t>(detail::resolve_threads(options.threads), total));

    struct Local {
        double best_e = 0;
        std::vector<std::uint8_t> best_x;
        std::int64_t near_best = 0;
    };
    std::vector<Local> locals(workers);

    auto run_range = [&](int w, std::uint64_t lo, std::uint64_t hi) {
        Local& loc = locals[w];
        std::vector<std::uint8_t> d(nd);
        for (std::uint64_t mask = lo; mask < hi; ++mask) {
            for (int b = 0; b < nd; ++b) d[b] = static_cast<std::uint8_t>((mask >> b) & 1);
            std::vector<std::uint8_t> x = complete_assignment(d, map);
            const double e = energy(q, x);
            if (loc.best_x.empty()) {
                loc.best_e = e;
                loc.best_x = std::move(x);
                loc.near_best = 1;
                continue;
            }
            const double tol = kEnergyRelTol * std::max(1.0, std::abs(std::min(e, loc.best_e)));
            if (e < loc.best_e) {
                loc.near_best = (loc.best_e - e <= tol) ? loc.near_best + 1 : 1;
                loc.best_e = e;
                loc.best_x = std::move(x);
            } else if (e - loc.best_e <= tol) {
                ++loc.near_best;
                if (e == loc.best_e && detail::assignment_less(x, loc.best_x)) loc.best_x = std::move(x);
            }
        }
    };

    if (workers <= 1) {
        run_range(0, 0, total);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (total + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::uint64_t lo = w * chunk, hi = std::min<std::uint64_t>(lo + chunk, total);
            if (lo < hi) pool.emplace_back(run_range, w, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    const Local* winner = nullptr;
    for (const Local& loc : locals) {
        if (loc.best_x.empty()) continue;
        if (!winner || loc.best_e < winner->best_e ||
            (loc.best_e == winner->best_e && detail::assignment_less(loc.best_x, winner->best_x)))
            winner = &loc;
    }

    SolveResult res;
    res.reads.push_back(Read{winner->best_x, winner->best_e});
    res.best = 0;
    res.occurrences_of_best = 0;
    const double tol = kEnergyRelTol * std::max(1.0, std::abs(winner->best_e));
    for (const Local& loc : locals)
        if (!loc.best_x.empty() && std::abs(loc.best_e - winner->best_e) <= tol)
            res.occurrences_of_best += loc.near_best;
    return res;
}

/// Uniform sampler contract; annealer-backed implementations plug in here.
class Sampler {
  public:
    virtual ~Sampler() = default;
    virtual std::string name() const = 0;
    virtual SolveResult solve(const QuboMatrix& q, const SolverParams& params) const = 0;
};

class SimulatedAnnealingSampler final : public Sampler {
  public:
    std::string name() const override { return "sa"; }
    SolveResult solve(const QuboMatrix& q, const SolverParams& params) const override {
        return solve_sa(q, params);
    }
};

class ExhaustiveSearchSampler final : public Sampler {
  public:
    explicit ExhaustiveSearchSampler(int max_d_bits = 24) : max_d_bits_(max_d_bits) {}
    std::string name() const override { return "es"; }
    SolveResult solve(const QuboMatrix& q, const SolverParams& params) const override {
        return solve_es(q, EsOptions{max_d_bits_, params.threads});
    }

  private:
    int max_d_bits_;
};

using SamplerFactory = std::function<std::unique_ptr<Sampler>()>;

inline std::map<std::string, SamplerFactory>& sampler_registry() {
    static std::map<std::string, SamplerFactory> reg = {
        {"sa", [] { return std::make_unique<SimulatedAnnealingSampler>(); }},
        {"es", [] { return std::make_unique<ExhaustiveSearchSampler>(); }},
    };
    return reg;
}

inline void register_sampler(const std::string& name, SamplerFactory factory) {
    sampler_registry()[name] = std::move(factory);
}

inline std::unique_ptr<Sampler> make_sampler(const std::string& name) {
    auto& reg = sampler_registry();
    auto it = reg.find(name);
    if (it == reg.end()) throw ConfigError("unknown sampler '" + name + "'");
    return it->second();
}

inline std::string assignment_string(const std::vector<std::uint8_t>& x) {
    std::string s(x.size(), '0');
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) s[i] = '1';
    return s;
}

inline nlohmann::json solve_result_to_json(const SolveResult& res, bool include_reads = false) {
    nlohmann::json doc;
    doc["best_energy"] = res.best_read().energy;
    doc["best_assignment"] = assignment_string(res.best_read().x);
    doc["occurrences_of_best"] = res.occurrences_of_best;
    if (include_reads) {
        auto& reads = doc["reads"] = nlohmann::json::array();
        for (const Read& r : res.reads)
            reads.push_back({{"assignment", assignment_string(r.x)}, {"energy", r.energy}});
    }
    return doc;
}

}  // namespace bnsl
