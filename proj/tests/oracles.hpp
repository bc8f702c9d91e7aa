// Test-only reference implementations, written independently of the library's
// encode/solve paths: straightforward per-cell counting, the gamma-product
// marginal likelihood in extended precision, a direct Hamiltonian evaluator,
// and naive energy/brute-force minimizers.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "bnsl/bnsl.hpp"

namespace oracle {

using PairKey = std::pair<int, int>;  // (-1,-1) empty, (j,-1) singleton, (j,k) pair j<k

inline std::vector<PairKey> all_parent_sets(int n, int i) {
    std::vector<PairKey> sets{{-1, -1}};
    for (int j = 0; j < n; ++j)
        if (j != i) sets.push_back({j, -1});
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            if (j != i && k != i) sets.push_back({j, k});
    return sets;
}

inline std::int64_t set_q(const std::vector<int>& r, PairKey ps) {
    std::int64_t q = 1;
    if (ps.first >= 0) q *= r[ps.first];
    if (ps.second >= 0) q *= r[ps.second];
    return q;
}

// N_ijk by full scan, decoding the joint parent state per row from scratch.
inline std::int64_t ref_count(const bnsl::Dataset& data, int i, PairKey ps, std::int64_t j, int k) {
    std::int64_t count = 0;
    for (std::int64_t t = 0; t < data.num_rows(); ++t) {
        if (data.at(t, i) != k) continue;
        if (ps.first >= 0) {
            const int ja = static_cast<int>(j % data.num_states[ps.first]);
            if (data.at(t, ps.first) != ja) continue;
            if (ps.second >= 0) {
                const int jb = static_cast<int>(j / data.num_states[ps.first]);
                if (data.at(t, ps.second) != jb) continue;
            }
        }
        ++count;
    }
    return count;
}

inline double ref_alpha(bnsl::AlphaRule rule, int r_i, std::int64_t q, std::int64_t n_rows) {
    switch (rule) {
        case bnsl::AlphaRule::inv_ri_qi: return 1.0 / (double(r_i) * double(q));
        case bnsl::AlphaRule::inv_ri: return 1.0 / r_i;
        case bnsl::AlphaRule::one: return 1.0;
        case bnsl::AlphaRule::n_over_ri_qi: return double(n_rows) / (double(r_i) * double(q));
    }
    return 0;
}

inline double ref_local_score(const bnsl::Dataset& data, int i, PairKey ps, bnsl::AlphaRule rule) {
    const std::int64_t q = set_q(data.num_states, ps);
    const int r_i = data.num_states[i];
    const double a = ref_alpha(rule, r_i, q, data.num_rows());
    double sum = 0;
    for (std::int64_t j = 0; j < q; ++j) {
        std::int64_t n_j = 0;
        for (int k = 0; k < r_i; ++k) n_j += ref_count(data, i, ps, j, k);
        sum += std::lgamma(a * r_i) - std::lgamma(a * r_i + double(n_j));
        for (int k = 0; k < r_i; ++k) {
            const double n_jk = double(ref_count(data, i, ps, j, k));
            sum += std::lgamma(n_jk + a) - std::lgamma(a);
        }
    }
    return -sum;
}

// The family term of the gamma-product marginal likelihood, in long double so
// the plain (log-free) product form stays representable on tiny datasets.
inline long double ref_family_product(const bnsl::Dataset& data, int i, PairKey ps,
                                      bnsl::AlphaRule rule) {
    const std::int64_t q = set_q(data.num_states, ps);
    const int r_i = data.num_states[i];
    const long double a = ref_alpha(rule, r_i, q, data.num_rows());
    long double prod = 1.0L;
    for (std::int64_t j = 0; j < q; ++j) {
        std::int64_t n_j = 0;
        for (int k = 0; k < r_i; ++k) n_j += ref_count(data, i, ps, j, k);
        prod *= tgammal(a * r_i) / tgammal(a * r_i + (long double)n_j);
        for (int k = 0; k < r_i; ++k) {
            const long double n_jk = (long double)ref_count(data, i, ps, j, k);
            prod *= tgammal(n_jk + a) / tgammal(a);
        }
    }
    return prod;
}

struct RefTables {
    int n = 0;
    std::vector<std::map<PairKey, double>> s, w;
    std::vector<double> delta_max;
    double delta_trans = 0, delta_consist = 0;
};

inline RefTables ref_tables(const bnsl::Dataset& data, bnsl::AlphaRule rule,
                            double multiplier = 1.0) {
    RefTables t;
    t.n = data.num_vars();
    t.s.resize(t.n);
    t.w.resize(t.n);
    for (int i = 0; i < t.n; ++i)
        for (PairKey ps : all_parent_sets(t.n, i)) t.s[i][ps] = ref_local_score(data, i, ps, rule);
    for (int i = 0; i < t.n; ++i) {
        const double s0 = t.s[i][{-1, -1}];
        for (PairKey ps : all_parent_sets(t.n, i)) {
            if (ps.first < 0)
                t.w[i][ps] = s0;
            else if (ps.second < 0)
                t.w[i][ps] = t.s[i][ps] - s0;
            else
                t.w[i][ps] = t.s[i][ps] - t.s[i][{ps.first, -1}] - t.s[i][{ps.second, -1}] + s0;
        }
    }
    std::vector<double> delta(std::size_t(t.n) * t.n, 0.0);
    for (int i = 0; i < t.n; ++i)
        for (int j = 0; j < t.n; ++j) {
            if (i == j) continue;
            double d = -t.w[i][{j, -1}];
            for (int k = 0; k < t.n; ++k) {
                if (k == i || k == j) continue;
                d -= std::min(0.0, t.w[i][{std::min(j, k), std::max(j, k)}]);
            }
            delta[std::size_t(j) * t.n + i] = std::max(0.0, d);
        }
    t.delta_max.assign(t.n, 0.0);
    double overall = 0;
    for (int i = 0; i < t.n; ++i) {
        double m = 0;
        for (int j = 0; j < t.n; ++j)
            if (j != i) m = std::max(m, delta[std::size_t(j) * t.n + i]);
        t.delta_max[i] = (m + 1.0) * multiplier;
        overall = std::max(overall, m);
    }
    t.delta_trans = (overall + 1.0) * multiplier;
    t.delta_consist = (t.n - 2) * t.delta_trans + multiplier;
    return t;
}

struct HamiltonianParts {
    double score = 0, max = 0, trans = 0, consist = 0;
    double total() const { return score + max + trans + consist; }
};

// Term-by-term H(d,y,r), constants included; index extraction goes through the
// public map, everything else is recomputed here.
inline HamiltonianParts ref_hamiltonian(const std::vector<std::uint8_t>& x,
                                        const bnsl::VariableIndexMap& map, const RefTables& t) {
    const int n = map.n;
    HamiltonianParts h;
    auto d = [&](int a, int b) { return double(x[map.d_index(a, b)]); };

    for (int i = 0; i < n; ++i) {
        h.score += t.w[i].at({-1, -1});
        for (int j = 0; j < n; ++j)
            if (j != i) h.score += t.w[i].at({j, -1}) * d(j, i);
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                if (j != i && k != i) h.score += t.w[i].at({j, k}) * d(j, i) * d(k, i);

        double deg = 0;
        for (int j = 0; j < n; ++j)
            if (j != i) deg += d(j, i);
        const double y = double(x[map.y_index(i, 0)]) + 2.0 * double(x[map.y_index(i, 1)]);
        const double slack = double(map.m) - deg - y;
        h.max += t.delta_max[i] * slack * slack;
    }

    auto r = [&](int a, int b) { return double(x[map.r_index(a, b)]); };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k)
                h.trans += t.delta_trans *
                           (r(i, k) + r(i, j) * r(j, k) - r(i, j) * r(i, k) - r(j, k) * r(i, k));
            h.consist += t.delta_consist * (d(j, i) * r(i, j) + d(i, j) - d(i, j) * r(i, j));
        }
    return h;
}

inline double naive_energy(const bnsl::QuboMatrix& q, const std::vector<std::uint8_t>& x) {
    double e = 0;
    for (int i = 0; i < q.dim; ++i)
        for (int j = i; j < q.dim; ++j) e += q.at(i, j) * x[i] * x[j];
    return e;
}

// Global minimum over all 2^dim assignments; only for tiny dims.
inline std::pair<double, std::vector<std::uint8_t>> brute_force_min(const bnsl::QuboMatrix& q) {
    const std::uint64_t total = std::uint64_t{1} << q.dim;
    double best = 0;
    std::vector<std::uint8_t> best_x(q.dim, 0), x(q.dim);
    bool first = true;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (int b = 0; b < q.dim; ++b) x[b] = std::uint8_t((mask >> b) & 1);
        const double e = bnsl::energy(q, x);
        if (first || e < best) {
            best = e;
            best_x = x;
            first = false;
        }
    }
    return {best, best_x};
}

inline bnsl::Dataset random_dataset(int n, const std::vector<int>& r, std::int64_t rows,
                                    std::uint64_t seed) {
    bnsl::Dataset d;
    for (int i = 0; i < n; ++i) d.variable_names.push_back("v" + std::to_string(i));
    d.num_states = r;
    std::mt19937_64 rng(seed);
    for (std::int64_t t = 0; t < rows; ++t)
        for (int i = 0; i < n; ++i)
            d.cells.push_back(static_cast<int>(rng() % std::uint64_t(r[i])));
    return d;
}

inline bnsl::QuboMatrix random_qubo(int dim, std::uint64_t seed, double density = 0.6) {
    // index map is a placeholder here; only the coefficients matter
    int n = 2;
    while (bnsl::VariableIndexMap::for_nodes(n).total < dim) ++n;
    bnsl::QuboMatrix q = bnsl::QuboMatrix::zeros(bnsl::VariableIndexMap::for_nodes(n));
    q.dim = dim;
    q.coeff.assign(std::size_t(dim) * dim, 0.0);
    q.delta_max.assign(q.index_map.n, 0.0);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
            if (bnsl::canonical(rng) < density)
                q.coeff[std::size_t(i) * dim + j] = bnsl::canonical(rng) * 20.0 - 10.0;
    return q;
}

}  // namespace oracle
