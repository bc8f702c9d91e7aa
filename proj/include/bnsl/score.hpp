#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/errors.hpp"

namespace bnsl {

/// Dirichlet hyperparameter assignment rules. All alpha_ijk for a given
/// (variable, parent set) share one value.
enum class AlphaRule {
    inv_ri_qi,     // 1/(r_i * q_i), the default
    inv_ri,        // 1/r_i
    one,           // 1
    n_over_ri_qi,  // N/(r_i * q_i)
};

inline const char* to_string(AlphaRule rule) {
    switch (rule) {
        case AlphaRule::inv_ri_qi: return "inv_riqi";
        case AlphaRule::inv_ri: return "inv_ri";
        case AlphaRule::one: return "one";
        case AlphaRule::n_over_ri_qi: return "n_over_riqi";
    }
    return "?";
}

inline AlphaRule parse_alpha_rule(const std::string& s) {
    if (s == "inv_riqi") return AlphaRule::inv_ri_qi;
    if (s == "inv_ri") return AlphaRule::inv_ri;
    if (s == "one") return AlphaRule::one;
    if (s == "n_over_riqi") return AlphaRule::n_over_ri_qi;
    throw ConfigError("unknown alpha rule '" + s + "'");
}

inline double alpha_value(AlphaRule rule, int r_i, std::int64_t q, std::int64_t n_rows) {
    switch (rule) {
        case AlphaRule::inv_ri_qi: return 1.0 / (static_cast<double>(r_i) * q);
        case AlphaRule::inv_ri: return 1.0 / r_i;
        case AlphaRule::one: return 1.0;
        case AlphaRule::n_over_ri_qi: return static_cast<double>(n_rows) / (static_cast<double>(r_i) * q);
    }
    throw ConfigError("unknown alpha rule");
}

/// A candidate parent set with at most two members, canonically a < b.
/// a == -1 means empty; b == -1 means singleton {a}.
struct ParentSet {
    int a = -1;
    int b = -1;

    static ParentSet empty() { return {}; }
    static ParentSet single(int j) { return {j, -1}; }
    static ParentSet pair(int j, int k) { return {std::min(j, k), std::max(j, k)}; }

    int size() const { return (a >= 0) + (b >= 0); }
    bool contains(int v) const { return a == v || b == v; }
    bool operator==(const ParentSet&) const = default;
};

/// All parent sets of node i among n >= 3 variables with m = 2: the empty
/// set, every singleton, every pair, in that order, members ascending.
inline std::vector<ParentSet> enumerate_parent_sets(int n, int i) {
    if (n < 3) throw ConfigError("parent-set enumeration needs n >= 3");
    if (i < 0 || i >= n) throw ConfigError("parent-set enumeration: bad variable index");
    std::vector<ParentSet> sets;
    sets.reserve(1 + (n - 1) + (n - 1) * (n - 2) / 2);
    sets.push_back(ParentSet::empty());
    for (int j = 0; j < n; ++j)
        if (j != i) sets.push_back(ParentSet::single(j));
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            if (j != i && k != i) sets.push_back(ParentSet::pair(j, k));
    return sets;
}

namespace detail {

// Position of a parent set in the enumerate_parent_sets(n, i) order.
inline int parent_set_rank(int n, int i, const ParentSet& ps) {
    auto squeeze = [&](int v) { return v < i ? v : v - 1; };  // drop slot i
    if (ps.size() == 0) return 0;
    if (ps.size() == 1) return 1 + squeeze(ps.a);
    const int w = n - 1, a = squeeze(ps.a), b = squeeze(ps.b);
    return 1 + w + a * w - a * (a + 1) / 2 + (b - a - 1);
}

}  // namespace detail

/// Per-variable table over the canonical parent-set order; holds either the
/// local scores s_i(pi) or the inclusion-exclusion weights w_i(pi).
struct ScoreTable {
    int n = 0;
    std::vector<std::vector<double>> values;  // values[i][rank]

    static ScoreTable zeros(int n) {
        ScoreTable t;
        t.n = n;
        const int per_var = 1 + (n - 1) + (n - 1) * (n - 2) / 2;
        t.values.assign(n, std::vector<double>(per_var, 0.0));
        return t;
    }

    bool empty() const { return values.empty(); }
    double get(int i, const ParentSet& ps) const {
        return values[i][detail::parent_set_rank(n, i, ps)];
    }
    void set(int i, const ParentSet& ps, double v) {
        values[i][detail::parent_set_rank(n, i, ps)] = v;
    }
};

/// q for a parent set: the product of its members' state counts (1 if empty).
inline std::int64_t joint_state_count(const std::vector<int>& r, const ParentSet& ps) {
    std::int64_t q = 1;
    if (ps.a >= 0) q *= r[ps.a];
    if (ps.b >= 0) q *= r[ps.b];
    return q;
}

/// Mixed-radix joint state of the parent set in one dataset row; the smaller
/// parent index is the least significant digit, as in the CPT convention.
inline std::int64_t joint_state_of_row(const Dataset& data, std::int64_t row, const ParentSet& ps) {
    std::int64_t j = 0;
    if (ps.a >= 0) j = data.at(row, ps.a);
    if (ps.b >= 0) j += static_cast<std::int64_t>(data.at(row, ps.b)) * data.num_states[ps.a];
    return j;
}

/// N_ijk: rows where variable i is in state k and the parent set is in joint
/// state j. With an empty set there is a single joint state j = 0.
inline std::int64_t count_occurrences(const Dataset& data, int i, const ParentSet& ps,
                                      std::int64_t j, int k) {
    std::int64_t count = 0;
    const std::int64_t rows = data.num_rows();
    for (std::int64_t t = 0; t < rows; ++t)
        if (data.at(t, i) == k && joint_state_of_row(data, t, ps) == j) ++count;
    return count;
}

namespace detail {

// One pass over the dataset collecting all N_ijk for (i, ps) at once.
inline std::vector<std::int64_t> count_table(const Dataset& data, int i, const ParentSet& ps) {
    const int r_i = data.num_states[i];
    const std::int64_t q = joint_state_count(data.num_states, ps);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(q) * r_i, 0);
    const std::int64_t rows = data.num_rows();
    for (std::int64_t t = 0; t < rows; ++t)
        ++counts[joint_state_of_row(data, t, ps) * r_i + data.at(t, i)];
    return counts;
}

inline double score_from_counts(const std::vector<std::int64_t>& counts, std::int64_t q, int r_i,
                                double alpha) {
    // s_i(pi) = -sum_j [ lgamma(a_ij) - lgamma(N_ij + a_ij)
    //                    + sum_k ( lgamma(N_ijk + a_ijk) - lgamma(a_ijk) ) ]
    // with a_ij = r_i * alpha. Log-gamma keeps every term in range where the
    // plain gamma product overflows even for modest N.
    const double a_row = alpha * r_i;
    const double lg_alpha = std::lgamma(alpha);
    double sum = 0.0;
    for (std::int64_t j = 0; j < q; ++j) {
        std::int64_t n_row = 0;
        double inner = 0.0;
        for (int k = 0; k < r_i; ++k) {
            const std::int64_t c = counts[j * r_i + k];
            n_row += c;
            inner += std::lgamma(static_cast<double>(c) + alpha) - lg_alpha;
        }
        sum += std::lgamma(a_row) - std::lgamma(static_cast<double>(n_row) + a_row) + inner;
    }
    return -sum;
}

}  // namespace detail

/// Local score s_i(pi) of one (variable, parent set) pair.
inline double local_score(const Dataset& data, int i, const ParentSet& ps, AlphaRule rule) {
    const std::int64_t q = joint_state_count(data.num_states, ps);
    const double alpha = alpha_value(rule, data.num_states[i], q, data.num_rows());
    return detail::score_from_counts(detail::count_table(data, i, ps), q, data.num_states[i], alpha);
}

/// Scores for every variable and every parent set with |pi| <= 2.
inline ScoreTable compute_scores(const Dataset& data, AlphaRule rule) {
    const int n = data.num_vars();
    if (n < 3) throw ConfigError("score table needs n >= 3");
    ScoreTable s = ScoreTable::zeros(n);
    for (int i = 0; i < n; ++i) {
        const auto sets = enumerate_parent_sets(n, i);
        for (std::size_t k = 0; k < sets.size(); ++k)
            s.values[i][k] = local_score(data, i, sets[k], rule);
    }
    return s;
}

/// Inclusion-exclusion weights from the scores:
///   w_i(0) = s_i(0);  w_i({j}) = s_i({j}) - s_i(0);
///   w_i({j,k}) = s_i({j,k}) - s_i({j}) - s_i({k}) + s_i(0).
inline ScoreTable compute_weights(const ScoreTable& s) {
    const int n = s.n;
    ScoreTable w = ScoreTable::zeros(n);
    for (int i = 0; i < n; ++i) {
        const auto sets = enumerate_parent_sets(n, i);
        const double s0 = s.get(i, ParentSet::empty());
        for (std::size_t r = 0; r < sets.size(); ++r) {
            const ParentSet& ps = sets[r];
            if (ps.size() == 0)
                w.values[i][r] = s0;
            else if (ps.size() == 1)
                w.values[i][r] = s.get(i, ps) - s0;
            else
                w.values[i][r] = s.get(i, ps) - s.get(i, ParentSet::single(ps.a)) -
                                 s.get(i, ParentSet::single(ps.b)) + s0;
        }
    }
    return w;
}

/// Delta[j*n + i] estimates the largest score decrease obtainable by inserting
/// the arc j -> i:  Delta_ji = max{0, -w_i({j}) - sum_k min{0, w_i({j,k})}}.
inline std::vector<double> compute_deltas(const ScoreTable& w) {
    const int n = w.n;
    std::vector<double> delta(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double d = -w.get(i, ParentSet::single(j));
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                d -= std::min(0.0, w.get(i, ParentSet::pair(j, k)));
            }
            delta[static_cast<std::size_t>(j) * n + i] = std::max(0.0, d);
        }
    }
    return delta;
}

struct PenaltySet {
    std::vector<double> delta_max;  // per node
    double delta_trans = 0;
    double delta_consist = 0;
};

/// Penalties at the sufficiency bounds plus one:
///   delta_max[i] = max_j Delta_ji + 1,
///   delta_trans  = max over all arcs + 1,
///   delta_consist = (n-2) * delta_trans + 1   (the simplified bound; the
///   triple-indexed bound collapses because delta_trans is index-free).
/// `multiplier` uniformly scales all three for experimentation; 1 is faithful.
inline PenaltySet compute_penalties(const std::vector<double>& delta, int n,
                                    double multiplier = 1.0) {
    PenaltySet p;
    p.delta_max.assign(n, 0.0);
    double overall = 0.0;
    for (int i = 0; i < n; ++i) {
        double m = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) m = std::max(m, delta[static_cast<std::size_t>(j) * n + i]);
        p.delta_max[i] = (m + 1.0) * multiplier;
        overall = std::max(overall, m);
    }
    p.delta_trans = (overall + 1.0) * multiplier;
    p.delta_consist = (n - 2) * p.delta_trans + multiplier;
    return p;
}

}  // namespace bnsl
