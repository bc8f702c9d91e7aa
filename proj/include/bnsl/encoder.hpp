#pragma once

#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/errors.hpp"
#include "bnsl/qubo.hpp"
#include "bnsl/score.hpp"

namespace bnsl {

struct EncoderOptions {
    AlphaRule alpha_rule = AlphaRule::inv_ri_qi;
    double penalty_multiplier = 1.0;  // 1 = penalty bounds plus one, as published
};

/// Builds the m = 2 BNSL QUBO for a dataset: local scores, inclusion-exclusion
/// weights, penalty bounds, then the matrix fill. Every quadratic contribution
/// lands on the (min index, max index) cell, so the result is upper-triangular
/// by construction. Pure function of its inputs; byte-identical across runs.
///
/// The filled blocks, per node i:
///   score:  w_i({j}) on the d_ji diagonal, w_i({x,y}) on (d_xi, d_yi);
///   max:    expansion of delta_max_i * (m - d_i - y_i)^2 over the bits of
///           d_i and y_i, constant m^2 * delta_max_i omitted;
///   trans:  for i<j<k: +dt on r_ik, +dt on (r_ij,r_jk), -dt on (r_ij,r_ik)
///           and (r_ik,r_jk);
///   consist: for i<j: +dc on (d_ji,r_ij), +dc on d_ij, -dc on (d_ij,r_ij).
inline QuboMatrix build_qubo(const Dataset& data, const EncoderOptions& options = {}) {
    const int n = data.num_vars();
    if (n < 3) throw ConfigError("qubo encoder needs n >= 3");
    data.validate();

    QuboMatrix q = QuboMatrix::zeros(VariableIndexMap::for_nodes(n));
    const VariableIndexMap& map = q.index_map;

    q.scores = compute_scores(data, options.alpha_rule);
    q.weights = compute_weights(q.scores);
    const PenaltySet penalties =
        compute_penalties(compute_deltas(q.weights), n, options.penalty_multiplier);
    q.delta_max = penalties.delta_max;
    q.delta_trans = penalties.delta_trans;
    q.delta_consist = penalties.delta_consist;
    for (int i = 0; i < n; ++i) q.score_constant += q.weights.get(i, ParentSet::empty());

    const int m = map.m;
    for (int i = 0; i < n; ++i) {
        // score terms
        for (const ParentSet& ps : enumerate_parent_sets(n, i)) {
            if (ps.size() == 1) {
                const int idx = map.d_index(ps.a, i);
                q.add(idx, idx, q.weights.get(i, ps));
            } else if (ps.size() == 2) {
                q.add(map.d_index(ps.a, i), map.d_index(ps.b, i), q.weights.get(i, ps));
            }
        }

        // max-parent terms: bits of (m - d_i - y_i)^2 in ascending index order
        std::vector<int> bits;
        std::vector<double> c;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            bits.push_back(map.d_index(j, i));
            c.push_back(-1.0);
        }
        for (int l = 0; l < map.mu; ++l) {
            bits.push_back(map.y_index(i, l));
            c.push_back(-static_cast<double>(1 << l));
        }
        const double dmax = q.delta_max[i];
        for (std::size_t a = 0; a < bits.size(); ++a) {
            q.add(bits[a], bits[a], dmax * c[a] * c[a]);
            q.add(bits[a], bits[a], dmax * 2.0 * m * c[a]);
            for (std::size_t b = a + 1; b < bits.size(); ++b)
                q.add(bits[a], bits[b], dmax * 2.0 * c[a] * c[b]);
        }

        // cycle terms, written once per i < j
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                const int rij = map.r_index(i, j), rik = map.r_index(i, k), rjk = map.r_index(j, k);
                q.add(rik, rik, q.delta_trans);
                q.add(rij, rjk, q.delta_trans);
                q.add(rij, rik, -q.delta_trans);
                q.add(rik, rjk, -q.delta_trans);
            }
            const int rij = map.r_index(i, j);
            const int dij = map.d_index(i, j), dji = map.d_index(j, i);
            q.add(std::min(dji, rij), std::max(dji, rij), q.delta_consist);
            q.add(dij, dij, q.delta_consist);
            q.add(std::min(dij, rij), std::max(dij, rij), -q.delta_consist);
        }
    }
    return q;
}

}  // namespace bnsl
