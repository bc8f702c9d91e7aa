#pragma once

#include <cstdint>
#include <vector>

#include "bnsl/errors.hpp"

namespace bnsl {

/// Directed graph over n nodes as a dense 0/1 adjacency matrix, no self-loops.
/// Acyclicity is not an invariant here: solver candidates may be cyclic.
struct Structure {
    int n = 0;
    std::vector<std::uint8_t> adj;  // row-major, adj[i*n+j] == 1 iff edge i->j

    Structure() = default;
    explicit Structure(int nodes) : n(nodes), adj(static_cast<std::size_t>(nodes) * nodes, 0) {}

    bool edge(int i, int j) const { return adj[static_cast<std::size_t>(i) * n + j] != 0; }
    void set_edge(int i, int j, bool present = true) {
        if (i == j) throw ConfigError("self-loop rejected");
        adj[static_cast<std::size_t>(i) * n + j] = present ? 1 : 0;
    }

    int in_degree(int j) const {
        int d = 0;
        for (int i = 0; i < n; ++i) d += edge(i, j);
        return d;
    }

    int edge_count() const {
        int c = 0;
        for (auto v : adj) c += v;
        return c;
    }

    bool operator==(const Structure&) const = default;
};

/// Result of a topological sort attempt. A cycle is a result, not an error:
/// `order` is complete iff `is_dag`, otherwise `cycle` holds a witness.
struct TopoResult {
    bool is_dag = false;
    std::vector<int> order;
    std::vector<int> cycle;
};

/// Kahn's algorithm with smallest-index-first tie-breaking, so the order is
/// deterministic. On a cycle, returns a witness walk within the stuck nodes.
inline TopoResult topological_order(const Structure& g) {
    const int n = g.n;
    std::vector<int> indeg(n, 0);
    for (int j = 0; j < n; ++j) indeg[j] = g.in_degree(j);

    TopoResult res;
    std::vector<std::uint8_t> done(n, 0);
    res.order.reserve(n);
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (!done[v] && indeg[v] == 0) {
                pick = v;
                break;
            }
        }
        if (pick < 0) break;  // remainder is cyclic
        done[pick] = 1;
        res.order.push_back(pick);
        for (int j = 0; j < n; ++j)
            if (g.edge(pick, j)) --indeg[j];
    }
    if (static_cast<int>(res.order.size()) == n) {
        res.is_dag = true;
        return res;
    }

    // Witness: walk predecessors inside the stuck set until a node repeats.
    int start = 0;
    while (done[start]) ++start;
    std::vector<int> walk;
    std::vector<int> seen_at(n, -1);
    int cur = start;
    while (seen_at[cur] < 0) {
        seen_at[cur] = static_cast<int>(walk.size());
        walk.push_back(cur);
        for (int i = 0; i < n; ++i) {
            if (!done[i] && g.edge(i, cur)) {
                cur = i;
                break;
            }
        }
    }
    res.cycle.assign(walk.begin() + seen_at[cur], walk.end());
    return res;
}

/// True iff a directed path from -> to exists (edges themselves count; a node
/// does not reach itself unless on a cycle).
inline bool has_path(const Structure& g, int from, int to) {
    const int n = g.n;
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<int> stack{from};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            if (g.edge(v, j) && !seen[j]) {
                if (j == to) return true;
                seen[j] = 1;
                stack.push_back(j);
            }
        }
    }
    return false;
}

}  // namespace bnsl
