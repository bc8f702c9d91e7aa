#pragma once

#include <string>

#include "bnsl/errors.hpp"

namespace bnsl {

/// Layout of the QUBO vector for an n-node instance with m = 2:
/// first the n(n-1) edge bits d(i,j), i != j, lexicographic by (i,j);
/// then n*mu slack bits y(i,l) with mu = ceil(log2(m+1)) = 2;
/// then the n(n-1)/2 order bits r(i,j), i < j, lexicographic.
struct VariableIndexMap {
    int n = 0;
    int m = 2;
    int mu = 2;
    int total = 0;

    static VariableIndexMap for_nodes(int n) {
        if (n < 2) throw ConfigError("index map needs at least 2 nodes");
        VariableIndexMap map;
        map.n = n;
        map.total = n * (n - 1) + 2 * n + n * (n - 1) / 2;
        return map;
    }

    int d_count() const { return n * (n - 1); }
    int y_count() const { return n * mu; }
    int r_count() const { return n * (n - 1) / 2; }

    /// Bit for the arc from -> to.
    int d_index(int from, int to) const {
        return from * (n - 1) + (to < from ? to : to - 1);
    }

    /// Bit l (0 = least significant) of node i's slack value y_i.
    int y_index(int i, int l) const { return d_count() + i * mu + l; }

    /// Order bit for the pair i < j: 1 iff i precedes j.
    int r_index(int i, int j) const {
        return d_count() + y_count() + i * n - i * (i + 1) / 2 + (j - i - 1);
    }

    struct Role {
        char kind;  // 'd', 'y' or 'r'
        int a;
        int b;
    };

    Role role(int idx) const {
        if (idx < d_count()) {
            const int from = idx / (n - 1), rem = idx % (n - 1);
            return {'d', from, rem < from ? rem : rem + 1};
        }
        idx -= d_count();
        if (idx < y_count()) return {'y', idx / mu, idx % mu};
        idx -= y_count();
        for (int i = 0; i < n; ++i) {
            const int row = n - 1 - i;
            if (idx < row) return {'r', i, i + 1 + idx};
            idx -= row;
        }
        throw std::out_of_range("index beyond QUBO dimension");
    }

    std::string role_string(int idx) const {
        const Role r = role(idx);
        return std::string(1, r.kind) + " " + std::to_string(r.a) + " " + std::to_string(r.b);
    }
};

}  // namespace bnsl
