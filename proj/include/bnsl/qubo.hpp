#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bnsl/errors.hpp"
#include "bnsl/index_map.hpp"
#include "bnsl/score.hpp"

namespace bnsl {

/// Upper-triangular QUBO matrix for one BNSL instance, plus the penalty values
/// and the score/weight tables it was built from (kept so the exact
/// Hamiltonian, constants included, stays recoverable; empty when the matrix
/// was read back from a file).
struct QuboMatrix {
    VariableIndexMap index_map;
    int dim = 0;
    std::vector<double> coeff;  // dense dim x dim, entries below the diagonal stay 0

    std::vector<double> delta_max;
    double delta_trans = 0;
    double delta_consist = 0;

    ScoreTable scores;
    ScoreTable weights;
    double score_constant = 0;  // sum_i s_i(empty), the H_score term Q cannot carry

    static QuboMatrix zeros(const VariableIndexMap& map) {
        QuboMatrix q;
        q.index_map = map;
        q.dim = map.total;
        q.coeff.assign(static_cast<std::size_t>(q.dim) * q.dim, 0.0);
        return q;
    }

    double at(int i, int j) const { return coeff[static_cast<std::size_t>(i) * dim + j]; }

    void add(int i, int j, double v) {
        if (i > j) throw ConfigError("qubo add below diagonal");
        coeff[static_cast<std::size_t>(i) * dim + j] += v;
    }

    /// x^T Q x + hamiltonian_offset() equals the full H(d,y,r): the omitted
    /// constants are m^2 * delta_max per node plus the empty-set score weights.
    double hamiltonian_offset() const {
        double off = score_constant;
        for (double d : delta_max) off += d * index_map.m * index_map.m;
        return off;
    }
};

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// Sparse text export:
///   dim <total> n <n> m 2
///   <row> <col> <value>            one line per nonzero, row <= col
///   delta_max <i> <value>          one line per node
///   delta_trans <value>
///   delta_consist <value>
inline void write_qubo(std::ostream& out, const QuboMatrix& q) {
    out << "dim " << q.dim << " n " << q.index_map.n << " m " << q.index_map.m << "\n";
    for (int i = 0; i < q.dim; ++i)
        for (int j = i; j < q.dim; ++j)
            if (q.at(i, j) != 0.0)
                out << i << " " << j << " " << detail::format_double(q.at(i, j)) << "\n";
    for (std::size_t i = 0; i < q.delta_max.size(); ++i)
        out << "delta_max " << i << " " << detail::format_double(q.delta_max[i]) << "\n";
    out << "delta_trans " << detail::format_double(q.delta_trans) << "\n";
    out << "delta_consist " << detail::format_double(q.delta_consist) << "\n";
}

inline QuboMatrix read_qubo(std::istream& in) {
    std::string tok;
    int dim = 0, n = 0, m = 0;
    if (!(in >> tok) || tok != "dim" || !(in >> dim) || !(in >> tok) || tok != "n" || !(in >> n) ||
        !(in >> tok) || tok != "m" || !(in >> m))
        throw IoError("qubo file: bad header");
    if (m != 2) throw IoError("qubo file: only m = 2 is supported");
    QuboMatrix q = QuboMatrix::zeros(VariableIndexMap::for_nodes(n));
    if (q.dim != dim) throw IoError("qubo file: dimension does not match n");
    q.delta_max.assign(n, 0.0);

    while (in >> tok) {
        if (tok == "delta_max") {
            int i;
            double v;
            if (!(in >> i >> v) || i < 0 || i >= n) throw IoError("qubo file: bad delta_max line");
            q.delta_max[i] = v;
        } else if (tok == "delta_trans") {
            if (!(in >> q.delta_trans)) throw IoError("qubo file: bad delta_trans line");
        } else if (tok == "delta_consist") {
            if (!(in >> q.delta_consist)) throw IoError("qubo file: bad delta_consist line");
        } else {
            int row, col;
            double v;
            try {
                row = std::stoi(tok);
            } catch (...) {
                throw IoError("qubo file: unexpected token '" + tok + "'");
            }
            if (!(in >> col >> v)) throw IoError("qubo file: bad entry line");
            if (row < 0 || col < row || col >= dim) throw IoError("qubo file: entry out of range");
            q.coeff[static_cast<std::size_t>(row) * dim + col] = v;
        }
    }
    return q;
}

inline void write_qubo_file(const std::string& path, const QuboMatrix& q) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write qubo file: " + path);
    write_qubo(out, q);
}

inline QuboMatrix read_qubo_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open qubo file: " + path);
    return read_qubo(in);
}

/// Sidecar document naming every QUBO index: "d i j" | "y i l" | "r i j".
inline nlohmann::json index_roles_json(const VariableIndexMap& map) {
    nlohmann::json doc;
    doc["dim"] = map.total;
    doc["n"] = map.n;
    doc["m"] = map.m;
    doc["mu"] = map.mu;
    auto& roles = doc["roles"] = nlohmann::json::array();
    for (int idx = 0; idx < map.total; ++idx) roles.push_back(map.role_string(idx));
    return doc;
}

}  // namespace bnsl
