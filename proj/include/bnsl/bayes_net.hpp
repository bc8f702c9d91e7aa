#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "bnsl/dataset.hpp"
#include "bnsl/errors.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/rng.hpp"

namespace bnsl {

/// One discrete node: r_i >= 2 states, parents sorted ascending by variable
/// index, and a CPT with one row per joint parent state.
///
/// Joint parent state j is the mixed-radix number over the sorted parent list
/// with the lowest-index parent as the least significant digit:
///   j = state[p0] + r_{p0} * (state[p1] + r_{p1} * ...)
/// The same convention indexes rows here and counts in the QUBO encoder.
struct Variable {
    std::string name;
    std::vector<std::string> states;
    std::vector<int> parents;
    std::vector<std::vector<double>> cpt;  // q_i rows x r_i columns

    int num_states() const { return static_cast<int>(states.size()); }

    /// q_i: one CPT row per joint parent state (1 when parentless).
    std::int64_t num_parent_states() const { return static_cast<std::int64_t>(cpt.size()); }
};

/// A discrete Bayesian network: the DAG plus every node's CPT.
struct BayesNet {
    std::string name;
    std::vector<Variable> variables;

    int num_vars() const { return static_cast<int>(variables.size()); }

    std::vector<int> state_counts() const {
        std::vector<int> r(variables.size());
        for (std::size_t i = 0; i < variables.size(); ++i) r[i] = variables[i].num_states();
        return r;
    }

    Structure structure() const {
        Structure g(num_vars());
        for (int i = 0; i < num_vars(); ++i)
            for (int p : variables[i].parents) g.set_edge(p, i);
        return g;
    }

    /// Mixed-radix joint parent state of node i under a full assignment.
    std::int64_t joint_parent_state(int i, const std::vector<int>& assignment) const {
        std::int64_t j = 0, mult = 1;
        for (int p : variables[i].parents) {
            j += assignment[p] * mult;
            mult *= variables[p].num_states();
        }
        return j;
    }

    void validate() const {
        const int n = num_vars();
        for (int i = 0; i < n; ++i) {
            const Variable& v = variables[i];
            if (v.num_states() < 2)
                throw ConfigError("variable '" + v.name + "': fewer than 2 states");
            std::int64_t q = 1;
            int prev = -1;
            for (int p : v.parents) {
                if (p < 0 || p >= n) throw ConfigError("variable '" + v.name + "': bad parent index");
                if (p == i) throw ConfigError("variable '" + v.name + "': self-parent");
                if (p <= prev)
                    throw ConfigError("variable '" + v.name + "': parents not strictly ascending");
                prev = p;
                q *= variables[p].num_states();
            }
            if (static_cast<std::int64_t>(v.cpt.size()) != q)
                throw ConfigError("variable '" + v.name + "': CPT must have " + std::to_string(q) +
                                  " rows, has " + std::to_string(v.cpt.size()));
            for (const auto& row : v.cpt) {
                if (static_cast<int>(row.size()) != v.num_states())
                    throw ConfigError("variable '" + v.name + "': CPT row width mismatch");
                double sum = 0;
                for (double p : row) {
                    if (p < 0) throw ConfigError("variable '" + v.name + "': negative probability");
                    sum += p;
                }
                if (std::abs(sum - 1.0) > 1e-9)
                    throw ConfigError("variable '" + v.name + "': CPT row not normalized");
            }
        }
        TopoResult topo = topological_order(structure());
        if (!topo.is_dag) throw ConfigError("network '" + name + "': edge set is cyclic");
    }
};

/// Parses the network-spec JSON document:
///   { "name": str, "variables": [ { "name", "states", "parents": [names], "cpt": [[..]] } ] }
/// Parents are referenced by variable name; the list must be ascending by
/// variable index so CPT rows match the mixed-radix convention above.
inline BayesNet load_network(const nlohmann::json& doc) {
    BayesNet net;
    try {
        net.name = doc.value("name", "");
        const auto& vars = doc.at("variables");
        std::vector<std::string> order;
        for (const auto& jv : vars) order.push_back(jv.at("name").get<std::string>());
        auto index_of = [&](const std::string& nm) {
            for (std::size_t i = 0; i < order.size(); ++i)
                if (order[i] == nm) return static_cast<int>(i);
            throw ConfigError("unknown parent variable '" + nm + "'");
        };
        for (const auto& jv : vars) {
            Variable v;
            v.name = jv.at("name").get<std::string>();
            v.states = jv.at("states").get<std::vector<std::string>>();
            for (const auto& pname : jv.at("parents"))
                v.parents.push_back(index_of(pname.get<std::string>()));
            v.cpt = jv.at("cpt").get<std::vector<std::vector<double>>>();
            net.variables.push_back(std::move(v));
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("network spec: malformed document: ") + e.what());
    }
    net.validate();
    return net;
}

inline BayesNet load_network(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("network spec: invalid JSON: ") + e.what());
    }
    return load_network(doc);
}

inline BayesNet load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open network file: " + path);
    return load_network(in);
}

/// P(x) = prod_i cpt_i[joint parent state][x_i].
inline double joint_probability(const BayesNet& net, const std::vector<int>& assignment) {
    if (static_cast<int>(assignment.size()) != net.num_vars())
        throw std::out_of_range("joint_probability: assignment length mismatch");
    for (int i = 0; i < net.num_vars(); ++i)
        if (assignment[i] < 0 || assignment[i] >= net.variables[i].num_states())
            throw std::out_of_range("joint_probability: state index out of range");
    double p = 1.0;
    for (int i = 0; i < net.num_vars(); ++i)
        p *= net.variables[i].cpt[net.joint_parent_state(i, assignment)][assignment[i]];
    return p;
}

/// Draws N rows by sampling variables in topological order, each conditioned
/// on its already-sampled parents. Bit-for-bit reproducible for a given seed.
inline Dataset ancestral_sample(const BayesNet& net, std::int64_t n_rows, std::uint64_t seed) {
    if (n_rows < 0) throw ConfigError("ancestral_sample: negative row count");
    const int n = net.num_vars();
    Dataset d;
    for (const auto& v : net.variables) d.variable_names.push_back(v.name);
    d.num_states = net.state_counts();
    d.cells.reserve(static_cast<std::size_t>(n_rows) * n);

    const std::vector<int> order = topological_order(net.structure()).order;
    std::mt19937_64 rng(derive_seed(seed, 0));
    std::vector<int> row(n, 0);
    for (std::int64_t s = 0; s < n_rows; ++s) {
        for (int v : order) {
            const auto& cpt_row = net.variables[v].cpt[net.joint_parent_state(v, row)];
            const double u = canonical(rng);
            double cum = 0.0;
            int k = 0;
            for (; k < static_cast<int>(cpt_row.size()) - 1; ++k) {
                cum += cpt_row[k];
                if (u < cum) break;
            }
            row[v] = k;
        }
        d.append_row(row);
    }
    return d;
}

/// Zero-variance dataset: floor(N*p) copies of every full state combination,
/// in mixed-radix enumeration order (variable 0 least significant). The result
/// may hold fewer than N rows; combinations with p < 1/N contribute nothing.
inline Dataset expected_dataset(const BayesNet& net, std::int64_t n_rows,
                                std::int64_t combination_cap = std::int64_t{1} << 24) {
    if (n_rows < 0) throw ConfigError("expected_dataset: negative row count");
    const int n = net.num_vars();
    std::int64_t total = 1;
    for (const auto& v : net.variables) {
        total *= v.num_states();
        if (total > combination_cap)
            throw CapError("expected_dataset: state-combination count exceeds cap " +
                           std::to_string(combination_cap));
    }

    Dataset d;
    for (const auto& v : net.variables) d.variable_names.push_back(v.name);
    d.num_states = net.state_counts();

    std::vector<int> combo(n, 0);
    for (std::int64_t c = 0; c < total; ++c) {
        const double p = joint_probability(net, combo);
        const auto copies = static_cast<std::int64_t>(std::floor(static_cast<double>(n_rows) * p));
        for (std::int64_t k = 0; k < copies; ++k) d.append_row(combo);
        for (int i = 0; i < n; ++i) {  // mixed-radix increment, variable 0 first
            if (++combo[i] < net.variables[i].num_states()) break;
            combo[i] = 0;
        }
    }
    return d;
}

/// Reads a dataset CSV resolving state-name cells against this network.
inline Dataset load_dataset_csv_file(const std::string& path, const BayesNet& net) {
    std::vector<std::vector<std::string>> names;
    for (const auto& v : net.variables) names.push_back(v.states);
    Dataset d = load_dataset_csv_file(path, &names);
    for (int c = 0; c < d.num_vars(); ++c)
        if (d.variable_names[c] != net.variables[c].name)
            throw ConfigError("dataset column '" + d.variable_names[c] +
                              "' does not match network variable '" + net.variables[c].name + "'");
    return d;
}

}  // namespace bnsl
