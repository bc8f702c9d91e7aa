#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "bnsl/errors.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/qubo.hpp"
#include "bnsl/solvers.hpp"

namespace bnsl {

/// QUBO assignment encoding a known structure: its d bits plus the best y/r
/// completion (the ES rule). A node with more than m parents keeps a positive
/// max-Hamiltonian residue, so other structures may score better than truth.
inline std::vector<std::uint8_t> encode_expected(const Structure& truth, const QuboMatrix& q) {
    const VariableIndexMap& map = q.index_map;
    if (truth.n != map.n)
        throw std::invalid_argument("encode_expected: structure/matrix dimension mismatch");
    std::vector<std::uint8_t> d(map.d_count(), 0);
    for (int i = 0; i < map.n; ++i)
        for (int j = 0; j < map.n; ++j)
            if (i != j && truth.edge(i, j)) d[map.d_index(i, j)] = 1;
    return complete_assignment(d, map);
}

struct EdgeConfusion {
    int correct = 0;  // directed edges in found and in truth
    int wrong = 0;    // directed edges in found but not in truth
};

inline EdgeConfusion edge_confusion(const Structure& found, const Structure& truth) {
    if (found.n != truth.n) throw std::invalid_argument("edge_confusion: size mismatch");
    EdgeConfusion out;
    for (int i = 0; i < found.n; ++i)
        for (int j = 0; j < found.n; ++j) {
            if (i == j || !found.edge(i, j)) continue;
            (truth.edge(i, j) ? out.correct : out.wrong) += 1;
        }
    return out;
}

/// One solver run to evaluate. Energies may be NaN when the run has no single
/// QUBO image (decomposition runs); the ratio metric is then skipped.
struct RunOutcome {
    Structure found;
    double energy = std::numeric_limits<double>::quiet_NaN();
    double expected_energy = std::numeric_limits<double>::quiet_NaN();
};

struct EvalReport {
    std::int64_t runs = 0;
    int n = 0;
    int true_edges = 0;
    double success_rate = 0;    // runs whose structure equals truth exactly
    double average_result = 0;  // mean energy(found)/energy(expected); >1 means
                                // lower energy than the expected solution
    std::vector<int> correct_per_run;
    std::vector<int> wrong_per_run;
    std::int64_t unique_correct = 0;  // union over runs
    std::int64_t unique_wrong = 0;
    double sensitivity = 0;  // mean correct / true edges
    double specificity = 0;  // (negatives - mean wrong) / negatives
};

inline EvalReport aggregate(const Structure& truth, const std::vector<RunOutcome>& runs) {
    if (runs.empty()) throw ConfigError("aggregate: no runs");
    EvalReport rep;
    rep.runs = static_cast<std::int64_t>(runs.size());
    rep.n = truth.n;
    rep.true_edges = truth.edge_count();

    std::set<std::pair<int, int>> correct_union, wrong_union;
    std::int64_t exact = 0;
    double ratio_sum = 0;
    std::int64_t ratio_count = 0;
    double correct_sum = 0, wrong_sum = 0;
    for (const RunOutcome& run : runs) {
        const EdgeConfusion conf = edge_confusion(run.found, truth);
        rep.correct_per_run.push_back(conf.correct);
        rep.wrong_per_run.push_back(conf.wrong);
        correct_sum += conf.correct;
        wrong_sum += conf.wrong;
        if (run.found == truth) ++exact;
        if (std::isfinite(run.energy) && std::isfinite(run.expected_energy)) {
            ratio_sum += run.energy / run.expected_energy;
            ++ratio_count;
        }
        for (int i = 0; i < truth.n; ++i)
            for (int j = 0; j < truth.n; ++j) {
                if (i == j || !run.found.edge(i, j)) continue;
                (truth.edge(i, j) ? correct_union : wrong_union).emplace(i, j);
            }
    }
    rep.success_rate = static_cast<double>(exact) / static_cast<double>(rep.runs);
    rep.average_result = ratio_count ? ratio_sum / static_cast<double>(ratio_count)
                                     : std::numeric_limits<double>::quiet_NaN();
    rep.unique_correct = static_cast<std::int64_t>(correct_union.size());
    rep.unique_wrong = static_cast<std::int64_t>(wrong_union.size());

    const double mean_correct = correct_sum / static_cast<double>(rep.runs);
    const double mean_wrong = wrong_sum / static_cast<double>(rep.runs);
    const int negatives = rep.n * (rep.n - 1) - rep.true_edges;
    rep.sensitivity = rep.true_edges > 0 ? mean_correct / rep.true_edges : 1.0;
    rep.specificity = negatives > 0 ? (negatives - mean_wrong) / negatives : 1.0;
    return rep;
}

inline nlohmann::json eval_report_to_json(const EvalReport& rep) {
    nlohmann::json doc;
    doc["runs"] = rep.runs;
    doc["n"] = rep.n;
    doc["true_edges"] = rep.true_edges;
    doc["success_rate"] = rep.success_rate;
    if (std::isfinite(rep.average_result)) doc["average_result"] = rep.average_result;
    doc["correct_per_run"] = rep.correct_per_run;
    doc["wrong_per_run"] = rep.wrong_per_run;
    doc["unique_correct"] = rep.unique_correct;
    doc["unique_wrong"] = rep.unique_wrong;
    doc["sensitivity"] = rep.sensitivity;
    doc["specificity"] = rep.specificity;
    return doc;
}

inline const char* eval_report_csv_header() {
    return "problem,k,solver,runs,success_rate,average_result,mean_correct,mean_wrong,"
           "unique_correct,unique_wrong,sensitivity,specificity";
}

/// One sweep-experiment row per (problem, k, solver) cell.
inline std::string eval_report_csv_row(const EvalReport& rep, const std::string& problem, int k,
                                       const std::string& solver) {
    double correct_sum = 0, wrong_sum = 0;
    for (int c : rep.correct_per_run) correct_sum += c;
    for (int w : rep.wrong_per_run) wrong_sum += w;
    const double runs = static_cast<double>(rep.runs);
    std::string row = problem + "," + std::to_string(k) + "," + solver;
    auto push = [&row](double v) {
        row += ",";
        if (!std::isfinite(v)) return;  // leave the cell empty
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        row += buf;
    };
    push(static_cast<double>(rep.runs));
    push(rep.success_rate);
    push(rep.average_result);
    push(correct_sum / runs);
    push(wrong_sum / runs);
    push(static_cast<double>(rep.unique_correct));
    push(static_cast<double>(rep.unique_wrong));
    push(rep.sensitivity);
    push(rep.specificity);
    return row;
}

}  // namespace bnsl
