#include "srf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace srf {

namespace {

void require_query(const Qrels& qrels, const std::string& query_id, const char* op) {
    if (!qrels.has_query(query_id)) {
        throw std::invalid_argument(std::string(op) + ": query '" + query_id +
                                    "' absent from qrels");
    }
}

std::string key_mismatch_message(const char* op, const std::map<std::string, bool>& a,
                                 const std::map<std::string, std::int32_t>& b) {
    std::string missing_in_b, missing_in_a;
    for (const auto& [q, v] : a) {
        (void)v;
        if (!b.count(q)) missing_in_b += " " + q;
    }
    for (const auto& [q, v] : b) {
        (void)v;
        if (!a.count(q)) missing_in_a += " " + q;
    }
    return std::string(op) + ": key mismatch; only in decisions:" + missing_in_b +
           "; only in labels:" + missing_in_a;
}

}  // namespace

double average_precision(const RankedList& run, const Qrels& qrels, std::int32_t cutoff) {
    require_query(qrels, run.query_id, "average_precision");
    const std::int32_t total_relevant = qrels.relevant_count(run.query_id);
    if (total_relevant == 0) return 0.0;

    double sum = 0.0;
    std::int32_t hits = 0;
    const std::size_t depth =
        std::min<std::size_t>(run.entries.size(), static_cast<std::size_t>(cutoff));
    for (std::size_t i = 0; i < depth; ++i) {
        if (qrels.grade(run.query_id, run.entries[i].doc_id) >= 1) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(total_relevant);
}

double ndcg_at_10(const RankedList& run, const Qrels& qrels) {
    require_query(qrels, run.query_id, "ndcg_at_10");
    const auto& judged = qrels.grades.at(run.query_id);

    std::vector<std::int32_t> ideal_grades;
    for (const auto& [doc, grade] : judged) {
        (void)doc;
        if (grade >= 1) ideal_grades.push_back(grade);
    }
    if (ideal_grades.empty()) return 0.0;
    std::sort(ideal_grades.begin(), ideal_grades.end(), std::greater<>());

    auto gain = [](std::int32_t grade) { return std::exp2(static_cast<double>(grade)) - 1.0; };
    double dcg = 0.0;
    const std::size_t depth = std::min<std::size_t>(run.entries.size(), 10);
    for (std::size_t i = 0; i < depth; ++i) {
        const auto grade = qrels.grade(run.query_id, run.entries[i].doc_id);
        if (grade >= 1) dcg += gain(grade) / std::log2(static_cast<double>(i + 2));
    }
    double idcg = 0.0;
    const std::size_t ideal_depth = std::min<std::size_t>(ideal_grades.size(), 10);
    for (std::size_t i = 0; i < ideal_depth; ++i) {
        idcg += gain(ideal_grades[i]) / std::log2(static_cast<double>(i + 2));
    }
    return dcg / idcg;
}

double decision_accuracy(const std::map<std::string, bool>& decisions,
                         const std::map<std::string, std::int32_t>& labels) {
    if (decisions.empty()) {
        throw std::invalid_argument("decision_accuracy: empty decision set");
    }
    if (decisions.size() != labels.size()) {
        throw std::invalid_argument(key_mismatch_message("decision_accuracy", decisions, labels));
    }
    std::int32_t correct = 0;
    for (const auto& [query_id, apply] : decisions) {
        auto it = labels.find(query_id);
        if (it == labels.end()) {
            throw std::invalid_argument(
                key_mismatch_message("decision_accuracy", decisions, labels));
        }
        if (apply == (it->second == 1)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(decisions.size());
}

EvalReport evaluate_runs(const std::map<std::string, RankedList>& runs, const Qrels& qrels,
                         std::int32_t cutoff) {
    if (runs.empty()) {
        throw std::invalid_argument("evaluate_runs: no runs given");
    }
    EvalReport report;
    for (const auto& [query_id, list] : runs) {
        const double ap = average_precision(list, qrels, cutoff);
        const double ndcg = ndcg_at_10(list, qrels);
        report.ap[query_id] = ap;
        report.ndcg10[query_id] = ndcg;
        report.map += ap;
        report.mean_ndcg10 += ndcg;
    }
    report.map /= static_cast<double>(runs.size());
    report.mean_ndcg10 /= static_cast<double>(runs.size());
    return report;
}

OracleResult oracle_run(const std::map<std::string, RankedList>& pre_runs,
                        const std::map<std::string, RankedList>& post_runs, const Qrels& qrels,
                        std::int32_t cutoff) {
    if (pre_runs.empty()) {
        throw std::invalid_argument("oracle_run: no runs given");
    }
    OracleResult result;
    double sum_ap = 0.0;
    for (const auto& [query_id, pre] : pre_runs) {
        auto post_it = post_runs.find(query_id);
        if (post_it == post_runs.end()) {
            throw std::invalid_argument("oracle_run: missing post-feedback list for query '" +
                                        query_id + "'");
        }
        const double ap_pre = average_precision(pre, qrels, cutoff);
        const double ap_post = average_precision(post_it->second, qrels, cutoff);
        const bool take_post = ap_post > ap_pre;  // ties keep the pre-feedback list
        result.chose_post[query_id] = take_post;
        result.ap_pre[query_id] = ap_pre;
        result.ap_post[query_id] = ap_post;
        result.selected.emplace(query_id, take_post ? post_it->second : pre);
        sum_ap += take_post ? ap_post : ap_pre;
    }
    result.map = sum_ap / static_cast<double>(pre_runs.size());
    return result;
}

std::optional<double> relative_ap_change(double ap_pre, double ap_post) {
    if (ap_pre == 0.0) return std::nullopt;
    return (ap_post - ap_pre) / ap_pre;
}

ContingencyReport contingency_report(const std::map<std::string, bool>& decisions,
                                     const std::map<std::string, std::int32_t>& labels,
                                     const std::map<std::string, double>& delta_ap) {
    if (decisions.size() != labels.size()) {
        throw std::invalid_argument(key_mismatch_message("contingency_report", decisions, labels));
    }
    for (const auto& [query_id, y] : labels) {
        (void)y;
        if (!decisions.count(query_id)) {
            throw std::invalid_argument(
                key_mismatch_message("contingency_report", decisions, labels));
        }
    }
    ContingencyReport report;
    report.total_queries = static_cast<std::int32_t>(decisions.size());
    double sums[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (const auto& [query_id, apply] : decisions) {
        auto it = delta_ap.find(query_id);
        if (it == delta_ap.end()) {
            ++report.excluded_zero_ap;
            continue;
        }
        const int predicted = apply ? 0 : 1;
        const int actual = it->second > 0.0 ? 0 : 1;
        report.cells[predicted][actual].count += 1;
        sums[predicted][actual] += std::abs(it->second);
    }
    for (int p = 0; p < 2; ++p) {
        for (int a = 0; a < 2; ++a) {
            if (report.cells[p][a].count > 0) {
                report.cells[p][a].mean_abs_delta =
                    sums[p][a] / static_cast<double>(report.cells[p][a].count);
            }
        }
    }
    return report;
}

}  // namespace srf
