#pragma once

#include <map>
#include <optional>
#include <string>

#include "srf/trec_io.hpp"

namespace srf {

/// AP = (1/R) * sum over relevant hits within the cutoff of precision@hit,
/// with R the number of relevant documents in the qrels (grade >= 1).
/// Returns 0 when R = 0. Errors when the query is absent from the qrels.
double average_precision(const RankedList& run, const Qrels& qrels, std::int32_t cutoff = 1000);

/// nDCG@10 with gain 2^grade - 1 and discount 1/log2(rank + 1);
/// 0 when the query has no relevant documents.
double ndcg_at_10(const RankedList& run, const Qrels& qrels);

/// Fraction of queries where the decision equals the label (apply iff y = 1).
/// The two key sets must be equal; mismatches are reported in the error.
double decision_accuracy(const std::map<std::string, bool>& decisions,
                         const std::map<std::string, std::int32_t>& labels);

struct EvalReport {
    std::map<std::string, double> ap;      // per query
    std::map<std::string, double> ndcg10;  // per query
    double map = 0.0;
    double mean_ndcg10 = 0.0;
};

/// Evaluate every run in the map. All queries must appear in the qrels.
EvalReport evaluate_runs(const std::map<std::string, RankedList>& runs, const Qrels& qrels,
                         std::int32_t cutoff = 1000);

struct OracleResult {
    std::map<std::string, RankedList> selected;
    std::map<std::string, bool> chose_post;
    std::map<std::string, double> ap_pre;
    std::map<std::string, double> ap_post;
    double map = 0.0;
};

/// Per query, keep whichever of the two lists has the higher AP, taking the
/// pre-feedback list on ties. Every pre query needs a post list and qrels.
OracleResult oracle_run(const std::map<std::string, RankedList>& pre_runs,
                        const std::map<std::string, RankedList>& post_runs, const Qrels& qrels,
                        std::int32_t cutoff = 1000);

struct ContingencyCell {
    std::int32_t count = 0;
    double mean_abs_delta = 0.0;
};

/// 2x2 table of predicted {apply, skip} x actual {dAP > 0, dAP <= 0} with the
/// mean |dAP| per cell. Queries without a defined dAP (AP of the original
/// query = 0) are excluded from the cells and counted separately.
struct ContingencyReport {
    ContingencyCell cells[2][2];  // [predicted: 0 apply, 1 skip][actual: 0 improved, 1 not]
    std::int32_t excluded_zero_ap = 0;
    std::int32_t total_queries = 0;
};

/// dAP(Q) = (ap_post - ap_pre) / ap_pre; undefined when ap_pre = 0.
std::optional<double> relative_ap_change(double ap_pre, double ap_post);

/// `decisions` and `labels` must share one key set; `delta_ap` holds the
/// defined dAP values and must be a subset of that key set.
ContingencyReport contingency_report(const std::map<std::string, bool>& decisions,
                                     const std::map<std::string, std::int32_t>& labels,
                                     const std::map<std::string, double>& delta_ap);

}  // namespace srf
