#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "srf/feedback.hpp"
#include "srf/index.hpp"
#include "srf/retrieval.hpp"
#include "srf/trec_io.hpp"

namespace srf {

/// Per-query feedback decision: confidence theta in [0,1] plus the hard bit.
struct DecisionOutcome {
    std::string query_id;
    double theta = 0.0;
    bool apply_prf = false;
    std::string method;
};

/// Features for the regression-based decider, in declared order.
struct FeatureVector {
    double clarity_topdocs = 0.0;   // clarity of the top retrieved documents
    double kl_query_vs_rm = 0.0;    // |KL(expansion model || query model)|
    double js_feedback_docs = 0.0;  // mean JS of feedback doc models to their centroid
    double clarity_query_lm = 0.0;  // clarity of the query language model

    std::array<double, 4> as_array() const {
        return {clarity_topdocs, kl_query_vs_rm, js_feedback_docs, clarity_query_lm};
    }
};

struct LogisticModel {
    std::array<double, 4> weights{};
    double bias = 0.0;
};

/// Ground-truth feedback label: y = 1 iff AP strictly improved.
struct QueryLabel {
    std::string query_id;
    std::int32_t y = 0;
    double ap_pre = 0.0;
    double ap_post = 0.0;
};

QueryLabel label_query(const std::string& query_id, const RankedList& pre, const RankedList& post,
                       const Qrels& qrels, std::int32_t cutoff = 1000);

/// KL(P(.|L) || P(.|C)) where P(.|L) is the uniform mixture of the top_n
/// document models of the list. Always >= 0.
double clarity(const InvertedIndex& index, const RankedList& list, std::int32_t top_n);

/// Min-max normalization over the batch; constant or singleton batches map
/// to 0.5 everywhere.
std::map<std::string, double> normalize_scores(const std::map<std::string, double>& scores);

/// Threshold rule on a normalized QPP estimate: apply feedback iff the
/// estimate is below tau. theta = 1 - estimate (low predicted effectiveness
/// means high feedback confidence).
DecisionOutcome decide_qpp_srf(const std::string& query_id, double normalized_qpp, double tau);

/// Mean log-ratio of the two lists' term distributions over their union
/// vocabulary; both distributions are uniform mixtures of top-doc models,
/// add-epsilon smoothed so every union term has positive mass.
/// Antisymmetric under list swap; zero on identical lists.
double td2f_divergence(const InvertedIndex& index, const RankedList& pre_list,
                       const RankedList& post_list, double epsilon = 1e-6);

/// Smallest tau covering at least 95% of the training scores
/// (the ceil(0.95 n)-th order statistic). Requires >= 20 scores.
double calibrate_td2f_threshold(const std::vector<double>& train_scores);

/// Hard TD2F decision: apply feedback iff the divergence does not exceed tau
/// (feedback is skipped only for the highest-divergence outliers).
DecisionOutcome decide_td2f(const std::string& query_id, double divergence, double tau);

FeatureVector extract_lr_features(const InvertedIndex& index, const Query& query,
                                  const RankedList& pre_list, const ExpandedQuery& expanded,
                                  const RankedList& post_list);

struct LogisticTrainConfig {
    double learning_rate = 0.1;
    double l2 = 1e-4;
    std::int32_t epochs = 2000;
};

/// Regularized logistic loss and its gradient (4 weights then bias) over the
/// example set; the L2 penalty applies to the weights only.
std::pair<double, std::array<double, 5>> logistic_loss_and_gradient(
    const LogisticModel& model, const std::vector<std::pair<FeatureVector, std::int32_t>>& examples,
    double l2);

/// Full-batch gradient descent from zero init; deterministic. Errors when
/// fewer than two examples or only one class is present.
LogisticModel train_logistic(const std::vector<std::pair<FeatureVector, std::int32_t>>& examples,
                             const LogisticTrainConfig& config = {});

DecisionOutcome decide_lr(const LogisticModel& model, const std::string& query_id,
                          const FeatureVector& features);

double sigmoid(double x);

// --- file formats -----------------------------------------------------------

/// Labels file: TSV `query_id<TAB>y<TAB>ap_pre<TAB>ap_post`.
void write_labels_tsv(const std::string& path, const std::vector<QueryLabel>& labels);
std::vector<QueryLabel> read_labels_tsv(const std::string& path);

/// Decisions file: TSV `query_id<TAB>theta<TAB>apply_prf<TAB>method`.
void write_decisions_tsv(const std::string& path, const std::vector<DecisionOutcome>& decisions);
std::vector<DecisionOutcome> read_decisions_tsv(const std::string& path);

/// Versioned text model file (weights, bias).
void save_logistic_model(const std::string& path, const LogisticModel& model);
LogisticModel load_logistic_model(const std::string& path);

}  // namespace srf
