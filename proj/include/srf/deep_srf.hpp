#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "srf/decision.hpp"

namespace srf {

/// Hyper-parameters of the twin-branch feedback decider.
struct DeciderConfig {
    std::int32_t embed_dim = 32;   // token embedding width d
    std::int32_t pair_dim = 64;    // query-document pair vector width p
    std::int32_t hidden_dim = 64;  // branch vector width h
    std::int32_t k = 10;           // document slots per branch
    double branch_dropout = 0.5;   // zero-mask rate of the expanded branch during training
    double learning_rate = 0.05;
    std::int32_t epochs = 300;
    std::uint64_t seed = 42;
};

/// Token vocabulary with two reserved ids: unknown tokens and the empty-doc
/// sentinel.
class Vocabulary {
public:
    static constexpr std::int32_t kUnknown = 0;
    static constexpr std::int32_t kEmptyDoc = 1;

    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> terms);

    /// Deterministic build: distinct tokens of all sequences, sorted.
    static Vocabulary from_sequences(const std::vector<std::vector<std::string>>& sequences);

    std::int32_t id(const std::string& term) const;
    std::vector<std::int32_t> ids_of(const std::vector<std::string>& tokens) const;
    const std::vector<std::string>& terms() const { return terms_; }
    /// Embedding rows, including the two reserved ids.
    std::int32_t rows() const { return static_cast<std::int32_t>(terms_.size()) + 2; }

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::int32_t> ids_;
};

/// One training example: both branches' token inputs plus the feedback label.
/// Each branch carries exactly k document slots (empty slots for padding).
struct TrainingInstance {
    std::vector<std::int32_t> query;
    std::vector<std::vector<std::int32_t>> query_docs;
    std::vector<std::int32_t> expanded;
    std::vector<std::vector<std::int32_t>> expanded_docs;
    std::int32_t label = 0;
};

/// All learnable tensors in one flat buffer. Both branches read the same
/// buffer, so the pair encoder and the aggregator are shared by construction.
struct DeciderParams {
    DeciderConfig config;
    Vocabulary vocab;
    std::vector<double> values;

    // offsets into `values`, in declared tensor order
    std::size_t off_embeddings() const;  // rows x d
    std::size_t off_proj_w() const;      // p x (3d + 3)
    std::size_t off_proj_b() const;      // p
    std::size_t off_lstm_wx() const;     // 4h x p, gate blocks i, f, g, o
    std::size_t off_lstm_wh() const;     // 4h x h
    std::size_t off_lstm_b() const;      // 4h
    std::size_t off_head_w() const;      // 2h
    std::size_t off_head_b() const;      // 1
    std::size_t total_size() const;
};

/// Fresh parameters with uniform(-0.1, 0.1) init, seeded from config.seed.
DeciderParams init_decider(const DeciderConfig& config, Vocabulary vocab);

/// Encode one (query, document) pair into R^p: mean-pooled embeddings of
/// both sides, their elementwise product and overlap statistics, projected
/// through a tanh layer. Empty documents use the sentinel embedding.
std::vector<double> encode_pair(const DeciderParams& params, const std::vector<std::int32_t>& query,
                                const std::vector<std::int32_t>& doc);

/// Recurrent aggregation of the k pair vectors in rank order into R^h.
/// Errors when the number of document slots differs from config.k.
std::vector<double> encode_branch(const DeciderParams& params,
                                  const std::vector<std::int32_t>& query,
                                  const std::vector<std::vector<std::int32_t>>& docs);

/// Training-regime forward: theta = sigmoid(head([E(Q branch); E(phi branch)])).
double forward_train(const DeciderParams& params, const TrainingInstance& instance);

/// Inference-regime theta: the expanded half of the merged vector is zero,
/// so the prediction depends on the original query's branch alone.
double infer_theta(const DeciderParams& params, const std::vector<std::int32_t>& query,
                   const std::vector<std::vector<std::int32_t>>& docs);

DecisionOutcome forward_infer(const DeciderParams& params, const std::string& query_id,
                              const std::vector<std::int32_t>& query,
                              const std::vector<std::vector<std::int32_t>>& docs);

/// Mean squared error over the batch, with mask_expanded[i] selecting the
/// inference regime (zeroed expanded half) for instance i.
double decider_loss(const DeciderParams& params, const std::vector<TrainingInstance>& batch,
                    const std::vector<bool>& mask_expanded);

/// Analytic gradient of decider_loss with respect to every parameter.
std::vector<double> decider_gradient(const DeciderParams& params,
                                     const std::vector<TrainingInstance>& batch,
                                     const std::vector<bool>& mask_expanded);

struct DeciderTrainResult {
    DeciderParams params;
    std::vector<double> loss_curve;  // one entry per epoch
};

/// Full-batch gradient descent on the squared error of Eq-style labels.
/// Per epoch, each instance's expanded half is zero-masked with probability
/// config.branch_dropout. Deterministic given config.seed.
/// Errors on single-class datasets and inconsistent document slot counts.
DeciderTrainResult train_decider(const std::vector<TrainingInstance>& dataset,
                                 const DeciderConfig& config, Vocabulary vocab);

/// Pad with empty documents / truncate to exactly k slots.
std::vector<std::vector<std::int32_t>> fit_doc_slots(std::vector<std::vector<std::int32_t>> docs,
                                                     std::int32_t k);

/// Versioned binary model file (magic "SRFD"): dims, vocabulary, then the
/// flat parameter buffer. Round trips bitwise.
void save_decider(const std::string& path, const DeciderParams& params);
DeciderParams load_decider(const std::string& path);

}  // namespace srf
