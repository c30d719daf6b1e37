#include "srf/decision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "srf/metrics.hpp"

namespace srf {

namespace {

/// Internal ids of the top_n list entries whose documents are non-empty.
std::vector<std::int32_t> top_doc_ids(const InvertedIndex& index, const RankedList& list,
                                      std::size_t top_n, const char* op) {
    if (list.entries.empty()) {
        throw std::invalid_argument(std::string(op) + ": empty ranked list for query '" +
                                    list.query_id + "'");
    }
    std::vector<std::int32_t> ids;
    const std::size_t n = std::min(list.entries.size(), top_n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto id = index.internal_id(list.entries[i].doc_id);
        if (id < 0) {
            throw std::invalid_argument(std::string(op) + ": document '" +
                                        list.entries[i].doc_id + "' not present in the index");
        }
        if (index.doc(id).length > 0) ids.push_back(id);
    }
    if (ids.empty()) {
        throw std::invalid_argument(std::string(op) + ": all top documents are empty for query '" +
                                    list.query_id + "'");
    }
    return ids;
}

TermDistribution top_docs_mixture(const InvertedIndex& index, const RankedList& list,
                                  std::size_t top_n, const char* op) {
    const auto ids = top_doc_ids(index, list, top_n, op);
    return uniform_mixture(gather_doc_models(index, ids));
}

void check_unit_interval(double v, const char* name, const char* op) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(op) + ": " + name + " must be in [0, 1]");
    }
}

}  // namespace

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

QueryLabel label_query(const std::string& query_id, const RankedList& pre, const RankedList& post,
                       const Qrels& qrels, std::int32_t cutoff) {
    if (pre.query_id != query_id || post.query_id != query_id) {
        throw std::invalid_argument("label_query: list query ids do not match '" + query_id + "'");
    }
    QueryLabel label;
    label.query_id = query_id;
    label.ap_pre = average_precision(pre, qrels, cutoff);
    label.ap_post = average_precision(post, qrels, cutoff);
    label.y = label.ap_post > label.ap_pre ? 1 : 0;
    return label;
}

double clarity(const InvertedIndex& index, const RankedList& list, std::int32_t top_n) {
    if (top_n < 1) throw std::invalid_argument("clarity: top_n must be >= 1");
    const auto mixture =
        top_docs_mixture(index, list, static_cast<std::size_t>(top_n), "clarity");
    // every term of the mixture occurs in the collection, so P(t|C) > 0
    const double coll_tokens = static_cast<double>(index.total_tokens());
    double kl = 0.0;
    for (const auto& [t, p] : mixture.mass) {
        if (p <= 0.0) continue;
        const double pc = static_cast<double>(index.cf(t)) / coll_tokens;
        kl += p * std::log(p / pc);
    }
    return kl;
}

std::map<std::string, double> normalize_scores(const std::map<std::string, double>& scores) {
    if (scores.empty()) {
        throw std::invalid_argument("normalize_scores: empty score map");
    }
    double lo = scores.begin()->second, hi = scores.begin()->second;
    for (const auto& [q, v] : scores) {
        (void)q;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::map<std::string, double> normalized;
    if (hi == lo) {
        for (const auto& [q, v] : scores) {
            (void)v;
            normalized[q] = 0.5;
        }
        return normalized;
    }
    for (const auto& [q, v] : scores) {
        normalized[q] = (v - lo) / (hi - lo);
    }
    return normalized;
}

DecisionOutcome decide_qpp_srf(const std::string& query_id, double normalized_qpp, double tau) {
    check_unit_interval(normalized_qpp, "normalized_qpp", "decide_qpp_srf");
    check_unit_interval(tau, "tau", "decide_qpp_srf");
    DecisionOutcome outcome;
    outcome.query_id = query_id;
    outcome.theta = 1.0 - normalized_qpp;
    outcome.apply_prf = normalized_qpp < tau;
    outcome.method = "qpp-srf";
    return outcome;
}

double td2f_divergence(const InvertedIndex& index, const RankedList& pre_list,
                       const RankedList& post_list, double epsilon) {
    const auto pre_mix = top_docs_mixture(index, pre_list, pre_list.entries.size(), "td2f");
    const auto post_mix = top_docs_mixture(index, post_list, post_list.entries.size(), "td2f");

    std::map<std::string, char> vocab;
    for (const auto& [t, p] : pre_mix.mass) {
        if (p > 0.0) vocab.emplace(t, 0);
    }
    for (const auto& [t, p] : post_mix.mass) {
        if (p > 0.0) vocab.emplace(t, 0);
    }
    const double v = static_cast<double>(vocab.size());
    const double denom = 1.0 + epsilon * v;

    double sum = 0.0;
    for (const auto& [t, unused] : vocab) {
        (void)unused;
        const double p = (pre_mix.prob(t) + epsilon) / denom;
        const double q = (post_mix.prob(t) + epsilon) / denom;
        sum += std::log(p) - std::log(q);
    }
    return sum / v;
}

double calibrate_td2f_threshold(const std::vector<double>& train_scores) {
    const std::size_t n = train_scores.size();
    if (n < 20) {
        throw std::invalid_argument("calibrate_td2f_threshold: need at least 20 training scores");
    }
    std::vector<double> sorted = train_scores;
    std::sort(sorted.begin(), sorted.end());
    // ceil(0.95 n) in integer arithmetic
    const std::size_t idx = (19 * n + 19) / 20;
    return sorted[idx - 1];
}

DecisionOutcome decide_td2f(const std::string& query_id, double divergence, double tau) {
    DecisionOutcome outcome;
    outcome.query_id = query_id;
    outcome.apply_prf = divergence <= tau;
    outcome.theta = outcome.apply_prf ? 1.0 : 0.0;
    outcome.method = "td2f";
    return outcome;
}

FeatureVector extract_lr_features(const InvertedIndex& index, const Query& query,
                                  const RankedList& pre_list, const ExpandedQuery& expanded,
                                  const RankedList& post_list) {
    if (pre_list.entries.empty() || post_list.entries.empty()) {
        throw std::invalid_argument("extract_lr_features: empty ranked list for query '" +
                                    query.query_id + "'");
    }
    if (expanded.term_weights.empty()) {
        throw std::invalid_argument("extract_lr_features: empty expanded query '" +
                                    query.query_id + "'");
    }
    const std::size_t n_fb = expanded.fb_docs >= 1 ? static_cast<std::size_t>(expanded.fb_docs)
                                                   : pre_list.entries.size();

    FeatureVector f;
    f.clarity_topdocs = clarity(index, pre_list, static_cast<std::int32_t>(n_fb));

    const auto query_mle = mle_distribution(query.terms);
    TermDistribution expansion;
    expansion.mass = expanded.term_weights;
    f.kl_query_vs_rm = std::abs(kl_divergence_smoothed(expansion, query_mle));

    const auto ids = top_doc_ids(index, pre_list, n_fb, "extract_lr_features");
    const auto models = gather_doc_models(index, ids);
    const auto centroid = uniform_mixture(models);
    double js_sum = 0.0;
    for (const auto& model : models) js_sum += js_divergence(model, centroid);
    f.js_feedback_docs = js_sum / static_cast<double>(models.size());

    f.clarity_query_lm = kl_divergence_smoothed(query_mle, collection_model(index));
    return f;
}

std::pair<double, std::array<double, 5>> logistic_loss_and_gradient(
    const LogisticModel& model, const std::vector<std::pair<FeatureVector, std::int32_t>>& examples,
    double l2) {
    if (examples.empty()) {
        throw std::invalid_argument("logistic_loss_and_gradient: empty example set");
    }
    const double n = static_cast<double>(examples.size());
    double loss = 0.0;
    std::array<double, 5> grad{};
    for (const auto& [features, y] : examples) {
        const auto z = features.as_array();
        double logit = model.bias;
        for (std::size_t j = 0; j < 4; ++j) logit += model.weights[j] * z[j];
        // stable cross-entropy: max(logit,0) - y*logit + log(1 + exp(-|logit|))
        loss += std::max(logit, 0.0) - y * logit + std::log1p(std::exp(-std::abs(logit)));
        const double residual = sigmoid(logit) - static_cast<double>(y);
        for (std::size_t j = 0; j < 4; ++j) grad[j] += residual * z[j];
        grad[4] += residual;
    }
    loss /= n;
    for (auto& g : grad) g /= n;
    for (std::size_t j = 0; j < 4; ++j) {
        loss += 0.5 * l2 * model.weights[j] * model.weights[j];
        grad[j] += l2 * model.weights[j];
    }
    return {loss, grad};
}

LogisticModel train_logistic(const std::vector<std::pair<FeatureVector, std::int32_t>>& examples,
                             const LogisticTrainConfig& config) {
    if (examples.size() < 2) {
        throw std::invalid_argument("train_logistic: need at least 2 examples");
    }
    bool has_pos = false, has_neg = false;
    for (const auto& [features, y] : examples) {
        (void)features;
        if (y == 1) has_pos = true;
        else if (y == 0) has_neg = true;
        else throw std::invalid_argument("train_logistic: labels must be 0 or 1");
    }
    if (!has_pos || !has_neg) {
        throw std::invalid_argument("train_logistic: degenerate labels (single class)");
    }

    LogisticModel model;  // zero init
    for (std::int32_t epoch = 0; epoch < config.epochs; ++epoch) {
        const auto [loss, grad] = logistic_loss_and_gradient(model, examples, config.l2);
        (void)loss;
        for (std::size_t j = 0; j < 4; ++j) model.weights[j] -= config.learning_rate * grad[j];
        model.bias -= config.learning_rate * grad[4];
    }
    return model;
}

DecisionOutcome decide_lr(const LogisticModel& model, const std::string& query_id,
                          const FeatureVector& features) {
    const auto z = features.as_array();
    double logit = model.bias;
    for (std::size_t j = 0; j < 4; ++j) logit += model.weights[j] * z[j];
    DecisionOutcome outcome;
    outcome.query_id = query_id;
    outcome.theta = sigmoid(logit);
    outcome.apply_prf = outcome.theta > 0.5;
    outcome.method = "lr-srf";
    return outcome;
}

// --- file formats -----------------------------------------------------------

void write_labels_tsv(const std::string& path, const std::vector<QueryLabel>& labels) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("write_labels_tsv: cannot open '" + path + "' for writing");
    }
    char buf[128];
    for (const auto& label : labels) {
        std::snprintf(buf, sizeof(buf), "%d\t%.17g\t%.17g", label.y, label.ap_pre, label.ap_post);
        out << label.query_id << '\t' << buf << '\n';
    }
    if (!out) {
        throw std::runtime_error("write_labels_tsv: write failed for '" + path + "'");
    }
}

std::vector<QueryLabel> read_labels_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("read_labels_tsv: cannot open '" + path + "'");
    }
    std::vector<QueryLabel> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        QueryLabel label;
        std::string y_s, pre_s, post_s;
        if (!std::getline(fields, label.query_id, '\t') || !std::getline(fields, y_s, '\t') ||
            !std::getline(fields, pre_s, '\t') || !std::getline(fields, post_s)) {
            throw std::runtime_error("read_labels_tsv: malformed line " + std::to_string(line_no));
        }
        try {
            label.y = std::stoi(y_s);
            label.ap_pre = std::stod(pre_s);
            label.ap_post = std::stod(post_s);
        } catch (const std::exception&) {
            throw std::runtime_error("read_labels_tsv: malformed line " + std::to_string(line_no));
        }
        if (label.y != 0 && label.y != 1) {
            throw std::runtime_error("read_labels_tsv: label must be 0 or 1 at line " +
                                     std::to_string(line_no));
        }
        labels.push_back(std::move(label));
    }
    return labels;
}

void write_decisions_tsv(const std::string& path, const std::vector<DecisionOutcome>& decisions) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("write_decisions_tsv: cannot open '" + path + "' for writing");
    }
    char buf[64];
    for (const auto& d : decisions) {
        std::snprintf(buf, sizeof(buf), "%.17g", d.theta);
        out << d.query_id << '\t' << buf << '\t' << (d.apply_prf ? 1 : 0) << '\t' << d.method
            << '\n';
    }
    if (!out) {
        throw std::runtime_error("write_decisions_tsv: write failed for '" + path + "'");
    }
}

std::vector<DecisionOutcome> read_decisions_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("read_decisions_tsv: cannot open '" + path + "'");
    }
    std::vector<DecisionOutcome> decisions;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        DecisionOutcome d;
        std::string theta_s, apply_s;
        if (!std::getline(fields, d.query_id, '\t') || !std::getline(fields, theta_s, '\t') ||
            !std::getline(fields, apply_s, '\t') || !std::getline(fields, d.method)) {
            throw std::runtime_error("read_decisions_tsv: malformed line " +
                                     std::to_string(line_no));
        }
        try {
            d.theta = std::stod(theta_s);
            const int apply = std::stoi(apply_s);
            if (apply != 0 && apply != 1) throw std::invalid_argument("apply");
            d.apply_prf = apply == 1;
        } catch (const std::exception&) {
            throw std::runtime_error("read_decisions_tsv: malformed line " +
                                     std::to_string(line_no));
        }
        if (!(d.theta >= 0.0 && d.theta <= 1.0)) {
            throw std::runtime_error("read_decisions_tsv: theta out of [0,1] at line " +
                                     std::to_string(line_no));
        }
        decisions.push_back(std::move(d));
    }
    return decisions;
}

void save_logistic_model(const std::string& path, const LogisticModel& model) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("save_logistic_model: cannot open '" + path + "' for writing");
    }
    char buf[512];
    std::snprintf(buf, sizeof(buf), "weights %.17g %.17g %.17g %.17g\nbias %.17g\n",
                  model.weights[0], model.weights[1], model.weights[2], model.weights[3],
                  model.bias);
    out << "srf-logistic-model v1\n" << buf;
    if (!out) {
        throw std::runtime_error("save_logistic_model: write failed for '" + path + "'");
    }
}

LogisticModel load_logistic_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_logistic_model: cannot open '" + path + "'");
    }
    std::string header;
    if (!std::getline(in, header)) {
        throw std::runtime_error("load_logistic_model: empty file '" + path + "'");
    }
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != "srf-logistic-model v1") {
        throw std::runtime_error(
            "load_logistic_model: expected header 'srf-logistic-model v1', found '" + header +
            "'");
    }
    LogisticModel model;
    std::string keyword;
    if (!(in >> keyword) || keyword != "weights" || !(in >> model.weights[0] >> model.weights[1] >>
                                                      model.weights[2] >> model.weights[3])) {
        throw std::runtime_error("load_logistic_model: malformed weights line in '" + path + "'");
    }
    if (!(in >> keyword) || keyword != "bias" || !(in >> model.bias)) {
        throw std::runtime_error("load_logistic_model: malformed bias line in '" + path + "'");
    }
    return model;
}

}  // namespace srf
