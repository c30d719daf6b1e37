#include "srf/deep_srf.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "binary_io.hpp"

namespace srf {

// ---- Vocabulary -------------------------------------------------------------

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
    std::sort(terms_.begin(), terms_.end());
    terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
    ids_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        ids_.emplace(terms_[i], static_cast<std::int32_t>(i) + 2);
    }
}

Vocabulary Vocabulary::from_sequences(const std::vector<std::vector<std::string>>& sequences) {
    std::set<std::string> uniq;
    for (const auto& seq : sequences) {
        for (const auto& tok : seq) uniq.insert(tok);
    }
    return Vocabulary(std::vector<std::string>(uniq.begin(), uniq.end()));
}

std::int32_t Vocabulary::id(const std::string& term) const {
    auto it = ids_.find(term);
    return it == ids_.end() ? kUnknown : it->second;
}

std::vector<std::int32_t> Vocabulary::ids_of(const std::vector<std::string>& tokens) const {
    std::vector<std::int32_t> ids;
    ids.reserve(tokens.size());
    for (const auto& tok : tokens) ids.push_back(id(tok));
    return ids;
}

// ---- parameter layout -------------------------------------------------------

namespace {

struct Layout {
    std::int32_t rows, d, p, h, feat;
    std::size_t embeddings, proj_w, proj_b, lstm_wx, lstm_wh, lstm_b, head_w, head_b, total;

    Layout(const DeciderConfig& c, const Vocabulary& v) {
        rows = v.rows();
        d = c.embed_dim;
        p = c.pair_dim;
        h = c.hidden_dim;
        feat = 3 * d + 3;
        embeddings = 0;
        proj_w = embeddings + static_cast<std::size_t>(rows) * d;
        proj_b = proj_w + static_cast<std::size_t>(p) * feat;
        lstm_wx = proj_b + static_cast<std::size_t>(p);
        lstm_wh = lstm_wx + static_cast<std::size_t>(4) * h * p;
        lstm_b = lstm_wh + static_cast<std::size_t>(4) * h * h;
        head_w = lstm_b + static_cast<std::size_t>(4) * h;
        head_b = head_w + static_cast<std::size_t>(2) * h;
        total = head_b + 1;
    }
};

void check_config(const DeciderConfig& c) {
    if (c.embed_dim < 1 || c.pair_dim < 1 || c.hidden_dim < 1 || c.k < 1) {
        throw std::invalid_argument("decider: all dimensions and k must be >= 1");
    }
    if (!(c.branch_dropout >= 0.0 && c.branch_dropout <= 1.0)) {
        throw std::invalid_argument("decider: branch_dropout must be in [0, 1]");
    }
}

double stable_sigmoid(double x) { return sigmoid(x); }

void mean_embedding(const double* emb, std::int32_t d, const std::vector<std::int32_t>& tokens,
                    std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(d), 0.0);
    for (const auto tok : tokens) {
        const double* row = emb + static_cast<std::size_t>(tok) * d;
        for (std::int32_t j = 0; j < d; ++j) out[static_cast<std::size_t>(j)] += row[j];
    }
    const double inv = 1.0 / static_cast<double>(tokens.size());
    for (std::int32_t j = 0; j < d; ++j) out[static_cast<std::size_t>(j)] *= inv;
}

struct PairCache {
    std::vector<std::int32_t> doc_eff;
    std::vector<double> doc_mean;  // d
    std::vector<double> feat;      // 3d + 3
    std::vector<double> x;         // p
};

struct StepCache {
    std::vector<double> gi, gf, gg, go, c, tanh_c, h;  // each h
};

struct BranchCache {
    std::vector<std::int32_t> q_eff;
    std::vector<double> q_mean;  // d
    std::vector<PairCache> pairs;
    std::vector<StepCache> steps;
};

/// Forward pass of one branch; fills the cache. The branch vector is
/// cache.steps.back().h.
void run_branch(const DeciderParams& params, const Layout& L,
                const std::vector<std::int32_t>& query,
                const std::vector<std::vector<std::int32_t>>& docs, BranchCache& cache) {
    const double* V = params.values.data();
    const double* emb = V + L.embeddings;
    const double* Wp = V + L.proj_w;
    const double* bp = V + L.proj_b;
    const double* Wx = V + L.lstm_wx;
    const double* Wh = V + L.lstm_wh;
    const double* bl = V + L.lstm_b;

    cache.q_eff = query.empty() ? std::vector<std::int32_t>{Vocabulary::kEmptyDoc} : query;
    mean_embedding(emb, L.d, cache.q_eff, cache.q_mean);
    const std::set<std::int32_t> q_set(query.begin(), query.end());

    const std::size_t k = docs.size();
    cache.pairs.assign(k, {});
    cache.steps.assign(k, {});

    std::vector<double> h_prev(static_cast<std::size_t>(L.h), 0.0);
    std::vector<double> c_prev(static_cast<std::size_t>(L.h), 0.0);
    std::vector<double> gates(static_cast<std::size_t>(4 * L.h));

    for (std::size_t t = 0; t < k; ++t) {
        PairCache& pc = cache.pairs[t];
        const auto& doc = docs[t];
        pc.doc_eff = doc.empty() ? std::vector<std::int32_t>{Vocabulary::kEmptyDoc} : doc;
        mean_embedding(emb, L.d, pc.doc_eff, pc.doc_mean);

        double overlap_q = 0.0, overlap_d = 0.0, len_feat = 0.0;
        if (!query.empty() && !doc.empty()) {
            const std::set<std::int32_t> d_set(doc.begin(), doc.end());
            std::size_t inter = 0;
            for (const auto tok : q_set) inter += d_set.count(tok);
            overlap_q = static_cast<double>(inter) / static_cast<double>(q_set.size());
            overlap_d = static_cast<double>(inter) / static_cast<double>(d_set.size());
        }
        if (!doc.empty()) {
            len_feat = std::log1p(static_cast<double>(doc.size())) / 10.0;
        }

        pc.feat.resize(static_cast<std::size_t>(L.feat));
        for (std::int32_t j = 0; j < L.d; ++j) {
            pc.feat[static_cast<std::size_t>(j)] = cache.q_mean[static_cast<std::size_t>(j)];
            pc.feat[static_cast<std::size_t>(L.d + j)] = pc.doc_mean[static_cast<std::size_t>(j)];
            pc.feat[static_cast<std::size_t>(2 * L.d + j)] =
                cache.q_mean[static_cast<std::size_t>(j)] * pc.doc_mean[static_cast<std::size_t>(j)];
        }
        pc.feat[static_cast<std::size_t>(3 * L.d)] = overlap_q;
        pc.feat[static_cast<std::size_t>(3 * L.d + 1)] = overlap_d;
        pc.feat[static_cast<std::size_t>(3 * L.d + 2)] = len_feat;

        pc.x.resize(static_cast<std::size_t>(L.p));
        for (std::int32_t row = 0; row < L.p; ++row) {
            const double* w = Wp + static_cast<std::size_t>(row) * L.feat;
            double u = bp[row];
            for (std::int32_t col = 0; col < L.feat; ++col) {
                u += w[col] * pc.feat[static_cast<std::size_t>(col)];
            }
            pc.x[static_cast<std::size_t>(row)] = std::tanh(u);
        }

        // LSTM step; gate blocks in order i, f, g, o
        for (std::int32_t r = 0; r < 4 * L.h; ++r) {
            const double* wx = Wx + static_cast<std::size_t>(r) * L.p;
            const double* wh = Wh + static_cast<std::size_t>(r) * L.h;
            double a = bl[r];
            for (std::int32_t col = 0; col < L.p; ++col) a += wx[col] * pc.x[static_cast<std::size_t>(col)];
            for (std::int32_t col = 0; col < L.h; ++col) a += wh[col] * h_prev[static_cast<std::size_t>(col)];
            gates[static_cast<std::size_t>(r)] = a;
        }
        StepCache& sc = cache.steps[t];
        sc.gi.resize(static_cast<std::size_t>(L.h));
        sc.gf.resize(static_cast<std::size_t>(L.h));
        sc.gg.resize(static_cast<std::size_t>(L.h));
        sc.go.resize(static_cast<std::size_t>(L.h));
        sc.c.resize(static_cast<std::size_t>(L.h));
        sc.tanh_c.resize(static_cast<std::size_t>(L.h));
        sc.h.resize(static_cast<std::size_t>(L.h));
        for (std::int32_t j = 0; j < L.h; ++j) {
            const auto js = static_cast<std::size_t>(j);
            sc.gi[js] = stable_sigmoid(gates[js]);
            sc.gf[js] = stable_sigmoid(gates[static_cast<std::size_t>(L.h + j)]);
            sc.gg[js] = std::tanh(gates[static_cast<std::size_t>(2 * L.h + j)]);
            sc.go[js] = stable_sigmoid(gates[static_cast<std::size_t>(3 * L.h + j)]);
            sc.c[js] = sc.gf[js] * c_prev[js] + sc.gi[js] * sc.gg[js];
            sc.tanh_c[js] = std::tanh(sc.c[js]);
            sc.h[js] = sc.go[js] * sc.tanh_c[js];
        }
        h_prev = sc.h;
        c_prev = sc.c;
    }
}

/// Backward pass of one branch; accumulates into the flat gradient buffer.
void backward_branch(const DeciderParams& params, const Layout& L, const BranchCache& cache,
                     std::vector<double> dh, double* grad) {
    const double* V = params.values.data();
    const double* Wp = V + L.proj_w;
    const double* Wx = V + L.lstm_wx;
    const double* Wh = V + L.lstm_wh;

    const std::size_t k = cache.steps.size();
    std::vector<double> dc(static_cast<std::size_t>(L.h), 0.0);
    std::vector<double> da(static_cast<std::size_t>(4 * L.h));
    std::vector<double> dx(static_cast<std::size_t>(L.p));
    std::vector<double> dh_prev(static_cast<std::size_t>(L.h));
    std::vector<double> dfeat(static_cast<std::size_t>(L.feat));
    std::vector<double> dq_mean(static_cast<std::size_t>(L.d), 0.0);

    const std::vector<double> zeros(static_cast<std::size_t>(L.h), 0.0);

    for (std::size_t t = k; t-- > 0;) {
        const StepCache& sc = cache.steps[t];
        const PairCache& pc = cache.pairs[t];
        const std::vector<double>& h_prev = t > 0 ? cache.steps[t - 1].h : zeros;
        const std::vector<double>& c_prev = t > 0 ? cache.steps[t - 1].c : zeros;

        for (std::int32_t j = 0; j < L.h; ++j) {
            const auto js = static_cast<std::size_t>(j);
            const double d_o = dh[js] * sc.tanh_c[js];
            da[static_cast<std::size_t>(3 * L.h + j)] = d_o * sc.go[js] * (1.0 - sc.go[js]);
            dc[js] += dh[js] * sc.go[js] * (1.0 - sc.tanh_c[js] * sc.tanh_c[js]);
            const double d_f = dc[js] * c_prev[js];
            da[static_cast<std::size_t>(L.h + j)] = d_f * sc.gf[js] * (1.0 - sc.gf[js]);
            const double d_i = dc[js] * sc.gg[js];
            da[js] = d_i * sc.gi[js] * (1.0 - sc.gi[js]);
            const double d_g = dc[js] * sc.gi[js];
            da[static_cast<std::size_t>(2 * L.h + j)] = d_g * (1.0 - sc.gg[js] * sc.gg[js]);
        }

        std::fill(dx.begin(), dx.end(), 0.0);
        std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
        for (std::int32_t r = 0; r < 4 * L.h; ++r) {
            const auto rs = static_cast<std::size_t>(r);
            const double dar = da[rs];
            grad[L.lstm_b + rs] += dar;
            double* gwx = grad + L.lstm_wx + rs * static_cast<std::size_t>(L.p);
            const double* wx = Wx + rs * static_cast<std::size_t>(L.p);
            for (std::int32_t col = 0; col < L.p; ++col) {
                gwx[col] += dar * pc.x[static_cast<std::size_t>(col)];
                dx[static_cast<std::size_t>(col)] += wx[col] * dar;
            }
            double* gwh = grad + L.lstm_wh + rs * static_cast<std::size_t>(L.h);
            const double* wh = Wh + rs * static_cast<std::size_t>(L.h);
            for (std::int32_t col = 0; col < L.h; ++col) {
                gwh[col] += dar * h_prev[static_cast<std::size_t>(col)];
                dh_prev[static_cast<std::size_t>(col)] += wh[col] * dar;
            }
        }
        for (std::int32_t j = 0; j < L.h; ++j) {
            const auto js = static_cast<std::size_t>(j);
            dc[js] *= sc.gf[js];
        }
        dh = dh_prev;

        // pair encoder backward
        std::fill(dfeat.begin(), dfeat.end(), 0.0);
        for (std::int32_t row = 0; row < L.p; ++row) {
            const auto rs = static_cast<std::size_t>(row);
            const double du = dx[rs] * (1.0 - pc.x[rs] * pc.x[rs]);
            grad[L.proj_b + rs] += du;
            double* gw = grad + L.proj_w + rs * static_cast<std::size_t>(L.feat);
            const double* w = Wp + rs * static_cast<std::size_t>(L.feat);
            for (std::int32_t col = 0; col < L.feat; ++col) {
                gw[col] += du * pc.feat[static_cast<std::size_t>(col)];
                dfeat[static_cast<std::size_t>(col)] += w[col] * du;
            }
        }
        std::vector<double> ddoc_mean(static_cast<std::size_t>(L.d));
        for (std::int32_t j = 0; j < L.d; ++j) {
            const auto js = static_cast<std::size_t>(j);
            dq_mean[js] += dfeat[js] + dfeat[static_cast<std::size_t>(2 * L.d + j)] * pc.doc_mean[js];
            ddoc_mean[js] =
                dfeat[static_cast<std::size_t>(L.d + j)] +
                dfeat[static_cast<std::size_t>(2 * L.d + j)] * cache.q_mean[js];
        }
        const double inv_dlen = 1.0 / static_cast<double>(pc.doc_eff.size());
        for (const auto tok : pc.doc_eff) {
            double* ge = grad + L.embeddings + static_cast<std::size_t>(tok) * L.d;
            for (std::int32_t j = 0; j < L.d; ++j) ge[j] += ddoc_mean[static_cast<std::size_t>(j)] * inv_dlen;
        }
    }

    const double inv_qlen = 1.0 / static_cast<double>(cache.q_eff.size());
    for (const auto tok : cache.q_eff) {
        double* ge = grad + L.embeddings + static_cast<std::size_t>(tok) * L.d;
        for (std::int32_t j = 0; j < L.d; ++j) ge[j] += dq_mean[static_cast<std::size_t>(j)] * inv_qlen;
    }
}

void check_instance_slots(const TrainingInstance& instance, std::int32_t k, std::size_t index) {
    if (instance.query_docs.size() != static_cast<std::size_t>(k) ||
        instance.expanded_docs.size() != static_cast<std::size_t>(k)) {
        throw std::invalid_argument("decider: instance " + std::to_string(index) +
                                    " does not have exactly k=" + std::to_string(k) +
                                    " document slots per branch");
    }
}

/// Shared loss (+ optional gradient) over a batch with explicit branch masks.
double batch_loss(const DeciderParams& params, const std::vector<TrainingInstance>& batch,
                  const std::vector<bool>& mask_expanded, double* grad) {
    if (batch.empty()) {
        throw std::invalid_argument("decider: empty batch");
    }
    if (mask_expanded.size() != batch.size()) {
        throw std::invalid_argument("decider: mask size does not match batch size");
    }
    const Layout L(params.config, params.vocab);
    const double* head_w = params.values.data() + L.head_w;
    const double head_b = params.values[L.head_b];
    const double inv_n = 1.0 / static_cast<double>(batch.size());

    double loss = 0.0;
    BranchCache left, right;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const TrainingInstance& inst = batch[i];
        check_instance_slots(inst, params.config.k, i);
        const bool use_right = !mask_expanded[i];

        run_branch(params, L, inst.query, inst.query_docs, left);
        if (use_right) run_branch(params, L, inst.expanded, inst.expanded_docs, right);

        const auto& hL = left.steps.back().h;
        double logit = head_b;
        for (std::int32_t j = 0; j < L.h; ++j) {
            logit += head_w[j] * hL[static_cast<std::size_t>(j)];
        }
        if (use_right) {
            const auto& hR = right.steps.back().h;
            for (std::int32_t j = 0; j < L.h; ++j) {
                logit += head_w[L.h + j] * hR[static_cast<std::size_t>(j)];
            }
        }
        const double theta = stable_sigmoid(logit);
        const double diff = theta - static_cast<double>(inst.label);
        loss += diff * diff * inv_n;

        if (grad) {
            const double dlogit = 2.0 * diff * theta * (1.0 - theta) * inv_n;
            grad[L.head_b] += dlogit;
            std::vector<double> dhL(static_cast<std::size_t>(L.h));
            for (std::int32_t j = 0; j < L.h; ++j) {
                grad[L.head_w + static_cast<std::size_t>(j)] +=
                    dlogit * hL[static_cast<std::size_t>(j)];
                dhL[static_cast<std::size_t>(j)] = dlogit * head_w[j];
            }
            backward_branch(params, L, left, std::move(dhL), grad);
            if (use_right) {
                const auto& hR = right.steps.back().h;
                std::vector<double> dhR(static_cast<std::size_t>(L.h));
                for (std::int32_t j = 0; j < L.h; ++j) {
                    grad[L.head_w + static_cast<std::size_t>(L.h + j)] +=
                        dlogit * hR[static_cast<std::size_t>(j)];
                    dhR[static_cast<std::size_t>(j)] = dlogit * head_w[L.h + j];
                }
                backward_branch(params, L, right, std::move(dhR), grad);
            }
        }
    }
    return loss;
}

}  // namespace

// ---- DeciderParams ----------------------------------------------------------

std::size_t DeciderParams::off_embeddings() const { return Layout(config, vocab).embeddings; }
std::size_t DeciderParams::off_proj_w() const { return Layout(config, vocab).proj_w; }
std::size_t DeciderParams::off_proj_b() const { return Layout(config, vocab).proj_b; }
std::size_t DeciderParams::off_lstm_wx() const { return Layout(config, vocab).lstm_wx; }
std::size_t DeciderParams::off_lstm_wh() const { return Layout(config, vocab).lstm_wh; }
std::size_t DeciderParams::off_lstm_b() const { return Layout(config, vocab).lstm_b; }
std::size_t DeciderParams::off_head_w() const { return Layout(config, vocab).head_w; }
std::size_t DeciderParams::off_head_b() const { return Layout(config, vocab).head_b; }
std::size_t DeciderParams::total_size() const { return Layout(config, vocab).total; }

DeciderParams init_decider(const DeciderConfig& config, Vocabulary vocab) {
    check_config(config);
    DeciderParams params;
    params.config = config;
    params.vocab = std::move(vocab);
    const Layout L(params.config, params.vocab);
    params.values.resize(L.total);
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> dist(-0.1, 0.1);
    for (auto& v : params.values) v = dist(rng);
    return params;
}

std::vector<double> encode_pair(const DeciderParams& params, const std::vector<std::int32_t>& query,
                                const std::vector<std::int32_t>& doc) {
    // run a single-slot branch and return the pair vector (the LSTM input)
    const Layout L(params.config, params.vocab);
    BranchCache cache;
    run_branch(params, L, query, {doc}, cache);
    return cache.pairs.front().x;
}

std::vector<double> encode_branch(const DeciderParams& params,
                                  const std::vector<std::int32_t>& query,
                                  const std::vector<std::vector<std::int32_t>>& docs) {
    if (docs.size() != static_cast<std::size_t>(params.config.k)) {
        throw std::invalid_argument("encode_branch: expected exactly k=" +
                                    std::to_string(params.config.k) + " document slots, got " +
                                    std::to_string(docs.size()));
    }
    const Layout L(params.config, params.vocab);
    BranchCache cache;
    run_branch(params, L, query, docs, cache);
    return cache.steps.back().h;
}

double forward_train(const DeciderParams& params, const TrainingInstance& instance) {
    check_instance_slots(instance, params.config.k, 0);
    const Layout L(params.config, params.vocab);
    BranchCache left, right;
    run_branch(params, L, instance.query, instance.query_docs, left);
    run_branch(params, L, instance.expanded, instance.expanded_docs, right);
    const double* head_w = params.values.data() + L.head_w;
    double logit = params.values[L.head_b];
    for (std::int32_t j = 0; j < L.h; ++j) {
        logit += head_w[j] * left.steps.back().h[static_cast<std::size_t>(j)];
        logit += head_w[L.h + j] * right.steps.back().h[static_cast<std::size_t>(j)];
    }
    return stable_sigmoid(logit);
}

double infer_theta(const DeciderParams& params, const std::vector<std::int32_t>& query,
                   const std::vector<std::vector<std::int32_t>>& docs) {
    const auto branch = encode_branch(params, query, docs);
    const Layout L(params.config, params.vocab);
    const double* head_w = params.values.data() + L.head_w;
    double logit = params.values[L.head_b];
    // the expanded half of the merged vector is the zero vector here
    for (std::int32_t j = 0; j < L.h; ++j) {
        logit += head_w[j] * branch[static_cast<std::size_t>(j)];
    }
    return stable_sigmoid(logit);
}

DecisionOutcome forward_infer(const DeciderParams& params, const std::string& query_id,
                              const std::vector<std::int32_t>& query,
                              const std::vector<std::vector<std::int32_t>>& docs) {
    DecisionOutcome outcome;
    outcome.query_id = query_id;
    outcome.theta = infer_theta(params, query, docs);
    outcome.apply_prf = outcome.theta > 0.5;
    outcome.method = "deep-srf";
    return outcome;
}

double decider_loss(const DeciderParams& params, const std::vector<TrainingInstance>& batch,
                    const std::vector<bool>& mask_expanded) {
    return batch_loss(params, batch, mask_expanded, nullptr);
}

std::vector<double> decider_gradient(const DeciderParams& params,
                                     const std::vector<TrainingInstance>& batch,
                                     const std::vector<bool>& mask_expanded) {
    std::vector<double> grad(params.values.size(), 0.0);
    batch_loss(params, batch, mask_expanded, grad.data());
    return grad;
}

DeciderTrainResult train_decider(const std::vector<TrainingInstance>& dataset,
                                 const DeciderConfig& config, Vocabulary vocab) {
    check_config(config);
    if (dataset.empty()) {
        throw std::invalid_argument("train_decider: empty dataset");
    }
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        check_instance_slots(dataset[i], config.k, i);
        if (dataset[i].label == 1) has_pos = true;
        else if (dataset[i].label == 0) has_neg = true;
        else throw std::invalid_argument("train_decider: labels must be 0 or 1");
    }
    if (!has_pos || !has_neg) {
        throw std::invalid_argument("train_decider: degenerate labels (single class)");
    }
    if (config.epochs < 1) {
        throw std::invalid_argument("train_decider: epochs must be >= 1");
    }

    DeciderTrainResult result;
    result.params = init_decider(config, std::move(vocab));
    std::mt19937_64 rng(config.seed + 1);  // init consumed config.seed
    std::bernoulli_distribution drop(config.branch_dropout);

    std::vector<bool> masks(dataset.size());
    std::vector<double> grad(result.params.values.size());
    result.loss_curve.reserve(static_cast<std::size_t>(config.epochs));
    for (std::int32_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t i = 0; i < masks.size(); ++i) masks[i] = drop(rng);
        std::fill(grad.begin(), grad.end(), 0.0);
        const double loss = batch_loss(result.params, dataset, masks, grad.data());
        result.loss_curve.push_back(loss);
        for (std::size_t j = 0; j < grad.size(); ++j) {
            result.params.values[j] -= config.learning_rate * grad[j];
        }
    }
    return result;
}

std::vector<std::vector<std::int32_t>> fit_doc_slots(std::vector<std::vector<std::int32_t>> docs,
                                                     std::int32_t k) {
    if (k < 1) throw std::invalid_argument("fit_doc_slots: k must be >= 1");
    docs.resize(static_cast<std::size_t>(k));
    return docs;
}

// ---- persistence ------------------------------------------------------------

namespace {
constexpr char kModelMagic[4] = {'S', 'R', 'F', 'D'};
constexpr std::uint8_t kModelVersion = 1;
}  // namespace

void save_decider(const std::string& path, const DeciderParams& params) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("save_decider: cannot open '" + path + "' for writing");
    }
    out.write(kModelMagic, 4);
    detail::write_u8(out, kModelVersion);
    detail::write_u32(out, static_cast<std::uint32_t>(params.config.embed_dim));
    detail::write_u32(out, static_cast<std::uint32_t>(params.config.pair_dim));
    detail::write_u32(out, static_cast<std::uint32_t>(params.config.hidden_dim));
    detail::write_u32(out, static_cast<std::uint32_t>(params.config.k));
    detail::write_f64(out, params.config.branch_dropout);
    detail::write_f64(out, params.config.learning_rate);
    detail::write_u32(out, static_cast<std::uint32_t>(params.config.epochs));
    detail::write_u64(out, params.config.seed);
    detail::write_u64(out, params.vocab.terms().size());
    for (const auto& t : params.vocab.terms()) detail::write_string(out, t);
    detail::write_u64(out, params.values.size());
    for (const double v : params.values) detail::write_f64(out, v);
    if (!out) {
        throw std::runtime_error("save_decider: write failed for '" + path + "'");
    }
}

DeciderParams load_decider(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("load_decider: cannot open '" + path + "'");
    }
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() != 4) detail::truncated("model header");
    if (std::memcmp(magic, kModelMagic, 4) != 0) {
        throw std::runtime_error(std::string("load_decider: bad magic, expected 'SRFD', found '") +
                                 std::string(magic, 4) + "'");
    }
    const auto version = detail::read_u8(in, "model version");
    if (version != kModelVersion) {
        throw std::runtime_error("load_decider: format version mismatch, expected " +
                                 std::to_string(static_cast<int>(kModelVersion)) + ", found " +
                                 std::to_string(static_cast<int>(version)));
    }
    DeciderConfig config;
    config.embed_dim = static_cast<std::int32_t>(detail::read_u32(in, "embed_dim"));
    config.pair_dim = static_cast<std::int32_t>(detail::read_u32(in, "pair_dim"));
    config.hidden_dim = static_cast<std::int32_t>(detail::read_u32(in, "hidden_dim"));
    config.k = static_cast<std::int32_t>(detail::read_u32(in, "k"));
    config.branch_dropout = detail::read_f64(in, "branch_dropout");
    config.learning_rate = detail::read_f64(in, "learning_rate");
    config.epochs = static_cast<std::int32_t>(detail::read_u32(in, "epochs"));
    config.seed = detail::read_u64(in, "seed");

    const auto n_terms = detail::read_u64(in, "vocabulary size");
    std::vector<std::string> terms;
    terms.reserve(n_terms);
    for (std::uint64_t i = 0; i < n_terms; ++i) terms.push_back(detail::read_string(in, "term"));
    Vocabulary vocab{std::move(terms)};

    DeciderParams params;
    params.config = config;
    params.vocab = std::move(vocab);
    const auto n_values = detail::read_u64(in, "parameter count");
    const Layout L(params.config, params.vocab);
    if (n_values != L.total) {
        throw std::runtime_error("load_decider: parameter count " + std::to_string(n_values) +
                                 " does not match dims (expected " + std::to_string(L.total) + ")");
    }
    params.values.resize(n_values);
    for (auto& v : params.values) v = detail::read_f64(in, "parameter");
    return params;
}

}  // namespace srf
