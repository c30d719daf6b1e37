#pragma once

#include <map>
#include <string>
#include <vector>

#include "srf/index.hpp"

namespace srf {

/// A query. Weights are optional; when absent the raw term counts are used.
struct Query {
    std::string query_id;
    std::vector<std::string> terms;
    std::map<std::string, double> weights;  // per distinct term, all positive when set
};

struct ScoredDoc {
    std::string doc_id;
    double score;
};

/// Ordered top-k result list for one query. Scores are non-increasing; ties
/// are broken by internal doc id ascending; no duplicate documents.
struct RankedList {
    std::string query_id;
    std::vector<ScoredDoc> entries;
    std::int32_t k = 0;  // requested depth
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

enum class RetrievalModel { bm25, lm_dirichlet };

/// Scorer selection plus its parameters, for call sites that take the model
/// as data (second-stage retrieval, the CLI).
struct ScoringConfig {
    RetrievalModel model = RetrievalModel::bm25;
    Bm25Params bm25{};
    double mu = 1000.0;
};

/// Distinct query terms with their effective weights (raw counts unless the
/// query carries explicit weights). Errors on an empty query or non-positive
/// weights.
std::map<std::string, double> effective_weights(const Query& query);

/// Okapi BM25 with the non-negative idf variant
/// ln(1 + (N - df + 0.5)/(df + 0.5)). Documents matching no query term are
/// never returned; query terms absent from the corpus are skipped.
RankedList search_bm25(const InvertedIndex& index, const Query& query, std::int32_t k,
                       const Bm25Params& params = {});

/// Dirichlet-smoothed query likelihood,
/// score(D) = sum_t w(t) * log((tf(t,D) + mu*P(t|C)) / (|D| + mu)),
/// summed over in-vocabulary query terms; only documents matching at least
/// one query term are scored.
RankedList search_lm_dirichlet(const InvertedIndex& index, const Query& query, std::int32_t k,
                               double mu = 1000.0);

RankedList search(const InvertedIndex& index, const Query& query, std::int32_t k,
                  const ScoringConfig& config);

/// Queries input: TSV `query_id<TAB>query text`, tokenized with `config`.
std::vector<Query> read_queries_tsv(const std::string& path, const TokenizerConfig& config = {});

}  // namespace srf
