#pragma once

#include <map>
#include <string>
#include <vector>

#include "srf/index.hpp"
#include "srf/retrieval.hpp"

namespace srf {

/// Weighted term vector produced by a feedback model (the enriched query).
/// term_weights always sums to 1.
struct ExpandedQuery {
    std::string query_id;
    std::map<std::string, double> term_weights;
    std::string provenance;  // feedback model tag, e.g. "rm3"
    std::int32_t fb_docs = 0;
    std::int32_t fb_terms = 0;
    double lambda = 0.0;
};

struct FeedbackParams {
    std::int32_t fb_docs = 10;
    std::int32_t fb_terms = 20;
    double lambda = 0.6;
    double mu = 1000.0;  // smoothing for the query likelihood inside RM1
};

/// Relevance model over the top min(fb_docs, |initial|) documents:
/// weight(t) = sum_D P(t|D) * P(Q|D), with P(Q|D) the Dirichlet-smoothed
/// query likelihood renormalized across the feedback set. The fb_terms
/// heaviest terms are kept and the result renormalized.
/// Errors on an empty initial list ("no feedback possible").
TermDistribution estimate_rm1(const InvertedIndex& index, const Query& query,
                              const RankedList& initial, std::int32_t fb_docs,
                              std::int32_t fb_terms, double mu = 1000.0);

/// RM3 interpolation: weight(t) = lambda * P_mle(t|Q) + (1 - lambda) * rm1(t).
ExpandedQuery interpolate_rm3(const Query& query, const TermDistribution& rm1, double lambda);

/// estimate_rm1 + interpolate_rm3, with the feedback configuration recorded
/// on the result.
ExpandedQuery expand_query(const InvertedIndex& index, const Query& query,
                           const RankedList& initial, const FeedbackParams& params);

/// Second-stage retrieval with the expansion weights as query weights.
RankedList search_expanded(const InvertedIndex& index, const ExpandedQuery& expanded,
                           std::int32_t k, const ScoringConfig& config);

struct ExternalRuns {
    std::map<std::string, RankedList> runs;
    std::vector<std::string> warnings;
};

/// Read a post-feedback run produced by an external system, truncated to
/// depth k. Rank gaps are re-densified with a warning; an empty file yields
/// an empty map with a warning.
ExternalRuns load_external_run(const std::string& path, std::int32_t k);

/// Audit format: `query_id<TAB>term:weight,term:weight,...`, terms ordered by
/// weight descending. Weights round-trip exactly.
void write_expanded_tsv(const std::string& path, const std::vector<ExpandedQuery>& expanded);
std::vector<ExpandedQuery> read_expanded_tsv(const std::string& path);

/// Expansion terms ordered by weight descending (ties by term ascending);
/// the token-sequence view of an expanded query.
std::vector<std::string> expansion_terms_by_weight(const ExpandedQuery& expanded);

}  // namespace srf
