#pragma once

#include <string>

#include "srf/decision.hpp"
#include "srf/retrieval.hpp"

namespace srf {

struct FusionConfig {
    std::int32_t aleph = 1000;  // rank assigned to missing documents; must exceed k
    std::int32_t k = 1000;      // output depth, aligned with the MAP cutoff
};

/// 1-based rank of the document in the list, or aleph when absent.
std::int32_t rank_of(const std::string& doc_id, const RankedList& list, std::int32_t aleph);

/// Reciprocal-rank fusion over the union of the two lists' documents:
/// score(D) = (1 - theta)/rank(D, pre) + theta/rank(D, post),
/// sorted descending with doc-id tie-break, truncated to config.k.
RankedList fuse_confidence(const RankedList& pre, const RankedList& post, double theta,
                           const FusionConfig& config = {});

/// Fixed-weight fusion; identical to fuse_confidence with theta = alpha.
RankedList fuse_fixed(const RankedList& pre, const RankedList& post, double alpha,
                      const FusionConfig& config = {});

/// Hard selection: the post-feedback list when the decision says apply,
/// otherwise the pre-feedback list, unchanged.
RankedList select_hard(const RankedList& pre, const RankedList& post,
                       const DecisionOutcome& decision);

}  // namespace srf
