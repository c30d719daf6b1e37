#pragma once

// Independent exhaustive scorers. These recompute every statistic from the
// raw token lists (never from an InvertedIndex) so they can serve as oracles
// for the retrieval and feedback implementations.

#include <string>
#include <vector>

#include "srf/distribution.hpp"
#include "srf/retrieval.hpp"

namespace srf::testsupport {

srf::RankedList brute_force_bm25(const std::vector<std::string>& doc_ids,
                                 const std::vector<std::vector<std::string>>& doc_tokens,
                                 const srf::Query& query, int k, double k1, double b);

srf::RankedList brute_force_lm_dirichlet(const std::vector<std::string>& doc_ids,
                                         const std::vector<std::vector<std::string>>& doc_tokens,
                                         const srf::Query& query, int k, double mu);

/// RM1 by the double loop over (feedback docs x corpus vocabulary), with the
/// query likelihood evaluated as a direct probability product.
srf::TermDistribution brute_force_rm1(const std::vector<std::vector<std::string>>& doc_tokens,
                                      const std::vector<std::size_t>& fb_doc_indices,
                                      const srf::Query& query, int fb_terms, double mu);

}  // namespace srf::testsupport
