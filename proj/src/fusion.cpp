#include "srf/fusion.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace srf {

std::int32_t rank_of(const std::string& doc_id, const RankedList& list, std::int32_t aleph) {
    if (aleph <= static_cast<std::int32_t>(list.entries.size())) {
        throw std::invalid_argument("rank_of: aleph must exceed the list length");
    }
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        if (list.entries[i].doc_id == doc_id) return static_cast<std::int32_t>(i + 1);
    }
    return aleph;
}

RankedList fuse_confidence(const RankedList& pre, const RankedList& post, double theta,
                           const FusionConfig& config) {
    if (pre.query_id != post.query_id) {
        throw std::invalid_argument("fuse_confidence: mismatched query ids '" + pre.query_id +
                                    "' vs '" + post.query_id + "'");
    }
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("fuse_confidence: theta must be in [0, 1]");
    }
    if (config.aleph <= config.k) {
        throw std::invalid_argument("fuse_confidence: aleph must exceed the output depth k");
    }
    const auto max_len =
        static_cast<std::int32_t>(std::max(pre.entries.size(), post.entries.size()));
    if (config.aleph <= max_len) {
        throw std::invalid_argument("fuse_confidence: aleph must exceed both list lengths");
    }

    // union of documents with their 1-based ranks in each list
    std::map<std::string, std::pair<std::int32_t, std::int32_t>> ranks;  // doc -> (pre, post)
    for (std::size_t i = 0; i < pre.entries.size(); ++i) {
        ranks[pre.entries[i].doc_id] = {static_cast<std::int32_t>(i + 1), config.aleph};
    }
    for (std::size_t i = 0; i < post.entries.size(); ++i) {
        auto [it, inserted] = ranks.try_emplace(post.entries[i].doc_id, config.aleph,
                                                static_cast<std::int32_t>(i + 1));
        if (!inserted) it->second.second = static_cast<std::int32_t>(i + 1);
    }

    std::vector<ScoredDoc> fused;
    fused.reserve(ranks.size());
    for (const auto& [doc_id, r] : ranks) {
        const double score = (1.0 - theta) / static_cast<double>(r.first) +
                             theta / static_cast<double>(r.second);
        fused.push_back(ScoredDoc{doc_id, score});
    }
    std::sort(fused.begin(), fused.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    if (fused.size() > static_cast<std::size_t>(config.k)) {
        fused.resize(static_cast<std::size_t>(config.k));
    }

    RankedList result;
    result.query_id = pre.query_id;
    result.k = config.k;
    result.entries = std::move(fused);
    return result;
}

RankedList fuse_fixed(const RankedList& pre, const RankedList& post, double alpha,
                      const FusionConfig& config) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("fuse_fixed: alpha must be in [0, 1]");
    }
    return fuse_confidence(pre, post, alpha, config);
}

RankedList select_hard(const RankedList& pre, const RankedList& post,
                       const DecisionOutcome& decision) {
    return decision.apply_prf ? post : pre;
}

}  // namespace srf
