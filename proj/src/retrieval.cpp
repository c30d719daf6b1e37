#include "srf/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace srf {

namespace {

void check_depth(std::int32_t k) {
    if (k < 1) throw std::invalid_argument("search: depth k must be >= 1");
}

/// Sort accumulated (internal id, score) pairs by score descending, internal
/// id ascending, truncate to k and map back to external ids.
RankedList finalize(const InvertedIndex& index, const std::string& query_id,
                    std::vector<std::pair<std::int32_t, double>> scored, std::int32_t k) {
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (scored.size() > static_cast<std::size_t>(k)) scored.resize(static_cast<std::size_t>(k));

    RankedList list;
    list.query_id = query_id;
    list.k = k;
    list.entries.reserve(scored.size());
    for (const auto& [id, score] : scored) {
        list.entries.push_back(ScoredDoc{index.doc(id).doc_id, score});
    }
    return list;
}

}  // namespace

std::map<std::string, double> effective_weights(const Query& query) {
    if (query.terms.empty()) {
        throw std::invalid_argument("effective_weights: query '" + query.query_id + "' is empty");
    }
    std::map<std::string, double> weights;
    if (query.weights.empty()) {
        for (const auto& t : query.terms) weights[t] += 1.0;
    } else {
        for (const auto& [t, w] : query.weights) {
            if (w <= 0.0) {
                throw std::invalid_argument("effective_weights: non-positive weight for term '" +
                                            t + "'");
            }
            weights[t] = w;
        }
    }
    return weights;
}

RankedList search_bm25(const InvertedIndex& index, const Query& query, std::int32_t k,
                       const Bm25Params& params) {
    check_depth(k);
    const auto weights = effective_weights(query);

    const double n_docs = static_cast<double>(index.doc_count());
    const double avdl = index.avg_doc_length();

    std::unordered_map<std::int32_t, double> acc;
    for (const auto& [t, w] : weights) {
        const TermEntry* entry = index.term(t);
        if (!entry) continue;
        const double df = static_cast<double>(entry->postings.size());
        const double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
        for (const Posting& p : entry->postings) {
            const double tf = static_cast<double>(p.tf);
            const double dl = static_cast<double>(index.doc(p.doc).length);
            const double norm =
                tf * (params.k1 + 1.0) / (tf + params.k1 * (1.0 - params.b + params.b * dl / avdl));
            acc[p.doc] += w * idf * norm;
        }
    }

    std::vector<std::pair<std::int32_t, double>> scored(acc.begin(), acc.end());
    return finalize(index, query.query_id, std::move(scored), k);
}

RankedList search_lm_dirichlet(const InvertedIndex& index, const Query& query, std::int32_t k,
                               double mu) {
    check_depth(k);
    if (mu <= 0.0) throw std::invalid_argument("search_lm_dirichlet: mu must be positive");
    const auto weights = effective_weights(query);

    const double coll_tokens = static_cast<double>(index.total_tokens());

    // per-term tf maps over the candidate set (docs matching >= 1 query term)
    std::vector<std::pair<std::string, double>> in_vocab;  // (term, P(t|C))
    std::unordered_map<std::string, std::unordered_map<std::int32_t, std::int32_t>> tf_of;
    std::unordered_map<std::int32_t, char> candidates;
    for (const auto& [t, w] : weights) {
        (void)w;
        const TermEntry* entry = index.term(t);
        if (!entry) continue;  // OOV terms carry no signal and are skipped
        in_vocab.emplace_back(t, static_cast<double>(entry->cf) / coll_tokens);
        auto& tfs = tf_of[t];
        for (const Posting& p : entry->postings) {
            tfs.emplace(p.doc, p.tf);
            candidates.emplace(p.doc, 0);
        }
    }

    std::vector<std::pair<std::int32_t, double>> scored;
    scored.reserve(candidates.size());
    for (const auto& [id, unused] : candidates) {
        (void)unused;
        const double dl = static_cast<double>(index.doc(id).length);
        double score = 0.0;
        for (const auto& [t, pc] : in_vocab) {
            const auto& tfs = tf_of[t];
            auto it = tfs.find(id);
            const double tf = it == tfs.end() ? 0.0 : static_cast<double>(it->second);
            score += weights.at(t) * std::log((tf + mu * pc) / (dl + mu));
        }
        scored.emplace_back(id, score);
    }
    return finalize(index, query.query_id, std::move(scored), k);
}

RankedList search(const InvertedIndex& index, const Query& query, std::int32_t k,
                  const ScoringConfig& config) {
    switch (config.model) {
        case RetrievalModel::bm25:
            return search_bm25(index, query, k, config.bm25);
        case RetrievalModel::lm_dirichlet:
            return search_lm_dirichlet(index, query, k, config.mu);
    }
    throw std::logic_error("search: unknown retrieval model");
}

std::vector<Query> read_queries_tsv(const std::string& path, const TokenizerConfig& config) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("read_queries_tsv: cannot open '" + path + "'");
    }
    std::vector<Query> queries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw std::runtime_error("read_queries_tsv: line " + std::to_string(line_no) +
                                     " has no tab separator");
        }
        Query q;
        q.query_id = line.substr(0, tab);
        q.terms = tokenize(line.substr(tab + 1), config);
        queries.push_back(std::move(q));
    }
    return queries;
}

}  // namespace srf
