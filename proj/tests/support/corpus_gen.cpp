#include "support/corpus_gen.hpp"

#include <algorithm>
#include <numeric>

namespace srf::testsupport {

SyntheticCorpus random_corpus(std::mt19937_64& rng, int n_docs, int vocab_size, int min_len,
                              int max_len) {
    std::uniform_int_distribution<int> len_dist(min_len, max_len);
    std::uniform_int_distribution<int> term_dist(0, vocab_size - 1);
    SyntheticCorpus corpus;
    corpus.docs.reserve(static_cast<std::size_t>(n_docs));
    corpus.doc_tokens.reserve(static_cast<std::size_t>(n_docs));
    for (int i = 0; i < n_docs; ++i) {
        const int len = len_dist(rng);
        std::vector<std::string> tokens;
        std::string text;
        tokens.reserve(static_cast<std::size_t>(len));
        for (int j = 0; j < len; ++j) {
            std::string term = "t" + std::to_string(term_dist(rng));
            if (j > 0) text += ' ';
            text += term;
            tokens.push_back(std::move(term));
        }
        corpus.docs.push_back(srf::Document{"d" + std::to_string(i), text});
        corpus.doc_tokens.push_back(std::move(tokens));
    }
    return corpus;
}

srf::Query random_query(std::mt19937_64& rng, const std::string& id, int vocab_size,
                        int max_terms) {
    std::uniform_int_distribution<int> n_dist(1, max_terms);
    std::uniform_int_distribution<int> term_dist(0, vocab_size - 1);
    srf::Query query;
    query.query_id = id;
    const int n = n_dist(rng);
    for (int i = 0; i < n; ++i) {
        query.terms.push_back("t" + std::to_string(term_dist(rng)));
    }
    return query;
}

srf::Qrels random_qrels(std::mt19937_64& rng, const std::vector<std::string>& query_ids,
                        int n_docs, double rel_prob, int max_grade) {
    std::bernoulli_distribution judged(rel_prob);
    std::uniform_int_distribution<int> grade_dist(1, max_grade);
    srf::Qrels qrels;
    for (const auto& query_id : query_ids) {
        auto& docs = qrels.grades[query_id];  // query present even with zero relevant docs
        for (int i = 0; i < n_docs; ++i) {
            if (judged(rng)) docs.emplace("d" + std::to_string(i), grade_dist(rng));
        }
    }
    return qrels;
}

srf::RankedList random_ranked_list(std::mt19937_64& rng, const std::string& query_id, int n_docs,
                                   int depth) {
    std::vector<int> ids(static_cast<std::size_t>(n_docs));
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    const int n = std::min(n_docs, depth);
    srf::RankedList list;
    list.query_id = query_id;
    list.k = depth;
    std::uniform_real_distribution<double> gap(0.01, 1.0);
    double score = 100.0;
    for (int i = 0; i < n; ++i) {
        score -= gap(rng);
        list.entries.push_back(srf::ScoredDoc{"d" + std::to_string(ids[static_cast<std::size_t>(i)]), score});
    }
    return list;
}

}  // namespace srf::testsupport
