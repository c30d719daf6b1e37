#include "srf/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "srf/trec_io.hpp"

namespace srf {

TermDistribution estimate_rm1(const InvertedIndex& index, const Query& query,
                              const RankedList& initial, std::int32_t fb_docs,
                              std::int32_t fb_terms, double mu) {
    if (initial.entries.empty()) {
        throw std::invalid_argument("estimate_rm1: empty initial list, no feedback possible");
    }
    if (fb_docs < 1 || fb_terms < 1) {
        throw std::invalid_argument("estimate_rm1: fb_docs and fb_terms must be >= 1");
    }
    if (mu <= 0.0) {
        throw std::invalid_argument("estimate_rm1: mu must be positive");
    }
    const auto weights = effective_weights(query);

    const std::size_t n_fb =
        std::min<std::size_t>(initial.entries.size(), static_cast<std::size_t>(fb_docs));
    std::vector<std::int32_t> ids;
    ids.reserve(n_fb);
    for (std::size_t i = 0; i < n_fb; ++i) {
        const auto id = index.internal_id(initial.entries[i].doc_id);
        if (id < 0) {
            throw std::invalid_argument("estimate_rm1: document '" + initial.entries[i].doc_id +
                                        "' not present in the index");
        }
        ids.push_back(id);
    }

    // Dirichlet-smoothed log query likelihood per feedback document,
    // renormalized via softmax across the feedback set.
    const double coll_tokens = static_cast<double>(index.total_tokens());
    std::vector<double> log_lik(n_fb, 0.0);
    for (const auto& [t, w] : weights) {
        const TermEntry* entry = index.term(t);
        if (!entry) continue;
        const double pc = static_cast<double>(entry->cf) / coll_tokens;
        for (std::size_t i = 0; i < n_fb; ++i) {
            const auto& postings = entry->postings;
            auto it = std::lower_bound(
                postings.begin(), postings.end(), ids[i],
                [](const Posting& p, std::int32_t id) { return p.doc < id; });
            const double tf =
                (it != postings.end() && it->doc == ids[i]) ? static_cast<double>(it->tf) : 0.0;
            const double dl = static_cast<double>(index.doc(ids[i]).length);
            log_lik[i] += w * std::log((tf + mu * pc) / (dl + mu));
        }
    }
    const double max_ll = *std::max_element(log_lik.begin(), log_lik.end());
    double norm = 0.0;
    std::vector<double> doc_weight(n_fb);
    for (std::size_t i = 0; i < n_fb; ++i) {
        doc_weight[i] = std::exp(log_lik[i] - max_ll);
        norm += doc_weight[i];
    }
    for (auto& dw : doc_weight) dw /= norm;

    const auto models = gather_doc_models(index, ids);
    TermDistribution rm1;
    for (std::size_t i = 0; i < n_fb; ++i) {
        for (const auto& [t, p] : models[i].mass) {
            rm1.mass[t] += doc_weight[i] * p;
        }
    }
    if (rm1.mass.empty()) {
        throw std::invalid_argument("estimate_rm1: feedback documents are all empty");
    }
    rm1.truncate_top(static_cast<std::size_t>(fb_terms));
    return rm1;
}

ExpandedQuery interpolate_rm3(const Query& query, const TermDistribution& rm1, double lambda) {
    if (lambda < 0.0 || lambda > 1.0) {
        throw std::invalid_argument("interpolate_rm3: lambda must be in [0, 1]");
    }
    if (std::abs(rm1.sum() - 1.0) > 1e-6) {
        throw std::invalid_argument("interpolate_rm3: rm1 distribution is not normalized");
    }
    const auto query_mle = mle_distribution(query.terms);

    ExpandedQuery expanded;
    expanded.query_id = query.query_id;
    expanded.provenance = "rm3";
    expanded.lambda = lambda;
    for (const auto& [t, p] : query_mle.mass) {
        expanded.term_weights[t] += lambda * p;
    }
    for (const auto& [t, p] : rm1.mass) {
        expanded.term_weights[t] += (1.0 - lambda) * p;
    }
    // drop zero-weight terms (lambda endpoints produce exact zeros)
    for (auto it = expanded.term_weights.begin(); it != expanded.term_weights.end();) {
        if (it->second <= 0.0) {
            it = expanded.term_weights.erase(it);
        } else {
            ++it;
        }
    }
    return expanded;
}

ExpandedQuery expand_query(const InvertedIndex& index, const Query& query,
                           const RankedList& initial, const FeedbackParams& params) {
    auto rm1 = estimate_rm1(index, query, initial, params.fb_docs, params.fb_terms, params.mu);
    auto expanded = interpolate_rm3(query, rm1, params.lambda);
    expanded.fb_docs = params.fb_docs;
    expanded.fb_terms = params.fb_terms;
    return expanded;
}

RankedList search_expanded(const InvertedIndex& index, const ExpandedQuery& expanded,
                           std::int32_t k, const ScoringConfig& config) {
    if (expanded.term_weights.empty()) {
        throw std::invalid_argument("search_expanded: expanded query '" + expanded.query_id +
                                    "' is empty");
    }
    Query query;
    query.query_id = expanded.query_id;
    for (const auto& [t, w] : expanded.term_weights) query.terms.push_back(t);
    query.weights = expanded.term_weights;
    return search(index, query, k, config);
}

ExternalRuns load_external_run(const std::string& path, std::int32_t k) {
    if (k < 1) throw std::invalid_argument("load_external_run: depth k must be >= 1");
    ExternalRuns result;
    auto raw = read_trec_run_raw(path);
    if (raw.empty()) {
        result.warnings.push_back("'" + path + "' contains no run entries");
        return result;
    }
    for (auto& [query_id, entries] : raw) {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].rank != static_cast<std::int32_t>(i + 1)) {
                result.warnings.push_back("query '" + query_id +
                                          "': rank gap in '" + path + "', ranks re-densified");
                break;
            }
        }
        if (entries.size() > static_cast<std::size_t>(k)) {
            entries.resize(static_cast<std::size_t>(k));
        }
        RankedList list;
        list.query_id = query_id;
        list.k = k;
        list.entries.reserve(entries.size());
        for (auto& e : entries) list.entries.push_back(ScoredDoc{std::move(e.doc_id), e.score});
        result.runs.emplace(query_id, std::move(list));
    }
    return result;
}

void write_expanded_tsv(const std::string& path, const std::vector<ExpandedQuery>& expanded) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("write_expanded_tsv: cannot open '" + path + "' for writing");
    }
    char buf[64];
    for (const auto& eq : expanded) {
        out << eq.query_id << '\t';
        const auto terms = expansion_terms_by_weight(eq);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (i > 0) out << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", eq.term_weights.at(terms[i]));
            out << terms[i] << ':' << buf;
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("write_expanded_tsv: write failed for '" + path + "'");
    }
}

std::vector<ExpandedQuery> read_expanded_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("read_expanded_tsv: cannot open '" + path + "'");
    }
    std::vector<ExpandedQuery> result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw std::runtime_error("read_expanded_tsv: line " + std::to_string(line_no) +
                                     " has no tab separator");
        }
        ExpandedQuery eq;
        eq.query_id = line.substr(0, tab);
        eq.provenance = "rm3";
        std::string rest = line.substr(tab + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            auto comma = rest.find(',', pos);
            if (comma == std::string::npos) comma = rest.size();
            const std::string item = rest.substr(pos, comma - pos);
            auto colon = item.rfind(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 >= item.size()) {
                throw std::runtime_error("read_expanded_tsv: malformed term:weight at line " +
                                         std::to_string(line_no));
            }
            const std::string term = item.substr(0, colon);
            double weight;
            try {
                std::size_t parsed = 0;
                weight = std::stod(item.substr(colon + 1), &parsed);
                if (parsed != item.size() - colon - 1) throw std::invalid_argument("weight");
            } catch (const std::exception&) {
                throw std::runtime_error("read_expanded_tsv: malformed weight at line " +
                                         std::to_string(line_no));
            }
            if (weight <= 0.0) {
                throw std::runtime_error("read_expanded_tsv: non-positive weight at line " +
                                         std::to_string(line_no));
            }
            eq.term_weights[term] = weight;
            pos = comma + 1;
        }
        if (eq.term_weights.empty()) {
            throw std::runtime_error("read_expanded_tsv: empty expansion at line " +
                                     std::to_string(line_no));
        }
        result.push_back(std::move(eq));
    }
    return result;
}

std::vector<std::string> expansion_terms_by_weight(const ExpandedQuery& expanded) {
    std::vector<std::pair<std::string, double>> items(expanded.term_weights.begin(),
                                                      expanded.term_weights.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> terms;
    terms.reserve(items.size());
    for (auto& [t, w] : items) {
        (void)w;
        terms.push_back(std::move(t));
    }
    return terms;
}

}  // namespace srf
