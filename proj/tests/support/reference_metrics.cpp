#include "support/reference_metrics.hpp"

#include <algorithm>
#include <cmath>

namespace srf::testsupport {

double reference_average_precision(const std::vector<std::string>& ranked_docs,
                                   const std::set<std::string>& relevant, int cutoff) {
    if (relevant.empty()) return 0.0;
    double sum = 0.0;
    const std::size_t depth = std::min<std::size_t>(ranked_docs.size(),
                                                    static_cast<std::size_t>(cutoff));
    for (std::size_t i = 0; i < depth; ++i) {
        if (!relevant.count(ranked_docs[i])) continue;
        // precision at i+1 recomputed from scratch over the prefix
        int hits = 0;
        for (std::size_t j = 0; j <= i; ++j) {
            if (relevant.count(ranked_docs[j])) ++hits;
        }
        sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
    return sum / static_cast<double>(relevant.size());
}

double reference_ndcg10(const std::vector<std::string>& ranked_docs,
                        const std::map<std::string, int>& grades) {
    std::vector<int> all_grades;
    for (const auto& [doc, g] : grades) {
        (void)doc;
        if (g > 0) all_grades.push_back(g);
    }
    if (all_grades.empty()) return 0.0;
    std::sort(all_grades.rbegin(), all_grades.rend());

    double dcg = 0.0;
    for (std::size_t i = 0; i < ranked_docs.size() && i < 10; ++i) {
        auto it = grades.find(ranked_docs[i]);
        const int g = it == grades.end() ? 0 : it->second;
        if (g > 0) {
            dcg += (std::pow(2.0, g) - 1.0) * std::log(2.0) / std::log(static_cast<double>(i + 2));
        }
    }
    double idcg = 0.0;
    for (std::size_t i = 0; i < all_grades.size() && i < 10; ++i) {
        idcg += (std::pow(2.0, all_grades[i]) - 1.0) * std::log(2.0) /
                std::log(static_cast<double>(i + 2));
    }
    return dcg / idcg;
}

}  // namespace srf::testsupport
