#pragma once

// Independently written AP and nDCG@10 used as oracles for the metrics
// module. Deliberately different computation style: quadratic prefix counts
// for precision, std::pow-based gains.

#include <map>
#include <set>
#include <string>
#include <vector>

namespace srf::testsupport {

double reference_average_precision(const std::vector<std::string>& ranked_docs,
                                   const std::set<std::string>& relevant, int cutoff);

double reference_ndcg10(const std::vector<std::string>& ranked_docs,
                        const std::map<std::string, int>& grades);

}  // namespace srf::testsupport
