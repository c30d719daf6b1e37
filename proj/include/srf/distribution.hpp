#pragma once

#include <map>
#include <string>
#include <vector>

namespace srf {

/// Probability mass over vocabulary terms. Backing map is ordered so that
/// iteration (and therefore any accumulation over it) is deterministic.
struct TermDistribution {
    std::map<std::string, double> mass;

    double sum() const;
    double prob(const std::string& term) const;  // 0 for absent terms

    /// Scale so that the total mass is 1. Errors on zero/negative total.
    void normalize();

    /// Keep the `n` heaviest terms (ties broken by term, ascending) and renormalize.
    void truncate_top(std::size_t n);
};

/// Maximum-likelihood distribution of a token sequence. Errors on empty input.
TermDistribution mle_distribution(const std::vector<std::string>& tokens);

/// Uniform mixture of the given distributions. Errors on empty input.
TermDistribution uniform_mixture(const std::vector<TermDistribution>& parts);

/// KL(p || q), natural log, summed over p's support.
/// Errors if q has zero mass on any term of p's support.
double kl_divergence(const TermDistribution& p, const TermDistribution& q);

/// KL(p || q') where q' is q with add-epsilon mass on the union support of
/// p and q, renormalized. Total for any p, q with positive epsilon.
double kl_divergence_smoothed(const TermDistribution& p, const TermDistribution& q,
                              double epsilon = 1e-6);

/// Jensen-Shannon divergence, natural log; bounded by ln 2.
double js_divergence(const TermDistribution& p, const TermDistribution& q);

}  // namespace srf
