#include "srf/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace srf {

double TermDistribution::sum() const {
    double total = 0.0;
    for (const auto& [term, p] : mass) {
        (void)term;
        total += p;
    }
    return total;
}

double TermDistribution::prob(const std::string& term) const {
    auto it = mass.find(term);
    return it == mass.end() ? 0.0 : it->second;
}

void TermDistribution::normalize() {
    double total = sum();
    if (total <= 0.0) {
        throw std::invalid_argument("TermDistribution::normalize: total mass is not positive");
    }
    for (auto& [term, p] : mass) {
        (void)term;
        p /= total;
    }
}

void TermDistribution::truncate_top(std::size_t n) {
    if (mass.size() <= n) {
        normalize();
        return;
    }
    std::vector<std::pair<std::string, double>> items(mass.begin(), mass.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    items.resize(n);
    mass.clear();
    for (auto& [term, p] : items) mass.emplace(std::move(term), p);
    normalize();
}

TermDistribution mle_distribution(const std::vector<std::string>& tokens) {
    if (tokens.empty()) {
        throw std::invalid_argument("mle_distribution: empty token sequence");
    }
    TermDistribution dist;
    for (const auto& t : tokens) dist.mass[t] += 1.0;
    const double n = static_cast<double>(tokens.size());
    for (auto& [term, p] : dist.mass) {
        (void)term;
        p /= n;
    }
    return dist;
}

TermDistribution uniform_mixture(const std::vector<TermDistribution>& parts) {
    if (parts.empty()) {
        throw std::invalid_argument("uniform_mixture: no distributions given");
    }
    TermDistribution mix;
    const double w = 1.0 / static_cast<double>(parts.size());
    for (const auto& part : parts) {
        for (const auto& [term, p] : part.mass) mix.mass[term] += w * p;
    }
    return mix;
}

double kl_divergence(const TermDistribution& p, const TermDistribution& q) {
    double kl = 0.0;
    for (const auto& [term, pt] : p.mass) {
        if (pt <= 0.0) continue;
        double qt = q.prob(term);
        if (qt <= 0.0) {
            throw std::domain_error("kl_divergence: zero reference mass for term '" + term + "'");
        }
        kl += pt * std::log(pt / qt);
    }
    return kl;
}

double kl_divergence_smoothed(const TermDistribution& p, const TermDistribution& q,
                              double epsilon) {
    if (epsilon <= 0.0) {
        throw std::invalid_argument("kl_divergence_smoothed: epsilon must be positive");
    }
    std::set<std::string> vocab;
    for (const auto& [term, pt] : p.mass) {
        if (pt > 0.0) vocab.insert(term);
    }
    for (const auto& [term, qt] : q.mass) {
        if (qt > 0.0) vocab.insert(term);
    }
    const double denom = 1.0 + epsilon * static_cast<double>(vocab.size());
    double kl = 0.0;
    for (const auto& [term, pt] : p.mass) {
        if (pt <= 0.0) continue;
        double qt = (q.prob(term) + epsilon) / denom;
        kl += pt * std::log(pt / qt);
    }
    return kl;
}

double js_divergence(const TermDistribution& p, const TermDistribution& q) {
    TermDistribution mid;
    for (const auto& [term, pt] : p.mass) mid.mass[term] += 0.5 * pt;
    for (const auto& [term, qt] : q.mass) mid.mass[term] += 0.5 * qt;
    return 0.5 * kl_divergence(p, mid) + 0.5 * kl_divergence(q, mid);
}

}  // namespace srf
