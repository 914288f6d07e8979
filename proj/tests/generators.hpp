#pragma once

// Hand-rolled generators for the property tests.

#include "infoprop/network.hpp"
#include "infoprop/pmf.hpp"
#include "infoprop/rng.hpp"

#include <cmath>
#include <vector>

namespace gen {

using infoprop::Pmf;
using infoprop::Rng;

// Random pmf on [k_min, k_min + width), every entry positive.
inline Pmf random_pmf(Rng& rng, int k_min_lo = 1, int k_min_hi = 3, int max_width = 12)
{
    Pmf p;
    p.k_min = k_min_lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(k_min_hi - k_min_lo + 1)));
    const auto width = 1 + rng.below(static_cast<std::uint64_t>(max_width));
    for (std::uint64_t j = 0; j < width; ++j)
        p.p.push_back(0.05 + rng.uniform());
    p.normalize();
    return p;
}

inline std::vector<int> random_degrees(Rng& rng, std::size_t max_len, int max_degree)
{
    const auto len = 1 + rng.below(max_len);
    std::vector<int> d(len);
    for (auto& k : d)
        k = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_degree + 1)));
    return d;
}

inline infoprop::Network star(std::size_t leaves)
{
    std::vector<std::pair<infoprop::NodeId, infoprop::NodeId>> edges;
    for (std::size_t j = 1; j <= leaves; ++j)
        edges.emplace_back(0, static_cast<infoprop::NodeId>(j));
    return infoprop::Network::from_edges(leaves + 1, edges);
}

inline infoprop::Network path(std::size_t n)
{
    std::vector<std::pair<infoprop::NodeId, infoprop::NodeId>> edges;
    for (std::size_t j = 1; j < n; ++j)
        edges.emplace_back(static_cast<infoprop::NodeId>(j - 1), static_cast<infoprop::NodeId>(j));
    return infoprop::Network::from_edges(n, edges);
}

// Upper 1e-3 quantile of chi-square with `df` degrees of freedom
// (Wilson-Hilferty; within a fraction of a percent for df >= 3).
inline double chi_square_critical_1e3(double df)
{
    const double z = 3.090232306167813;
    const double a = 2.0 / (9.0 * df);
    return df * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}

// Chi-square statistic of observed counts against expected probabilities;
// bins with expected count below 5 are pooled. Returns {statistic, df}.
inline std::pair<double, double> chi_square(const std::vector<double>& observed, const std::vector<double>& prob,
                                            double total)
{
    double stat = 0.0;
    int bins = 0;
    double pool_o = 0.0, pool_e = 0.0;
    for (std::size_t j = 0; j < prob.size(); ++j) {
        pool_o += observed[j];
        pool_e += prob[j] * total;
        if (pool_e >= 5.0) {
            stat += (pool_o - pool_e) * (pool_o - pool_e) / pool_e;
            ++bins;
            pool_o = pool_e = 0.0;
        }
    }
    if (pool_e > 0.0) {
        stat += (pool_o - pool_e) * (pool_o - pool_e) / std::max(pool_e, 1e-300);
        ++bins;
    }
    return {stat, static_cast<double>(bins - 1)};
}

} // namespace gen
