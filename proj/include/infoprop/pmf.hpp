#pragma once

#include <cstddef>
#include <vector>

namespace infoprop {

/// Probability mass function over a contiguous range of degrees.
///
/// `p[j]` is the probability of degree `k_min + j`. Degrees outside the
/// stored range have probability zero.
struct Pmf {
    int k_min = 0;
    std::vector<double> p;

    Pmf() = default;
    Pmf(int first_degree, std::vector<double> probabilities)
        : k_min(first_degree), p(std::move(probabilities)) {}

    bool empty() const { return p.empty(); }
    std::size_t size() const { return p.size(); }
    int k_max() const { return k_min + static_cast<int>(p.size()) - 1; }

    double at(int k) const
    {
        if (k < k_min || k > k_max())
            return 0.0;
        return p[static_cast<std::size_t>(k - k_min)];
    }

    double sum() const;
    double mean() const;
    double second_moment() const;

    /// Divides by the total mass; throws DegenerateInputError if it is not positive.
    void normalize();

    bool operator==(const Pmf&) const = default;
};

/// Pointwise linear blend (1 - w) * a + w * b over the union of supports.
Pmf blend(const Pmf& a, const Pmf& b, double w);

/// Total-variation distance: half the L1 distance.
double total_variation(const Pmf& a, const Pmf& b);

/// Linear interpolation through (xs, ys), xs strictly increasing. Values
/// outside [xs.front(), xs.back()] are clamped to the end points.
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x);

} // namespace infoprop
