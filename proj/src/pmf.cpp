#include "infoprop/pmf.hpp"

#include "infoprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace infoprop {

double Pmf::sum() const
{
    double s = 0.0;
    for (double v : p)
        s += v;
    return s;
}

double Pmf::mean() const
{
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j)
        s += static_cast<double>(k_min + static_cast<int>(j)) * p[j];
    return s;
}

double Pmf::second_moment() const
{
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double k = k_min + static_cast<int>(j);
        s += k * k * p[j];
    }
    return s;
}

void Pmf::normalize()
{
    const double total = sum();
    if (!(total > 0.0))
        throw DegenerateInputError("pmf has no positive mass");
    for (double& v : p)
        v /= total;
}

Pmf blend(const Pmf& a, const Pmf& b, double w)
{
    if (a.empty())
        return b;
    if (b.empty())
        return a;
    const int lo = std::min(a.k_min, b.k_min);
    const int hi = std::max(a.k_max(), b.k_max());
    Pmf out(lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1)));
    for (int k = lo; k <= hi; ++k)
        out.p[static_cast<std::size_t>(k - lo)] = (1.0 - w) * a.at(k) + w * b.at(k);
    return out;
}

double total_variation(const Pmf& a, const Pmf& b)
{
    if (a.empty() && b.empty())
        return 0.0;
    const int lo = std::min(a.empty() ? b.k_min : a.k_min, b.empty() ? a.k_min : b.k_min);
    const int hi = std::max(a.empty() ? b.k_max() : a.k_max(), b.empty() ? a.k_max() : b.k_max());
    double d = 0.0;
    for (int k = lo; k <= hi; ++k)
        d += std::abs(a.at(k) - b.at(k));
    return 0.5 * d;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x)
{
    if (xs.empty() || xs.size() != ys.size())
        throw std::invalid_argument("interpolate: empty or mismatched samples");
    if (x <= xs.front())
        return ys.front();
    if (x >= xs.back())
        return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + w * (ys[hi] - ys[lo]);
}

} // namespace infoprop
