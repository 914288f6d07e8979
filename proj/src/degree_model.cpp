#include "infoprop/degree_model.hpp"

#include "infoprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace infoprop {

namespace {

// log of the Poisson pmf, stable for large k.
double log_poisson(int k, double mean)
{
    return -mean + k * std::log(mean) - std::lgamma(k + 1.0);
}

} // namespace

std::string_view to_string(DistributionKind kind)
{
    switch (kind) {
    case DistributionKind::PowerLaw:
        return "powerlaw";
    case DistributionKind::PoissonLike:
        return "poisson";
    case DistributionKind::Empirical:
        return "empirical";
    }
    return "unknown";
}

DegreeSpec DegreeSpec::poisson(double mean, int k_min)
{
    DegreeSpec s;
    s.kind = DistributionKind::PoissonLike;
    s.shape = mean;
    s.k_min = k_min;
    return s;
}

DegreeSpec DegreeSpec::power_law(double exponent, int k_min)
{
    DegreeSpec s;
    s.kind = DistributionKind::PowerLaw;
    s.shape = exponent;
    s.k_min = k_min;
    return s;
}

DegreeSpec DegreeSpec::from_pmf(Pmf pmf)
{
    DegreeSpec s;
    s.kind = DistributionKind::Empirical;
    s.k_min = pmf.k_min;
    s.empirical = std::move(pmf);
    return s;
}

void validate(const DegreeSpec& spec)
{
    switch (spec.kind) {
    case DistributionKind::PowerLaw:
        if (!(spec.shape > 2.0))
            throw ParameterError("gamma_prime must be > 2 (got " + std::to_string(spec.shape) +
                                 "); the maximum degree does not exist otherwise");
        if (spec.k_min < 1)
            throw ParameterError("k_min must be >= 1 for a power law");
        break;
    case DistributionKind::PoissonLike:
        if (!(spec.shape > 0.0) || !std::isfinite(spec.shape))
            throw ParameterError("gamma must be a finite real > 0");
        if (spec.k_min < 0)
            throw ParameterError("k_min must be >= 0");
        break;
    case DistributionKind::Empirical:
        if (spec.empirical.empty())
            throw ParameterError("empirical pmf is empty");
        if (spec.empirical.k_min < 0)
            throw ParameterError("empirical pmf has negative degrees");
        for (double v : spec.empirical.p)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ParameterError("empirical pmf has a negative or non-finite entry");
        if (!(spec.empirical.sum() > 0.0))
            throw ParameterError("empirical pmf has no mass");
        break;
    }
    if (spec.k_max && *spec.k_max < spec.k_min)
        throw ParameterError("k_max must be >= k_min");
}

double power_law_cutoff_closed_form(double exponent, int k_min, long n)
{
    return k_min * std::pow(static_cast<double>(n), 1.0 / (exponent - 1.0));
}

double poisson_cutoff_closed_form(double mean, long n)
{
    return std::exp(mean) * (1.0 - 1.0 / static_cast<double>(n));
}

double power_law_mean_closed_form(double exponent, int k_min, long n)
{
    const double nn = static_cast<double>(n);
    return (exponent - 1.0) / (exponent - 2.0) * k_min *
           (1.0 - std::pow(nn, -(exponent - 2.0) / (exponent - 1.0))) / (1.0 - 1.0 / nn);
}

int natural_cutoff(const DegreeSpec& spec, long n)
{
    validate(spec);
    if (n < 1)
        throw ParameterError("n must be >= 1");
    const double bound = 1.0 / static_cast<double>(n);

    switch (spec.kind) {
    case DistributionKind::PowerLaw: {
        // Pareto tail: P(K > k) = (k / k_min)^-(gamma' - 1).
        const double alpha = spec.shape - 1.0;
        auto tail = [&](int k) { return std::pow(static_cast<double>(k) / spec.k_min, -alpha); };
        const double guess = power_law_cutoff_closed_form(spec.shape, spec.k_min, n);
        int k = std::max(spec.k_min, static_cast<int>(std::floor(guess)) - 1);
        const double slack = bound * 1e-12;
        while (k > spec.k_min && tail(k - 1) <= bound + slack)
            --k;
        while (tail(k) > bound + slack)
            ++k;
        return k;
    }
    case DistributionKind::PoissonLike: {
        // Suffix sums from far in the tail keep the small tail masses accurate.
        const double mean = spec.shape;
        const int far = static_cast<int>(mean + 40.0 * std::sqrt(mean) + 60.0) + spec.k_min;
        std::vector<double> suffix(static_cast<std::size_t>(far - spec.k_min + 2), 0.0);
        for (int k = far; k >= spec.k_min; --k)
            suffix[static_cast<std::size_t>(k - spec.k_min)] =
                suffix[static_cast<std::size_t>(k - spec.k_min + 1)] + std::exp(log_poisson(k, mean));
        const double total = suffix[0];
        for (int k = spec.k_min; k <= far; ++k)
            if (suffix[static_cast<std::size_t>(k - spec.k_min + 1)] / total <= bound)
                return k;
        return far;
    }
    case DistributionKind::Empirical: {
        const Pmf& pmf = spec.empirical;
        const double total = pmf.sum();
        double tail = total;
        for (int k = pmf.k_min; k <= pmf.k_max(); ++k) {
            tail -= pmf.at(k);
            // Guard against round-off leaving a tiny positive residue at the end.
            if (k == pmf.k_max() || tail / total <= bound)
                return std::max(k, spec.k_min);
        }
        return pmf.k_max();
    }
    }
    return spec.k_min;
}

DegreeDistribution::DegreeDistribution(DistributionKind kind, double shape, Pmf pmf)
    : kind_(kind), shape_(shape), pmf_(std::move(pmf))
{
    pmf_.normalize();
    cdf_.resize(pmf_.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < pmf_.size(); ++j) {
        acc += pmf_.p[j];
        cdf_[j] = acc;
    }
    cdf_.back() = 1.0;
}

DegreeDistribution DegreeDistribution::power_law(double exponent, int k_min, int k_max)
{
    DegreeSpec spec = DegreeSpec::power_law(exponent, k_min);
    spec.k_max = k_max;
    validate(spec);
    std::vector<double> p(static_cast<std::size_t>(k_max - k_min + 1));
    for (int k = k_min; k <= k_max; ++k)
        p[static_cast<std::size_t>(k - k_min)] = std::pow(static_cast<double>(k), -exponent);
    return DegreeDistribution(DistributionKind::PowerLaw, exponent, Pmf(k_min, std::move(p)));
}

DegreeDistribution DegreeDistribution::poisson_like(double mean, int k_min, int k_max)
{
    DegreeSpec spec = DegreeSpec::poisson(mean, k_min);
    spec.k_max = k_max;
    validate(spec);
    std::vector<double> p(static_cast<std::size_t>(k_max - k_min + 1));
    for (int k = k_min; k <= k_max; ++k)
        p[static_cast<std::size_t>(k - k_min)] = std::exp(log_poisson(k, mean));
    return DegreeDistribution(DistributionKind::PoissonLike, mean, Pmf(k_min, std::move(p)));
}

DegreeDistribution DegreeDistribution::empirical(Pmf pmf)
{
    validate(DegreeSpec::from_pmf(pmf));
    // Trim zero-mass ends so k_min/k_max describe the actual support.
    std::size_t lo = 0, hi = pmf.p.size();
    while (lo < hi && pmf.p[lo] == 0.0)
        ++lo;
    while (hi > lo && pmf.p[hi - 1] == 0.0)
        --hi;
    Pmf trimmed(pmf.k_min + static_cast<int>(lo),
                std::vector<double>(pmf.p.begin() + static_cast<std::ptrdiff_t>(lo),
                                    pmf.p.begin() + static_cast<std::ptrdiff_t>(hi)));
    return DegreeDistribution(DistributionKind::Empirical, 0.0, std::move(trimmed));
}

DegreeDistribution DegreeDistribution::create(const DegreeSpec& spec, long n)
{
    validate(spec);
    switch (spec.kind) {
    case DistributionKind::PowerLaw:
        return power_law(spec.shape, spec.k_min, spec.k_max.value_or(natural_cutoff(spec, n)));
    case DistributionKind::PoissonLike:
        return poisson_like(spec.shape, spec.k_min, spec.k_max.value_or(natural_cutoff(spec, n)));
    case DistributionKind::Empirical: {
        if (!spec.k_max)
            return empirical(spec.empirical);
        Pmf cut = spec.empirical;
        const int hi = std::max(cut.k_min, std::min(cut.k_max(), *spec.k_max));
        cut.p.resize(static_cast<std::size_t>(hi - cut.k_min + 1));
        return empirical(std::move(cut));
    }
    }
    throw ParameterError("unknown distribution kind");
}

bool DegreeDistribution::molloy_reed_ok() const
{
    return molloy_reed_value() > 0.0;
}

int DegreeDistribution::sample(Rng& rng) const
{
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto j = std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    return pmf_.k_min + static_cast<int>(j);
}

std::vector<int> DegreeDistribution::sample_sequence(std::size_t n, Rng& rng) const
{
    std::vector<int> seq(n);
    for (auto& k : seq)
        k = sample(rng);
    return seq;
}

Pmf parse_pmf_text(std::string_view text)
{
    std::map<int, double> mass;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        long k = 0;
        double prob = 0.0;
        if (!(fields >> k)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            throw ParameterError("pmf line " + std::to_string(line_no) + ": expected \"k probability\"");
        }
        std::string extra;
        if (!(fields >> prob) || (fields >> extra))
            throw ParameterError("pmf line " + std::to_string(line_no) + ": expected \"k probability\"");
        if (k < 0 || prob < 0.0 || !std::isfinite(prob))
            throw ParameterError("pmf line " + std::to_string(line_no) + ": degree and probability must be >= 0");
        mass[static_cast<int>(k)] += prob;
    }
    if (mass.empty())
        throw ParameterError("pmf file has no entries");
    const int lo = mass.begin()->first;
    const int hi = mass.rbegin()->first;
    Pmf pmf(lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1), 0.0));
    for (const auto& [k, v] : mass)
        pmf.p[static_cast<std::size_t>(k - lo)] = v;
    pmf.normalize();
    return pmf;
}

Pmf read_pmf_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open pmf file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_pmf_text(buf.str());
}

} // namespace infoprop
