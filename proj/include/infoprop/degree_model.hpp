#pragma once

#include "infoprop/pmf.hpp"
#include "infoprop/rng.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infoprop {

enum class DistributionKind { PowerLaw, PoissonLike, Empirical };

std::string_view to_string(DistributionKind kind);

/// Parameters of a degree distribution before the cutoff is resolved.
///
/// `shape` is the Poisson mean gamma for PoissonLike and the exponent
/// gamma' for PowerLaw; it is ignored for Empirical, whose pmf is given
/// directly in `empirical`.
struct DegreeSpec {
    DistributionKind kind = DistributionKind::PoissonLike;
    double shape = 0.0;
    int k_min = 1;
    std::optional<int> k_max;
    Pmf empirical;

    static DegreeSpec poisson(double mean, int k_min = 1);
    static DegreeSpec power_law(double exponent, int k_min = 2);
    static DegreeSpec from_pmf(Pmf pmf);

    bool operator==(const DegreeSpec&) const = default;
};

/// Throws ParameterError when `spec` violates the per-kind constraints.
void validate(const DegreeSpec& spec);

/// Smallest degree k >= k_min whose tail mass P(K > k) is at most 1/n.
///
/// Poisson and empirical tails are summed exactly from the pmf. The power-law
/// tail uses the Pareto density the natural cutoff is defined by, so the
/// result is the integer ceiling of k_min * n^(1/(gamma'-1)).
int natural_cutoff(const DegreeSpec& spec, long n);

// Closed forms, kept for reference and tests.
double power_law_cutoff_closed_form(double exponent, int k_min, long n);
double poisson_cutoff_closed_form(double mean, long n);
double power_law_mean_closed_form(double exponent, int k_min, long n);

class DegreeDistribution {
public:
    /// Resolves the cutoff (natural_cutoff(spec, n) unless `spec.k_max` is set)
    /// and builds the truncated, renormalized pmf.
    static DegreeDistribution create(const DegreeSpec& spec, long n);
    static DegreeDistribution power_law(double exponent, int k_min, int k_max);
    static DegreeDistribution poisson_like(double mean, int k_min, int k_max);
    static DegreeDistribution empirical(Pmf pmf);

    DistributionKind kind() const { return kind_; }
    double shape() const { return shape_; }
    int k_min() const { return pmf_.k_min; }
    int k_max() const { return pmf_.k_max(); }
    const Pmf& pmf() const { return pmf_; }

    double mean_degree() const { return pmf_.mean(); }
    double second_moment() const { return pmf_.second_moment(); }
    /// Giant-component criterion E[K^2] - 2 E[K] > 0.
    bool molloy_reed_ok() const;
    double molloy_reed_value() const { return second_moment() - 2.0 * mean_degree(); }

    /// Inverse-CDF draw.
    int sample(Rng& rng) const;
    std::vector<int> sample_sequence(std::size_t n, Rng& rng) const;

private:
    DegreeDistribution(DistributionKind kind, double shape, Pmf pmf);

    DistributionKind kind_;
    double shape_;
    Pmf pmf_;
    std::vector<double> cdf_;
};

/// Reads "k probability" lines; '#' starts a comment. Probabilities are
/// renormalized.
Pmf read_pmf_file(const std::string& path);
Pmf parse_pmf_text(std::string_view text);

} // namespace infoprop
