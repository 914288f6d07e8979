#include "infoprop/theory.hpp"

#include "infoprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace infoprop {

namespace {

constexpr double kNegativeTolerance = 1e-6;
constexpr double kDriftTolerance = 1e-6;
// Entries below this are ignored when sizing substeps.
constexpr double kNegligibleMass = 1e-15;

double kth(const Pmf& p, std::size_t j)
{
    return static_cast<double>(p.k_min + static_cast<int>(j));
}

void check_normalized(const Pmf& p, const char* what)
{
    if (p.empty() || std::abs(p.sum() - 1.0) > 1e-6)
        throw DomainError(std::string(what) + " must be a normalized pmf");
}

struct State {
    double i;
    Pmf p;
    double k_ext;
    double t;
};

double safe_step(const Pmf& p, double i, long n)
{
    int k_top = p.k_min;
    for (std::size_t j = p.size(); j-- > 0;)
        if (p.p[j] > kNegligibleMass) {
            k_top = p.k_min + static_cast<int>(j);
            break;
        }
    const double mean = p.mean();
    if (k_top <= 0 || mean <= 0.0)
        return static_cast<double>(n) - i;
    return 0.5 * (static_cast<double>(n) - i) * mean / k_top;
}

void mixture_step(State& s, double h, long n, double mu)
{
    const double remaining = static_cast<double>(n) - s.i;
    const double mean = s.p.mean();
    const double dk = dkext_di(s.p, s.k_ext, s.i, n);
    s.t += h * dt_di(s.k_ext, mu);
    for (std::size_t j = 0; j < s.p.size(); ++j)
        s.p.p[j] = (remaining * s.p.p[j] - h * kth(s.p, j) * s.p.p[j] / mean) / (remaining - h);
    s.k_ext += h * dk;
}

void euler_step(State& s, double h, long n, double mu)
{
    const auto dp = dninf_di(s.p, s.i, n);
    const double dk = dkext_di(s.p, s.k_ext, s.i, n);
    s.t += h * dt_di(s.k_ext, mu);
    for (std::size_t j = 0; j < s.p.size(); ++j)
        s.p.p[j] += h * dp[j];
    s.k_ext += h * dk;
}

void midpoint_step(State& s, double h, long n, double mu)
{
    State mid = s;
    {
        const auto dp = dninf_di(s.p, s.i, n);
        const double dk = dkext_di(s.p, s.k_ext, s.i, n);
        for (std::size_t j = 0; j < mid.p.size(); ++j)
            mid.p.p[j] += 0.5 * h * dp[j];
        mid.k_ext += 0.5 * h * dk;
        mid.i += 0.5 * h;
    }
    const auto dp = dninf_di(mid.p, mid.i, n);
    const double dk = dkext_di(mid.p, mid.k_ext, mid.i, n);
    s.t += h * dt_di(mid.k_ext, mu);
    for (std::size_t j = 0; j < s.p.size(); ++j)
        s.p.p[j] += h * dp[j];
    s.k_ext += h * dk;
}

} // namespace

Pmf receiver_distribution(const Pmf& p_ninf)
{
    const double mean = p_ninf.mean();
    if (!(mean > 0.0))
        throw DegenerateInputError("receiver_distribution: pmf has zero mean");
    Pmf out = p_ninf;
    for (std::size_t j = 0; j < out.size(); ++j)
        out.p[j] = kth(p_ninf, j) * p_ninf.p[j] / mean;
    return out;
}

double expected_krecv_inf(double e_krecv, double e_k_ext, double e_k_tot_ni)
{
    if (e_k_ext < 0.0 || e_k_tot_ni < 0.0)
        throw DomainError("expected_krecv_inf: connection counts must be >= 0");
    if (e_krecv < 1.0 - 1e-12)
        throw DomainError("expected_krecv_inf: receiver degree must be >= 1");
    const double total = e_k_ext + e_k_tot_ni;
    if (!(total > 0.0))
        throw DegenerateInputError("expected_krecv_inf: no free half-links");
    return 1.0 + (e_krecv - 1.0) * e_k_ext / total;
}

std::vector<double> dninf_di(const Pmf& p_ninf, double i, long n)
{
    if (!(i < static_cast<double>(n) - 1.0))
        throw DomainError("dninf_di: requires i < n - 1");
    const double mean = p_ninf.mean();
    if (!(mean > 0.0))
        throw DegenerateInputError("dninf_di: pmf has zero mean");
    const double remaining = static_cast<double>(n) - i;
    std::vector<double> d(p_ninf.size());
    for (std::size_t j = 0; j < d.size(); ++j)
        d[j] = p_ninf.p[j] / remaining * (1.0 - kth(p_ninf, j) / mean);
    return d;
}

double dkext_di(const Pmf& p_ninf, double e_k_ext, double i, long n)
{
    const double mean = p_ninf.mean();
    if (!(mean > 0.0))
        throw DegenerateInputError("dkext_di: pmf has zero mean");
    const double e_krecv = p_ninf.second_moment() / mean;
    const double k_tot_ni = (static_cast<double>(n) - i) * mean;
    return e_krecv - 2.0 * expected_krecv_inf(e_krecv, e_k_ext, k_tot_ni);
}

double dt_di(double e_k_ext, double mu)
{
    if (!(mu > 0.0))
        throw ParameterError("dt_di: mu must be > 0");
    if (!(e_k_ext > 0.0))
        throw PropagationInterrupted("no external connections left");
    return 1.0 / (mu * e_k_ext);
}

Pmf informed_distribution(const Pmf& p_ninf, const Pmf& p_tot, double i, long n, double* clamped_mass)
{
    if (i < 1.0)
        throw DomainError("informed_distribution: requires i >= 1");
    // Everyone is informed; avoid the round-off of n P - 0 P over n.
    if (i >= static_cast<double>(n))
        return p_tot;
    const double nn = static_cast<double>(n);
    // Support is the union of both inputs.
    Pmf out = blend(p_tot, p_ninf, 0.5);
    for (std::size_t j = 0; j < out.size(); ++j)
        out.p[j] = (nn * p_tot.at(out.k_min + static_cast<int>(j)) - (nn - i) * p_ninf.at(out.k_min + static_cast<int>(j))) / i;
    double removed = 0.0;
    for (double& v : out.p)
        if (v < 0.0) {
            removed -= v;
            v = 0.0;
        }
    if (removed > 0.0)
        out.normalize();
    if (clamped_mass)
        *clamped_mass += removed;
    return out;
}

SolverGrid SolverGrid::log_sections(int i0, long n, int steps_per_section)
{
    if (i0 < 1)
        throw ParameterError("i0 must be >= 1");
    if (static_cast<long>(i0) >= n - 1)
        throw ParameterError("i0 must be < n - 1");
    if (steps_per_section < 1)
        throw ParameterError("steps_per_section must be >= 1");
    SolverGrid g;
    g.i0 = i0;
    g.n = n;
    g.steps_per_section = steps_per_section;
    g.points.push_back(i0);
    long lo = i0;
    const long last = n - 1;
    while (lo < last) {
        const long hi = std::min(lo * 10, last);
        const long steps = std::min<long>(steps_per_section, hi - lo);
        for (long j = 1; j <= steps; ++j)
            g.points.push_back(j == steps ? static_cast<double>(hi)
                                          : static_cast<double>(lo) + static_cast<double>(hi - lo) * j / steps);
        lo = hi;
    }
    return g;
}

SolverGrid SolverGrid::unit(int i0, long n)
{
    if (i0 < 1)
        throw ParameterError("i0 must be >= 1");
    if (static_cast<long>(i0) >= n - 1)
        throw ParameterError("i0 must be < n - 1");
    SolverGrid g;
    g.i0 = i0;
    g.n = n;
    g.steps_per_section = 0;
    for (long i = i0; i <= n - 1; ++i)
        g.points.push_back(static_cast<double>(i));
    return g;
}

TheoryCurve solve(const Pmf& p_tot, long n, int i0, double mu, int steps_per_section, SolverOptions options)
{
    return solve(p_tot, SolverGrid::log_sections(i0, n, steps_per_section), mu, options);
}

TheoryCurve solve(const Pmf& p_tot, const SolverGrid& grid, double mu, SolverOptions options)
{
    check_normalized(p_tot, "p_tot");
    if (!(mu > 0.0))
        throw ParameterError("mu must be > 0");
    if (grid.points.empty() || grid.points.front() != grid.i0)
        throw ParameterError("grid must start at i0");
    const long n = grid.n;

    TheoryCurve curve;
    curve.n = n;
    curve.i0 = grid.i0;
    curve.mu = mu;
    curve.molloy_reed_ok = p_tot.second_moment() - 2.0 * p_tot.mean() > 0.0;

    // Warm-up in unit steps from the single source node to i0.
    std::vector<double> points;
    for (int i = 1; i < grid.i0; ++i)
        points.push_back(i);
    points.insert(points.end(), grid.points.begin(), grid.points.end());

    State s{1.0, p_tot, p_tot.mean(), 0.0};

    auto record = [&] {
        TheorySample sample;
        sample.i = s.i;
        sample.e_t = s.t;
        sample.e_k_ext = s.k_ext;
        sample.p_ninf = s.p;
        sample.p_inf = informed_distribution(s.p, p_tot, s.i, n);
        curve.samples.push_back(std::move(sample));
    };

    record();
    for (std::size_t idx = 1; idx < points.size() && !curve.halted; ++idx) {
        const double target = points[idx];
        while (s.i < target) {
            if (!(s.k_ext > 0.0)) {
                curve.halted = true;
                break;
            }
            double h = target - s.i;
            if (options.adaptive_substeps)
                h = std::min(h, std::max(1.0, safe_step(s.p, s.i, n)));
            // Avoid a sliver of a step just before the target.
            if (target - (s.i + h) < 1e-9 * target)
                h = target - s.i;

            switch (options.stepper) {
            case Stepper::Mixture:
                mixture_step(s, h, n, mu);
                break;
            case Stepper::Euler:
                euler_step(s, h, n, mu);
                break;
            case Stepper::Midpoint:
                midpoint_step(s, h, n, mu);
                break;
            }
            s.i = (h == target - s.i) ? target : s.i + h;

            const double lowest = *std::min_element(s.p.p.begin(), s.p.p.end());
            if (lowest < -kNegativeTolerance && h > 1.0 + 1e-12)
                throw StepSizeError("p_ninf entry " + std::to_string(lowest) + " at i = " + std::to_string(s.i) +
                                    "; increase steps_per_section");
            if (lowest < 0.0 && h <= 1.0 + 1e-12) {
                // Unit steps are the node-by-node recursion itself; its
                // negative entries near i = n - 1 belong to the model and are
                // kept, not clamped.
                ++curve.negative_steps;
                curve.most_negative_entry = std::min(curve.most_negative_entry, lowest);
            } else if (lowest < 0.0) {
                double removed = 0.0;
                for (double& v : s.p.p)
                    if (v < 0.0) {
                        removed -= v;
                        v = 0.0;
                    }
                s.p.normalize();
                curve.clamped_mass += removed;
                ++curve.clamp_events;
            }
            const double drift = std::abs(s.p.sum() - 1.0);
            if (drift > kDriftTolerance)
                throw StepSizeError("p_ninf normalization drift " + std::to_string(drift) + " at i = " +
                                    std::to_string(s.i) + "; increase steps_per_section");
            curve.max_normalization_drift = std::max(curve.max_normalization_drift, drift);
        }
        if (s.i >= target || (curve.halted && s.i > curve.samples.back().i))
            record();
    }
    curve.final_i = s.i;

    double t0 = 0.0;
    for (const auto& sample : curve.samples)
        if (sample.i == grid.i0)
            t0 = sample.e_t;
    for (auto& sample : curve.samples)
        sample.e_t -= t0;
    return curve;
}

std::vector<double> TheoryCurve::i_values() const
{
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples)
        out.push_back(s.i);
    return out;
}

std::vector<double> TheoryCurve::time_values() const
{
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples)
        out.push_back(s.e_t);
    return out;
}

double TheoryCurve::time_at(double i) const
{
    return interpolate(i_values(), time_values(), i);
}

namespace {

template <class Get>
Pmf pmf_at(const std::vector<TheorySample>& samples, double i, Get get)
{
    if (samples.empty())
        throw DomainError("theory curve is empty");
    if (i <= samples.front().i)
        return get(samples.front());
    if (i >= samples.back().i)
        return get(samples.back());
    const auto it = std::upper_bound(samples.begin(), samples.end(), i,
                                     [](double x, const TheorySample& s) { return x < s.i; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return blend(get(lo), get(hi), (i - lo.i) / (hi.i - lo.i));
}

} // namespace

Pmf TheoryCurve::uninformed_pmf_at(double i) const
{
    return pmf_at(samples, i, [](const TheorySample& s) { return s.p_ninf; });
}

Pmf TheoryCurve::informed_pmf_at(double i) const
{
    return pmf_at(samples, i, [](const TheorySample& s) { return s.p_inf; });
}

} // namespace infoprop
