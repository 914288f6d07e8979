#include "infoprop/meanfield.hpp"

#include "infoprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace infoprop {

namespace {

constexpr double kOvershootTolerance = 1e-3;
constexpr double kSaturation = 1.0 - 1e-6;

} // namespace

std::vector<double> drho_dt(const Pmf& p_tot, std::span<const double> rho, double mu)
{
    double weighted = 0.0;
    double norm = 0.0;
    for (std::size_t j = 0; j < rho.size(); ++j) {
        const double k = p_tot.k_min + static_cast<int>(j);
        weighted += k * p_tot.p[j] * rho[j];
        norm += k * p_tot.p[j];
    }
    const double theta = norm > 0.0 ? weighted / norm : 0.0;
    std::vector<double> d(rho.size());
    for (std::size_t j = 0; j < rho.size(); ++j) {
        const double k = p_tot.k_min + static_cast<int>(j);
        d[j] = mu * k * (1.0 - rho[j]) * theta;
    }
    return d;
}

double informed_fraction(const Pmf& p_tot, std::span<const double> rho)
{
    double f = 0.0;
    for (std::size_t j = 0; j < rho.size(); ++j)
        f += p_tot.p[j] * rho[j];
    return f;
}

double MeanFieldCurve::time_at_fraction(double f) const
{
    if (fraction.empty())
        throw DomainError("mean-field curve is empty");
    if (f <= fraction.front())
        return t.front();
    // The fraction is non-decreasing, so the first crossing is a lower bound.
    const auto it = std::lower_bound(fraction.begin(), fraction.end(), f);
    if (it == fraction.end())
        throw DomainError("fraction " + std::to_string(f) + " not reached by the mean-field curve");
    const auto j = static_cast<std::size_t>(it - fraction.begin());
    if (j == 0)
        return t.front();
    const double span = fraction[j] - fraction[j - 1];
    const double w = span > 0.0 ? (f - fraction[j - 1]) / span : 1.0;
    return t[j - 1] + w * (t[j] - t[j - 1]);
}

MeanFieldCurve integrate(const Pmf& p_tot, long n, int i0, double mu, double dt, double t_end,
                         MeanFieldOptions options)
{
    if (!(dt > 0.0))
        throw ParameterError("dt must be > 0");
    if (i0 < 1 || static_cast<long>(i0) > n)
        throw ParameterError("i0 must lie in [1, n]");
    if (!(mu > 0.0))
        throw ParameterError("mu must be > 0");
    if (p_tot.empty() || std::abs(p_tot.sum() - 1.0) > 1e-6)
        throw DomainError("p_tot must be a normalized pmf");

    const double seed_fraction = static_cast<double>(i0) / static_cast<double>(n);
    MeanFieldState state;
    state.rho.resize(p_tot.size());
    const double mean = p_tot.mean();
    for (std::size_t j = 0; j < state.rho.size(); ++j) {
        const double k = p_tot.k_min + static_cast<int>(j);
        state.rho[j] = options.seeding == Seeding::Uniform ? seed_fraction : seed_fraction * k / mean;
        if (state.rho[j] > 1.0)
            throw ParameterError("degree-weighted seeding puts rho above 1; lower i0");
    }

    MeanFieldCurve curve;
    curve.mu = mu;
    auto snapshot = [&] {
        curve.snapshot_t.push_back(state.t);
        curve.snapshot_rho.push_back(state.rho);
    };
    curve.t.push_back(0.0);
    curve.fraction.push_back(informed_fraction(p_tot, state.rho));
    snapshot();

    const auto max_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    for (std::size_t step = 1; step <= max_steps; ++step) {
        // Classical fourth-order Runge-Kutta step.
        const std::size_t m = state.rho.size();
        std::vector<double> tmp(m);
        auto shifted = [&](const std::vector<double>& d, double w) {
            for (std::size_t j = 0; j < m; ++j)
                tmp[j] = state.rho[j] + w * d[j];
            return drho_dt(p_tot, tmp, mu);
        };
        const auto k1 = drho_dt(p_tot, state.rho, mu);
        const auto k2 = shifted(k1, 0.5 * dt);
        const auto k3 = shifted(k2, 0.5 * dt);
        const auto k4 = shifted(k3, dt);
        for (std::size_t j = 0; j < m; ++j) {
            double next = state.rho[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            if (next > 1.0 + kOvershootTolerance || next < -kOvershootTolerance)
                throw StepSizeError("rho overshoot " + std::to_string(next) + " at t = " +
                                    std::to_string(state.t) + "; decrease dt");
            const double clamped = std::clamp(next, 0.0, 1.0);
            curve.max_clamp = std::max(curve.max_clamp, std::abs(clamped - next));
            state.rho[j] = clamped;
        }
        state.t = static_cast<double>(step) * dt;
        const double f = informed_fraction(p_tot, state.rho);
        curve.t.push_back(state.t);
        curve.fraction.push_back(f);
        const bool done = f >= kSaturation || step == max_steps;
        if (step % std::max<std::size_t>(options.snapshot_every, 1) == 0 || done)
            snapshot();
        if (done)
            break;
    }
    return curve;
}

} // namespace infoprop
