#pragma once

#include "infoprop/pmf.hpp"

#include <span>
#include <vector>

namespace infoprop {

/// Degree-based SI mean-field baseline.
///
/// rho[j] is the probability that a node of degree p_tot.k_min + j is
/// informed; the informed fraction is sum_k P(k) rho_k.
struct MeanFieldState {
    std::vector<double> rho;
    double t = 0.0;
};

/// d rho_k / dt = mu k (1 - rho_k) * sum_k' k' P(k') rho_k' / sum_k' k' P(k').
std::vector<double> drho_dt(const Pmf& p_tot, std::span<const double> rho, double mu);

double informed_fraction(const Pmf& p_tot, std::span<const double> rho);

enum class Seeding {
    Uniform,         ///< rho_k(0) = i0 / n
    DegreeWeighted,  ///< rho_k(0) = i0 k / (n E k)
};

struct MeanFieldOptions {
    Seeding seeding = Seeding::Uniform;
    /// Keep a rho snapshot every this many steps (plus the last step).
    std::size_t snapshot_every = 100;
};

struct MeanFieldCurve {
    double mu = 1.0;
    std::vector<double> t;
    std::vector<double> fraction;
    std::vector<double> snapshot_t;
    std::vector<std::vector<double>> snapshot_rho;
    /// Largest amount any rho entry was clamped by in one step.
    double max_clamp = 0.0;

    /// First time the fraction reaches `f` (linear between steps).
    double time_at_fraction(double f) const;
};

/// Fixed-step explicit (classical Runge-Kutta) integration from t = 0, where the informed fraction is
/// i0 / n, until t_end or a fraction of 1 - 1e-6. Throws StepSizeError when a
/// step overshoots [0, 1] by more than 1e-3.
MeanFieldCurve integrate(const Pmf& p_tot, long n, int i0, double mu, double dt, double t_end,
                         MeanFieldOptions options = {});

} // namespace infoprop
