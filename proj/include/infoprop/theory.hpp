#pragma once

#include "infoprop/pmf.hpp"

#include <vector>

namespace infoprop {

/// Size-biased pmf k * P(k) / E[k]: the degree of the node a random
/// half-link leads to. Throws DegenerateInputError if the mean is zero.
Pmf receiver_distribution(const Pmf& p_ninf);

/// Expected number of the receiver's links that lead to informed nodes,
/// 1 + (E k_recv - 1) * K_ext / (K_ext + K_tot_ni). At least one link is the
/// one the information arrived on.
double expected_krecv_inf(double e_krecv, double e_k_ext, double e_k_tot_ni);

/// Derivative of the uninformed-degree pmf with respect to the informed count:
/// P(k) / (n - i) * (1 - k / E[k_ninf]). Requires i < n - 1.
std::vector<double> dninf_di(const Pmf& p_ninf, double i, long n);

/// Expected change of external connections per newly informed node,
/// E k_recv - 2 E k_recv_inf, with K_tot_ni = (n - i) E[k_ninf].
double dkext_di(const Pmf& p_ninf, double e_k_ext, double i, long n);

/// 1 / (mu * E K_ext). Throws PropagationInterrupted when e_k_ext <= 0.
double dt_di(double e_k_ext, double mu);

/// Degree pmf of the informed nodes, (n P_tot - (n - i) P_ninf) / i. Small
/// negative entries from round-off are clamped to zero and the result is
/// renormalized; the removed mass is added to `clamped_mass` if given.
/// Returns p_tot exactly when i >= n.
Pmf informed_distribution(const Pmf& p_ninf, const Pmf& p_tot, double i, long n, double* clamped_mass = nullptr);

/// Integration points in i. The log-decade layout splits [i0, n - 1] into
/// sections [i0, 10 i0], [10 i0, 100 i0], ..., each holding
/// `steps_per_section` equidistant steps. Steps are never shorter than one
/// node, so short sections get fewer steps.
struct SolverGrid {
    int i0 = 1;
    long n = 0;
    int steps_per_section = 0;
    std::vector<double> points;

    static SolverGrid log_sections(int i0, long n, int steps_per_section);
    /// Every integer from i0 to n - 1.
    static SolverGrid unit(int i0, long n);
};

enum class Stepper {
    /// Explicit first-order step that removes h receivers at once:
    /// P <- ((n - i) P - h P_recv) / (n - i - h). Equals the node-by-node
    /// recursion for h = 1 and conserves mass exactly.
    Mixture,
    /// Plain forward Euler on dninf_di.
    Euler,
    /// Explicit midpoint rule.
    Midpoint,
};

struct SolverOptions {
    Stepper stepper = Stepper::Mixture;
    /// Split grid steps that would remove a large share of the remaining
    /// high-degree mass at once. Substeps never go below one node.
    bool adaptive_substeps = true;
};

struct TheorySample {
    double i = 0.0;
    double e_t = 0.0;
    double e_k_ext = 0.0;
    Pmf p_ninf;
    Pmf p_inf;
};

struct TheoryCurve {
    long n = 0;
    int i0 = 1;
    double mu = 1.0;
    bool molloy_reed_ok = true;
    std::vector<TheorySample> samples;

    /// Set when E K_ext reached zero before i = n - 1.
    bool halted = false;
    double final_i = 0.0;

    /// Mass removed by clamping round-off negatives after steps longer than
    /// one node.
    double clamped_mass = 0.0;
    std::size_t clamp_events = 0;
    /// Unit steps whose result had a negative entry, and the lowest entry
    /// seen. Near i = n - 1 the node-by-node recursion leaves the simplex
    /// (P(k) < 0 where k > (n - i) E[k_ninf]); those values are kept as is.
    std::size_t negative_steps = 0;
    double most_negative_entry = 0.0;
    /// Largest |sum p_ninf - 1| seen after any step.
    double max_normalization_drift = 0.0;

    std::vector<double> i_values() const;
    std::vector<double> time_values() const;
    double time_at(double i) const;
    Pmf uninformed_pmf_at(double i) const;
    Pmf informed_pmf_at(double i) const;
};

/// Integrates the expectation equations from i = 1 (p_ninf = p_tot,
/// E K_ext = E k_tot) in unit steps up to i0, then over the log-decade grid.
/// Times are shifted so that e_t(i0) = 0.
TheoryCurve solve(const Pmf& p_tot, long n, int i0, double mu, int steps_per_section, SolverOptions options = {});
TheoryCurve solve(const Pmf& p_tot, const SolverGrid& grid, double mu, SolverOptions options = {});

} // namespace infoprop
