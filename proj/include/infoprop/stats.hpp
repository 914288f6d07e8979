#pragma once

#include "infoprop/meanfield.hpp"
#include "infoprop/pmf.hpp"
#include "infoprop/simulator.hpp"
#include "infoprop/theory.hpp"

#include <map>
#include <span>
#include <vector>

namespace infoprop {

/// Ensemble averages over accepted runs.
struct EnsembleStats {
    std::size_t n = 0;
    int i0 = 1;
    std::size_t accepted_runs = 0;
    /// Records dropped because they informed fewer than i0 nodes.
    std::size_t excluded_runs = 0;
    /// mean_t_of_i[i - 1]: mean reception time of the i-th informed node,
    /// each run shifted so that its i0-th reception is at t = 0. Covers
    /// i = 1 .. the smallest informed count over the runs.
    std::vector<double> mean_t_of_i;
    /// Same layout for the external-connection trace, when runs were traced.
    std::vector<double> mean_k_ext_of_i;
    /// Milestone fraction -> degree pmf of the first ceil(f n) informed nodes
    /// (or all informed nodes if a run stopped earlier), averaged over runs.
    std::map<double, Pmf> informed_degree_pmf_at;
    /// Degree -> cross-run mean of the per-run time at which half of that
    /// run's degree-k nodes were informed.
    std::map<int, double> median_time_per_degree;
    std::map<int, std::size_t> median_time_samples;

    std::size_t max_i() const { return mean_t_of_i.size(); }
    /// Interpolated mean time at a (possibly fractional) informed count.
    double time_at(double i) const;
};

/// Streaming form of aggregate(); partial accumulators merge associatively.
class EnsembleAccumulator {
public:
    EnsembleAccumulator(int i0, std::vector<double> milestones);

    void add(const PropagationRecord& record);
    void merge(const EnsembleAccumulator& other);
    EnsembleStats finish() const;

    std::size_t accepted() const { return runs_; }

private:
    int i0_;
    std::vector<double> milestones_;
    std::size_t n_ = 0;
    std::size_t runs_ = 0;
    std::size_t excluded_ = 0;
    std::size_t common_i_ = 0;
    bool traced_ = true;
    std::vector<double> t_sum_;
    std::vector<double> k_ext_sum_;
    std::vector<std::vector<double>> milestone_sum_;  // [milestone][degree]
    std::vector<double> median_sum_;                  // [degree]
    std::vector<std::size_t> median_count_;
};

EnsembleStats aggregate(std::span<const PropagationRecord> records, int i0, const std::vector<double>& milestones);

/// Sample median of the reception times of a run's degree-k nodes (mean of
/// the two middle ones for even N_k), for every degree with at least two
/// nodes whose middle nodes were all informed.
/// Times are relative to the run's i0-th reception.
std::map<int, double> per_run_median_times(const PropagationRecord& record, int i0);

struct Checkpoint {
    double fraction = 0.0;
    double i = 0.0;
    double t_sim = 0.0;
    double t_theory = 0.0;
    double t_meanfield = 0.0;

    double theory_minus_sim() const { return t_theory - t_sim; }
    double meanfield_minus_sim() const { return t_meanfield - t_sim; }
    double theory_rel_error() const;
    double meanfield_rel_error() const;
};

struct CurveComparison {
    /// Common integer grid, i from max(starts) to min(ends).
    std::vector<double> i;
    std::vector<double> t_sim;
    std::vector<double> t_theory;
    std::vector<double> t_meanfield;
    std::vector<Checkpoint> checkpoints;
};

/// Interpolates simulation, theory and mean-field time curves onto a common
/// i-grid and evaluates the checkpoints. Throws DomainError when the ranges do
/// not overlap.
CurveComparison compare_curves(const EnsembleStats& sim, const TheoryCurve& theory, const MeanFieldCurve& mf,
                               const std::vector<double>& checkpoint_fractions = {0.25, 0.5, 0.75});

} // namespace infoprop
