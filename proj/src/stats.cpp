#include "infoprop/stats.hpp"

#include "infoprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace infoprop {

namespace {

std::size_t milestone_count(double fraction, std::size_t n)
{
    return static_cast<std::size_t>(std::max(1.0, std::ceil(fraction * static_cast<double>(n) - 1e-9)));
}

void add_into(std::vector<double>& dst, const std::vector<double>& src)
{
    if (dst.size() < src.size())
        dst.resize(src.size(), 0.0);
    for (std::size_t j = 0; j < src.size(); ++j)
        dst[j] += src[j];
}

Pmf to_pmf(const std::vector<double>& by_degree, double scale)
{
    std::size_t lo = 0;
    std::size_t hi = by_degree.size();
    while (lo < hi && by_degree[lo] == 0.0)
        ++lo;
    while (hi > lo && by_degree[hi - 1] == 0.0)
        --hi;
    Pmf pmf(static_cast<int>(lo), std::vector<double>(by_degree.begin() + static_cast<std::ptrdiff_t>(lo),
                                                       by_degree.begin() + static_cast<std::ptrdiff_t>(hi)));
    for (double& v : pmf.p)
        v *= scale;
    return pmf;
}

} // namespace

double EnsembleStats::time_at(double i) const
{
    if (mean_t_of_i.empty())
        throw DomainError("no simulation curve");
    std::vector<double> xs(mean_t_of_i.size());
    for (std::size_t j = 0; j < xs.size(); ++j)
        xs[j] = static_cast<double>(j + 1);
    return interpolate(xs, mean_t_of_i, i);
}

std::map<int, double> per_run_median_times(const PropagationRecord& record, int i0)
{
    std::map<int, double> out;
    if (record.informed_count() < static_cast<std::size_t>(i0))
        return out;
    const double t0 = record.time_of(static_cast<std::size_t>(i0));

    std::vector<std::size_t> total;
    for (int k : record.node_degree) {
        if (total.size() <= static_cast<std::size_t>(k))
            total.resize(static_cast<std::size_t>(k) + 1, 0);
        ++total[static_cast<std::size_t>(k)];
    }
    // Sample median: the middle reception, or the mean of the two middle
    // receptions when the class size is even.
    std::vector<std::size_t> seen(total.size(), 0);
    std::vector<double> lower(total.size(), 0.0);
    for (NodeId v : record.infection_order) {
        const auto k = static_cast<std::size_t>(record.node_degree[v]);
        if (total[k] < 2)
            continue;
        const std::size_t rank = ++seen[k];
        const double t = record.reception_time[v] - t0;
        if (rank == (total[k] + 1) / 2)
            lower[k] = t;
        if (rank == total[k] / 2 + 1)
            out[static_cast<int>(k)] = 0.5 * (lower[k] + t);
    }
    return out;
}

EnsembleAccumulator::EnsembleAccumulator(int i0, std::vector<double> milestones)
    : i0_(i0), milestones_(std::move(milestones)), milestone_sum_(milestones_.size())
{
    if (i0 < 1)
        throw ParameterError("i0 must be >= 1");
    for (double f : milestones_)
        if (!(f > 0.0 && f <= 1.0))
            throw ParameterError("milestones must lie in (0, 1]");
}

void EnsembleAccumulator::add(const PropagationRecord& record)
{
    const std::size_t n = record.node_count();
    if (n_ == 0)
        n_ = n;
    else if (n != n_)
        throw DomainError("records come from networks of different size");

    const std::size_t informed = record.informed_count();
    if (informed < static_cast<std::size_t>(i0_)) {
        ++excluded_;
        return;
    }
    ++runs_;
    common_i_ = runs_ == 1 ? informed : std::min(common_i_, informed);
    traced_ = traced_ && record.k_ext_trace.size() == informed;

    const double t0 = record.time_of(static_cast<std::size_t>(i0_));
    if (t_sum_.size() < informed)
        t_sum_.resize(informed, 0.0);
    for (std::size_t i = 1; i <= informed; ++i)
        t_sum_[i - 1] += record.time_of(i) - t0;
    if (traced_) {
        if (k_ext_sum_.size() < informed)
            k_ext_sum_.resize(informed, 0.0);
        for (std::size_t i = 0; i < informed; ++i)
            k_ext_sum_[i] += static_cast<double>(record.k_ext_trace[i]);
    }

    for (std::size_t m = 0; m < milestones_.size(); ++m) {
        const std::size_t count = std::min(milestone_count(milestones_[m], n), informed);
        std::vector<double> hist;
        for (std::size_t j = 0; j < count; ++j) {
            const auto k = static_cast<std::size_t>(record.node_degree[record.infection_order[j]]);
            if (hist.size() <= k)
                hist.resize(k + 1, 0.0);
            hist[k] += 1.0;
        }
        for (double& v : hist)
            v /= static_cast<double>(count);
        add_into(milestone_sum_[m], hist);
    }

    for (const auto& [k, t] : per_run_median_times(record, i0_)) {
        const auto kk = static_cast<std::size_t>(k);
        if (median_sum_.size() <= kk) {
            median_sum_.resize(kk + 1, 0.0);
            median_count_.resize(kk + 1, 0);
        }
        median_sum_[kk] += t;
        ++median_count_[kk];
    }
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& other)
{
    if (other.i0_ != i0_ || other.milestones_ != milestones_)
        throw DomainError("cannot merge accumulators with different settings");
    if (other.runs_ == 0) {
        excluded_ += other.excluded_;
        return;
    }
    if (n_ != 0 && other.n_ != 0 && n_ != other.n_)
        throw DomainError("records come from networks of different size");
    n_ = n_ == 0 ? other.n_ : n_;
    common_i_ = runs_ == 0 ? other.common_i_ : std::min(common_i_, other.common_i_);
    runs_ += other.runs_;
    excluded_ += other.excluded_;
    traced_ = traced_ && other.traced_;
    add_into(t_sum_, other.t_sum_);
    add_into(k_ext_sum_, other.k_ext_sum_);
    for (std::size_t m = 0; m < milestones_.size(); ++m)
        add_into(milestone_sum_[m], other.milestone_sum_[m]);
    add_into(median_sum_, other.median_sum_);
    if (median_count_.size() < other.median_count_.size())
        median_count_.resize(other.median_count_.size(), 0);
    for (std::size_t k = 0; k < other.median_count_.size(); ++k)
        median_count_[k] += other.median_count_[k];
}

EnsembleStats EnsembleAccumulator::finish() const
{
    EnsembleStats s;
    s.n = n_;
    s.i0 = i0_;
    s.accepted_runs = runs_;
    s.excluded_runs = excluded_;
    if (runs_ == 0)
        return s;
    const double inv = 1.0 / static_cast<double>(runs_);
    s.mean_t_of_i.assign(t_sum_.begin(), t_sum_.begin() + static_cast<std::ptrdiff_t>(common_i_));
    for (double& v : s.mean_t_of_i)
        v *= inv;
    if (traced_ && !k_ext_sum_.empty()) {
        s.mean_k_ext_of_i.assign(k_ext_sum_.begin(), k_ext_sum_.begin() + static_cast<std::ptrdiff_t>(common_i_));
        for (double& v : s.mean_k_ext_of_i)
            v *= inv;
    }
    for (std::size_t m = 0; m < milestones_.size(); ++m)
        s.informed_degree_pmf_at[milestones_[m]] = to_pmf(milestone_sum_[m], inv);
    for (std::size_t k = 0; k < median_count_.size(); ++k)
        if (median_count_[k] > 0) {
            s.median_time_per_degree[static_cast<int>(k)] = median_sum_[k] / static_cast<double>(median_count_[k]);
            s.median_time_samples[static_cast<int>(k)] = median_count_[k];
        }
    return s;
}

EnsembleStats aggregate(std::span<const PropagationRecord> records, int i0, const std::vector<double>& milestones)
{
    if (records.empty())
        throw DomainError("aggregate: no records");
    EnsembleAccumulator acc(i0, milestones);
    for (const auto& r : records)
        acc.add(r);
    return acc.finish();
}

double Checkpoint::theory_rel_error() const
{
    return std::abs(t_theory - t_sim) / std::abs(t_sim);
}

double Checkpoint::meanfield_rel_error() const
{
    return std::abs(t_meanfield - t_sim) / std::abs(t_sim);
}

CurveComparison compare_curves(const EnsembleStats& sim, const TheoryCurve& theory, const MeanFieldCurve& mf,
                               const std::vector<double>& checkpoint_fractions)
{
    if (sim.mean_t_of_i.empty() || theory.samples.empty() || mf.t.empty())
        throw DomainError("compare_curves: empty curve");
    if (theory.n != static_cast<long>(sim.n) || theory.i0 != sim.i0)
        throw DomainError("compare_curves: simulation and theory use different n or i0");
    const double n = static_cast<double>(sim.n);

    // Each curve's i-range; the mean-field curve is i = n * fraction.
    const double lo = std::max({1.0, theory.samples.front().i, n * mf.fraction.front()});
    const double hi = std::min({static_cast<double>(sim.max_i()), theory.samples.back().i, n * mf.fraction.back()});
    if (!(lo <= hi))
        throw DomainError("compare_curves: curves do not overlap");

    const auto theory_i = theory.i_values();
    const auto theory_t = theory.time_values();

    CurveComparison out;
    for (double i = std::ceil(lo); i <= std::floor(hi); i += 1.0) {
        out.i.push_back(i);
        out.t_sim.push_back(sim.time_at(i));
        out.t_theory.push_back(interpolate(theory_i, theory_t, i));
        out.t_meanfield.push_back(mf.time_at_fraction(i / n));
    }
    for (double f : checkpoint_fractions) {
        const double i = f * n;
        if (i < lo || i > hi)
            throw DomainError("compare_curves: checkpoint outside the common range");
        Checkpoint c;
        c.fraction = f;
        c.i = i;
        c.t_sim = sim.time_at(i);
        c.t_theory = interpolate(theory_i, theory_t, i);
        c.t_meanfield = mf.time_at_fraction(f);
        out.checkpoints.push_back(c);
    }
    return out;
}

} // namespace infoprop
