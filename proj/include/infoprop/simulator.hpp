#pragma once

#include "infoprop/degree_model.hpp"
#include "infoprop/network.hpp"
#include "infoprop/rng.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

namespace infoprop {

/// A message in flight: it reaches `target` at `time`.
struct Event {
    double time;
    NodeId target;

    // Min-heap order with a deterministic tie-break.
    bool operator>(const Event& o) const { return time > o.time || (time == o.time && target > o.target); }
};

/// Receiver-side bookkeeping at one reception.
struct ReceptionTrace {
    int k_recv = 0;      ///< degree of the receiver
    int k_recv_inf = 0;  ///< receiver's neighbours already informed at reception
};

inline constexpr double kNeverInformed = std::numeric_limits<double>::infinity();

/// Outcome of one Monte Carlo propagation.
struct PropagationRecord {
    NodeId source = 0;
    /// Reception time per node; kNeverInformed when the node was not reached.
    std::vector<double> reception_time;
    std::vector<NodeId> infection_order;
    /// Realized degree per node of the network the run used.
    std::vector<int> node_degree;
    std::size_t events_scheduled = 0;
    std::size_t events_processed = 0;

    /// External connections after each reception (entry 0 is after the source).
    std::vector<long> k_ext_trace;
    std::vector<ReceptionTrace> krecv_trace;

    std::size_t informed_count() const { return infection_order.size(); }
    std::size_t node_count() const { return reception_time.size(); }
    bool informed(NodeId v) const { return reception_time[v] != kNeverInformed; }
    /// Reception time of the i-th informed node, 1-based.
    double time_of(std::size_t i) const { return reception_time[infection_order[i - 1]]; }
};

/// One propagation from a uniformly random source (or `source` when given).
///
/// Every newly informed node schedules one event per incident edge at
/// now + Exp(mu); events that hit informed nodes are dropped. With `trace`
/// set, K_ext and (k_recv, k_recv_inf) are recorded at every reception.
PropagationRecord simulate_once(const Network& net, double mu, Rng& rng, bool trace = false,
                                std::optional<NodeId> source = std::nullopt);

struct EnsembleSpec {
    DegreeDistribution distribution;
    std::size_t n = 0;
    double mu = 1.0;
    std::size_t runs = 1;
    double completion_threshold = 0.99;
    std::uint64_t master_seed = 1;
    unsigned parallelism = 1;
    bool trace = false;
};

struct EnsembleSummary {
    std::size_t runs = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t discarded_half_links = 0;
    std::size_t parity_repairs = 0;
};

/// Called once per accepted run, in increasing run index, from whichever
/// thread completes the run; calls never overlap.
using RunSink = std::function<void(std::size_t run_index, const Network& net, PropagationRecord&& record)>;

/// Minimum informed count for a run to count as complete.
std::size_t completion_count(std::size_t n, double threshold);

/// Builds a fresh network and runs one propagation per run index. Run r uses
/// Rng::for_stream(master_seed, r) for both steps, so the accepted set does
/// not depend on `parallelism`.
EnsembleSummary run_ensemble(const EnsembleSpec& spec, const RunSink& sink);

struct EnsembleResult {
    std::vector<PropagationRecord> accepted;
    EnsembleSummary summary;
};

EnsembleResult run_ensemble(const EnsembleSpec& spec);

/// Text dump: a '#' header (seed, source, informed count) then
/// "node reception_time" rows in infection order.
void write_record(std::ostream& out, const PropagationRecord& record, std::uint64_t seed);

} // namespace infoprop
