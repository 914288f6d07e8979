#include "infoprop/simulator.hpp"

#include "infoprop/errors.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <queue>
#include <thread>

namespace infoprop {

PropagationRecord simulate_once(const Network& net, double mu, Rng& rng, bool trace, std::optional<NodeId> source)
{
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw ParameterError("mu must be a finite real > 0");
    const std::size_t n = net.node_count();
    if (n == 0)
        throw ParameterError("network has no nodes");
    if (source && *source >= n)
        throw ParameterError("source node out of range");

    PropagationRecord rec;
    rec.reception_time.assign(n, kNeverInformed);
    rec.node_degree.resize(n);
    for (NodeId v = 0; v < n; ++v)
        rec.node_degree[v] = net.degree(v);
    rec.source = source ? *source : static_cast<NodeId>(rng.below(n));

    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
    long k_ext = 0;

    auto inform = [&](NodeId v, double now) {
        rec.reception_time[v] = now;
        rec.infection_order.push_back(v);
        const auto nbrs = net.neighbors(v);
        if (trace) {
            int already = 0;
            for (NodeId u : nbrs)
                if (rec.informed(u))
                    ++already;
            const int k = static_cast<int>(nbrs.size());
            k_ext += k - 2 * already;
            rec.krecv_trace.push_back({k, already});
            rec.k_ext_trace.push_back(k_ext);
        }
        for (NodeId u : nbrs)
            queue.push({now + rng.exponential(mu), u});
        rec.events_scheduled += nbrs.size();
    };

    inform(rec.source, 0.0);
    while (!queue.empty()) {
        const Event ev = queue.top();
        queue.pop();
        ++rec.events_processed;
        if (!rec.informed(ev.target))
            inform(ev.target, ev.time);
    }
    return rec;
}

std::size_t completion_count(std::size_t n, double threshold)
{
    const double need = std::ceil(threshold * static_cast<double>(n) - 1e-9);
    return static_cast<std::size_t>(std::max(need, 1.0));
}

EnsembleSummary run_ensemble(const EnsembleSpec& spec, const RunSink& sink)
{
    if (spec.runs < 1)
        throw ParameterError("runs must be >= 1");
    if (!(spec.completion_threshold > 0.0 && spec.completion_threshold <= 1.0))
        throw ParameterError("completion threshold must lie in (0, 1]");
    if (spec.n < 1)
        throw ParameterError("n must be >= 1");
    if (!(spec.mu > 0.0))
        throw ParameterError("mu must be > 0");

    const std::size_t need = completion_count(spec.n, spec.completion_threshold);

    struct Finished {
        bool accepted = false;
        std::size_t discarded = 0;
        bool repaired = false;
        std::unique_ptr<Network> net;
        PropagationRecord record;
    };

    EnsembleSummary summary;
    summary.runs = spec.runs;
    std::mutex mutex;
    std::map<std::size_t, Finished> pending;
    std::size_t next_to_emit = 0;
    std::atomic<std::size_t> next_run{0};
    std::exception_ptr failure;

    // Results are buffered and handed to the sink strictly in run order.
    auto flush_locked = [&] {
        for (auto it = pending.find(next_to_emit); it != pending.end(); it = pending.find(next_to_emit)) {
            Finished& f = it->second;
            summary.discarded_half_links += f.discarded;
            summary.parity_repairs += f.repaired ? 1 : 0;
            if (f.accepted) {
                ++summary.accepted;
                if (sink)
                    sink(next_to_emit, *f.net, std::move(f.record));
            } else {
                ++summary.rejected;
            }
            pending.erase(it);
            ++next_to_emit;
        }
    };

    auto worker = [&] {
        try {
            for (std::size_t r = next_run++; r < spec.runs; r = next_run++) {
                Rng rng = Rng::for_stream(spec.master_seed, r);
                const auto degrees = spec.distribution.sample_sequence(spec.n, rng);
                BuiltNetwork built = build_configuration_model(degrees, rng);
                Finished f;
                f.discarded = built.report.discarded_half_links;
                f.repaired = built.report.parity_repaired_node.has_value();
                f.record = simulate_once(built.network, spec.mu, rng, spec.trace);
                f.accepted = f.record.informed_count() >= need;
                if (f.accepted)
                    f.net = std::make_unique<Network>(std::move(built.network));
                else
                    f.record = {};
                std::lock_guard lock(mutex);
                pending.emplace(r, std::move(f));
                flush_locked();
            }
        } catch (...) {
            std::lock_guard lock(mutex);
            if (!failure)
                failure = std::current_exception();
            next_run = spec.runs;
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(spec.parallelism, static_cast<unsigned>(spec.runs)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    return summary;
}

EnsembleResult run_ensemble(const EnsembleSpec& spec)
{
    EnsembleResult result;
    result.summary = run_ensemble(spec, [&](std::size_t, const Network&, PropagationRecord&& rec) {
        result.accepted.push_back(std::move(rec));
    });
    return result;
}

void write_record(std::ostream& out, const PropagationRecord& record, std::uint64_t seed)
{
    out << "# seed " << seed << " source " << record.source << " informed " << record.informed_count() << '\n';
    const auto old = out.precision(17);
    for (NodeId v : record.infection_order)
        out << v << ' ' << record.reception_time[v] << '\n';
    out.precision(old);
}

} // namespace infoprop
