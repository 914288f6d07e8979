#include "infoprop/network.hpp"

#include "infoprop/errors.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

namespace infoprop {

struct NetworkBuilder {
    static Network from_adjacency(std::vector<std::vector<NodeId>>& adj, std::vector<int> sampled)
    {
        Network net;
        net.offsets_.assign(adj.size() + 1, 0);
        for (std::size_t v = 0; v < adj.size(); ++v)
            net.offsets_[v + 1] = net.offsets_[v] + adj[v].size();
        net.neighbors_.reserve(net.offsets_.back());
        for (auto& list : adj) {
            std::sort(list.begin(), list.end());
            net.neighbors_.insert(net.neighbors_.end(), list.begin(), list.end());
        }
        net.sampled_ = std::move(sampled);
        return net;
    }
};

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (size_[a] < size_[b])
            std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

bool contains(const std::vector<NodeId>& list, NodeId v)
{
    return std::find(list.begin(), list.end(), v) != list.end();
}

} // namespace

Network Network::from_edges(std::size_t node_count, const std::vector<std::pair<NodeId, NodeId>>& edges)
{
    std::vector<std::vector<NodeId>> adj(node_count);
    for (const auto& [u, v] : edges) {
        if (u >= node_count || v >= node_count)
            throw ParameterError("edge endpoint out of range");
        if (u == v)
            throw ParameterError("self-loop at node " + std::to_string(u));
        if (contains(adj[u], v))
            throw ParameterError("parallel edge " + std::to_string(u) + "-" + std::to_string(v));
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return NetworkBuilder::from_adjacency(adj, {});
}

bool Network::has_edge(NodeId u, NodeId v) const
{
    const auto list = neighbors(u);
    return std::binary_search(list.begin(), list.end(), v);
}

std::vector<std::pair<NodeId, NodeId>> Network::edges() const
{
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
        for (NodeId v : neighbors(u))
            if (u < v)
                out.emplace_back(u, v);
    return out;
}

BuiltNetwork build_configuration_model(std::span<const int> degrees, Rng& rng, PairingOptions options)
{
    if (degrees.empty())
        throw ParameterError("degree sequence is empty");
    std::vector<int> sampled(degrees.begin(), degrees.end());
    std::vector<int> target = sampled;

    std::size_t total = 0;
    for (int d : target) {
        if (d < 0)
            throw ParameterError("degrees must be >= 0");
        total += static_cast<std::size_t>(d);
    }

    BuildReport report;
    if (total % 2 != 0) {
        // Uniform over nodes that have a half-link to give up.
        std::vector<NodeId> candidates;
        for (NodeId v = 0; v < target.size(); ++v)
            if (target[v] > 0)
                candidates.push_back(v);
        const NodeId v = candidates[rng.below(candidates.size())];
        --target[v];
        --total;
        report.parity_repaired_node = v;
    }
    report.half_links = total;

    std::vector<NodeId> stubs;
    stubs.reserve(total);
    for (NodeId v = 0; v < target.size(); ++v)
        stubs.insert(stubs.end(), static_cast<std::size_t>(target[v]), v);

    std::vector<std::vector<NodeId>> adj(target.size());
    for (NodeId v = 0; v < target.size(); ++v)
        adj[v].reserve(static_cast<std::size_t>(target[v]));

    auto remove_stub = [&stubs](std::size_t idx) {
        stubs[idx] = stubs.back();
        stubs.pop_back();
    };

    std::size_t rejections = 0;
    while (stubs.size() >= 2) {
        const std::size_t a = rng.below(stubs.size());
        std::size_t b = rng.below(stubs.size() - 1);
        if (b >= a)
            ++b;
        const NodeId u = stubs[a];
        const NodeId v = stubs[b];
        const bool parallel = adj[u].size() <= adj[v].size() ? contains(adj[u], v) : contains(adj[v], u);
        if (u == v || parallel) {
            if (++rejections > options.max_consecutive_rejections)
                break;
            continue;
        }
        rejections = 0;
        adj[u].push_back(v);
        adj[v].push_back(u);
        // Remove the higher index first so the lower one stays valid.
        remove_stub(std::max(a, b));
        remove_stub(std::min(a, b));
    }

    // Stalled: only self-loops or parallel edges are left among the free
    // half-links. Resolve each remaining pair by breaking a random existing
    // edge (a, b) into (u, a) and (v, b); pairs that find no such edge are
    // discarded.
    if (stubs.size() >= 2) {
        std::vector<std::pair<NodeId, NodeId>> edges;
        for (NodeId x = 0; x < adj.size(); ++x)
            for (NodeId y : adj[x])
                if (x < y)
                    edges.emplace_back(x, y);
        auto erase_neighbor = [&adj](NodeId x, NodeId y) {
            auto& list = adj[x];
            list.erase(std::find(list.begin(), list.end(), y));
        };
        while (stubs.size() >= 2 && !edges.empty()) {
            const NodeId u = stubs[stubs.size() - 1];
            const NodeId v = stubs[stubs.size() - 2];
            bool done = false;
            if (u != v && !contains(adj[u], v)) {
                adj[u].push_back(v);
                adj[v].push_back(u);
                edges.emplace_back(std::min(u, v), std::max(u, v));
                done = true;
            }
            for (std::size_t attempt = 0; attempt < options.max_consecutive_rejections && !done; ++attempt) {
                const std::size_t e = rng.below(edges.size());
                auto [a, b] = edges[e];
                if (rng.below(2) == 1)
                    std::swap(a, b);
                if (a == u || b == v || contains(adj[u], a) || contains(adj[v], b))
                    continue;
                erase_neighbor(a, b);
                erase_neighbor(b, a);
                adj[u].push_back(a);
                adj[a].push_back(u);
                adj[v].push_back(b);
                adj[b].push_back(v);
                edges[e] = {std::min(u, a), std::max(u, a)};
                edges.emplace_back(std::min(v, b), std::max(v, b));
                done = true;
            }
            if (!done)
                break;
            stubs.pop_back();
            stubs.pop_back();
        }
    }
    report.discarded_half_links = stubs.size();

    return {NetworkBuilder::from_adjacency(adj, std::move(sampled)), report};
}

ComponentLabeling components(const Network& net)
{
    const std::size_t n = net.node_count();
    UnionFind uf(n);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v : net.neighbors(u))
            if (u < v)
                uf.unite(u, v);

    std::vector<std::size_t> root_size(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        ++root_size[uf.find(v)];

    std::vector<std::size_t> roots;
    for (std::size_t v = 0; v < n; ++v)
        if (root_size[v] > 0)
            roots.push_back(v);
    // Largest first; ties keep the smaller root id first.
    std::stable_sort(roots.begin(), roots.end(),
                     [&](std::size_t a, std::size_t b) { return root_size[a] > root_size[b]; });

    std::vector<std::size_t> label_of_root(n, 0);
    ComponentLabeling out;
    out.component_sizes.reserve(roots.size());
    for (std::size_t id = 0; id < roots.size(); ++id) {
        label_of_root[roots[id]] = id;
        out.component_sizes.push_back(root_size[roots[id]]);
    }
    out.component_id.resize(n);
    for (std::size_t v = 0; v < n; ++v)
        out.component_id[v] = label_of_root[uf.find(v)];
    return out;
}

Pmf degree_histogram(const Network& net, const std::function<bool(NodeId)>& filter)
{
    std::vector<double> counts;
    std::size_t selected = 0;
    for (NodeId v = 0; v < net.node_count(); ++v) {
        if (filter && !filter(v))
            continue;
        const auto k = static_cast<std::size_t>(net.degree(v));
        if (counts.size() <= k)
            counts.resize(k + 1, 0.0);
        counts[k] += 1.0;
        ++selected;
    }
    if (selected == 0)
        throw DomainError("degree_histogram: no nodes selected");
    std::size_t lo = 0;
    while (counts[lo] == 0.0)
        ++lo;
    Pmf pmf(static_cast<int>(lo), std::vector<double>(counts.begin() + static_cast<std::ptrdiff_t>(lo), counts.end()));
    for (double& v : pmf.p)
        v /= static_cast<double>(selected);
    return pmf;
}

void write_edge_list(std::ostream& out, const Network& net, std::uint64_t seed)
{
    out << "# n " << net.node_count() << " seed " << seed << " edges " << net.edge_count() << '\n';
    for (const auto& [u, v] : net.edges())
        out << u << ' ' << v << '\n';
}

} // namespace infoprop
