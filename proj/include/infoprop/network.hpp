#pragma once

#include "infoprop/pmf.hpp"
#include "infoprop/rng.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace infoprop {

using NodeId = std::uint32_t;

/// Immutable simple undirected graph in compressed adjacency form.
class Network {
public:
    Network() = default;

    /// Builds from an edge list; rejects self-loops, parallel edges and
    /// out-of-range ids with ParameterError.
    static Network from_edges(std::size_t node_count, const std::vector<std::pair<NodeId, NodeId>>& edges);

    std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const { return neighbors_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId v) const
    {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    int degree(NodeId v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }
    bool has_edge(NodeId u, NodeId v) const;

    /// Degrees requested before pairing (after no repair). Empty for graphs
    /// built from explicit edge lists.
    const std::vector<int>& sampled_degrees() const { return sampled_; }

    std::vector<std::pair<NodeId, NodeId>> edges() const;

private:
    friend struct NetworkBuilder;

    std::vector<std::size_t> offsets_;
    std::vector<NodeId> neighbors_;
    std::vector<int> sampled_;
};

struct BuildReport {
    /// Node whose degree was decremented to make the degree sum even.
    std::optional<NodeId> parity_repaired_node;
    /// Half-links left unpaired because only self-loops or parallel edges
    /// could be formed from them.
    std::size_t discarded_half_links = 0;
    /// Degree sum after the parity repair.
    std::size_t half_links = 0;
};

struct BuiltNetwork {
    Network network;
    BuildReport report;
};

struct PairingOptions {
    /// Consecutive rejected draws after which random pairing stops and the
    /// residual half-links go through the edge-swap repair. Also bounds the
    /// swap attempts per residual pair.
    std::size_t max_consecutive_rejections = 1000;
};

/// Configuration-model pairing of half-links into a simple graph.
///
/// Half-links are paired uniformly at random; draws that would create a
/// self-loop or a parallel edge are redrawn. If pairing stalls, each residual
/// pair (u, v) is placed by replacing a random edge (a, b) with (u, a) and
/// (v, b); residual half-links with no admissible swap are discarded and
/// counted in the report. An odd degree sum is first repaired by decrementing
/// a uniformly chosen node of positive degree.
BuiltNetwork build_configuration_model(std::span<const int> degrees, Rng& rng, PairingOptions options = {});

struct ComponentLabeling {
    /// Component of each node; component 0 is the largest.
    std::vector<std::size_t> component_id;
    /// Sizes in descending order, indexed by component id.
    std::vector<std::size_t> component_sizes;
};

ComponentLabeling components(const Network& net);

/// Normalized histogram of realized degrees over the nodes accepted by
/// `filter` (all nodes when empty). Throws DomainError for an empty selection.
Pmf degree_histogram(const Network& net, const std::function<bool(NodeId)>& filter = {});

/// Edge list export: a '#' header with n and seed, then one "u v" per line.
void write_edge_list(std::ostream& out, const Network& net, std::uint64_t seed);

} // namespace infoprop
