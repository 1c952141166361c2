#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hyplap/errors.hpp"

namespace hyplap {

/// One hyperedge: a positive weight and a sorted, duplicate-free node set
/// with at least two members.
struct Hyperedge {
    double weight = 0.0;
    std::vector<std::size_t> nodes;
};

/// One hypergraph layer over a shared node set.
struct Layer {
    std::vector<Hyperedge> hyperedges;
};

/// A multiplex hypergraph: n nodes shared by L >= 1 hyperedge layers.
/// There are no edges between layers; each layer is an independent
/// hyperedge set over the same ids [0, n).
struct MultilayerHypergraph {
    std::size_t n = 0;
    std::vector<Layer> layers;

    std::size_t num_layers() const { return layers.size(); }
};

/// Unvalidated hyperedge input: (weight, node ids). Ids are signed so that
/// out-of-range values can be diagnosed rather than wrapped.
using RawHyperedge = std::pair<double, std::vector<std::int64_t>>;

/// Validation front door for layer construction. Node lists are sorted and
/// deduplicated; hyperedges that collapse to a single node are dropped and
/// reported through `warnings`; empty hyperedges are rejected.
///
/// Throws InvalidNodeError for ids outside [0, n) and InvalidWeightError
/// for non-positive weights.
inline Layer build_layer(const std::vector<RawHyperedge>& raw, std::size_t n,
                         std::vector<std::string>* warnings = nullptr) {
    if (n < 1) throw InvalidParameterError("node count must be at least 1");
    Layer layer;
    layer.hyperedges.reserve(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const auto& [weight, ids] = raw[k];
        if (!(weight > 0.0)) {
            throw InvalidWeightError("hyperedge " + std::to_string(k) +
                                     ": weight must be positive, got " + std::to_string(weight));
        }
        if (ids.empty()) {
            throw InvalidParameterError("hyperedge " + std::to_string(k) + ": empty node list");
        }
        Hyperedge edge;
        edge.weight = weight;
        edge.nodes.reserve(ids.size());
        for (const std::int64_t id : ids) {
            if (id < 0 || static_cast<std::size_t>(id) >= n) {
                throw InvalidNodeError("hyperedge " + std::to_string(k) + ": node id " +
                                       std::to_string(id) + " outside [0, " + std::to_string(n) + ")");
            }
            edge.nodes.push_back(static_cast<std::size_t>(id));
        }
        std::sort(edge.nodes.begin(), edge.nodes.end());
        edge.nodes.erase(std::unique(edge.nodes.begin(), edge.nodes.end()), edge.nodes.end());
        if (edge.nodes.size() < 2) {
            if (warnings) {
                warnings->push_back("hyperedge " + std::to_string(k) +
                                    " has a single distinct node; dropped");
            }
            continue;
        }
        layer.hyperedges.push_back(std::move(edge));
    }
    return layer;
}

/// One oriented edge of a clique-expanded layer. The orientation (source
/// vs tip) realizes the signed incidence structure; builds fix
/// source = min(u, v) but all derived quantities are orientation
/// independent.
struct CliqueEdge {
    std::size_t source = 0;
    std::size_t tip = 0;
    double weight = 0.0;
};

/// Clique expansion of one layer: each hyperedge e becomes a clique whose
/// pair weights are w(e)/|e|; parallel pairs are merged with summed
/// weights. Stores per-node weighted degrees, their inverse square roots
/// (zero for isolated nodes), and a CSR index of incident edge ids.
struct CliqueLayer {
    std::vector<CliqueEdge> edges;
    std::vector<double> degrees;
    std::vector<double> inv_sqrt_degree;
    std::vector<std::size_t> incident_offsets; // size n + 1
    std::vector<std::size_t> incident_edges;   // size 2 * |edges|
    double max_edge_weight = 0.0;
    std::size_t max_incident_count = 0;

    std::size_t num_nodes() const { return degrees.size(); }
    std::size_t num_edges() const { return edges.size(); }

    /// +1 if `node` is the source of edge `e`, -1 if it is the tip.
    double orientation_sign(std::size_t e, std::size_t node) const {
        return edges[e].source == node ? 1.0 : -1.0;
    }

    /// Incident edge ids of `node` as a [begin, end) pair into incident_edges.
    std::pair<const std::size_t*, const std::size_t*> incident(std::size_t node) const {
        return {incident_edges.data() + incident_offsets[node],
                incident_edges.data() + incident_offsets[node + 1]};
    }
};

/// Expand a layer into its weighted clique graph over n nodes.
inline CliqueLayer clique_expand(const Layer& layer, std::size_t n) {
    struct PairWeight {
        std::size_t u, v;
        double w;
    };
    std::vector<PairWeight> pairs;
    std::size_t pair_count = 0;
    for (const auto& edge : layer.hyperedges) {
        pair_count += edge.nodes.size() * (edge.nodes.size() - 1) / 2;
    }
    pairs.reserve(pair_count);
    for (const auto& edge : layer.hyperedges) {
        const double w = edge.weight / static_cast<double>(edge.nodes.size());
        for (std::size_t a = 0; a < edge.nodes.size(); ++a) {
            for (std::size_t b = a + 1; b < edge.nodes.size(); ++b) {
                pairs.push_back({edge.nodes[a], edge.nodes[b], w});
            }
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const PairWeight& a, const PairWeight& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });

    CliqueLayer clique;
    clique.degrees.assign(n, 0.0);
    clique.edges.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size();) {
        const std::size_t u = pairs[k].u;
        const std::size_t v = pairs[k].v;
        double w = 0.0;
        for (; k < pairs.size() && pairs[k].u == u && pairs[k].v == v; ++k) w += pairs[k].w;
        clique.edges.push_back({u, v, w});
        clique.degrees[u] += w;
        clique.degrees[v] += w;
        clique.max_edge_weight = std::max(clique.max_edge_weight, w);
    }

    clique.inv_sqrt_degree.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        clique.inv_sqrt_degree[u] = clique.degrees[u] > 0.0 ? 1.0 / std::sqrt(clique.degrees[u]) : 0.0;
    }

    // CSR adjacency index
    clique.incident_offsets.assign(n + 1, 0);
    for (const auto& e : clique.edges) {
        ++clique.incident_offsets[e.source + 1];
        ++clique.incident_offsets[e.tip + 1];
    }
    for (std::size_t u = 0; u < n; ++u) {
        clique.incident_offsets[u + 1] += clique.incident_offsets[u];
        clique.max_incident_count = std::max(
            clique.max_incident_count, clique.incident_offsets[u + 1] - clique.incident_offsets[u]);
    }
    clique.incident_edges.resize(2 * clique.edges.size());
    std::vector<std::size_t> cursor(clique.incident_offsets.begin(), clique.incident_offsets.end() - 1);
    for (std::size_t e = 0; e < clique.edges.size(); ++e) {
        clique.incident_edges[cursor[clique.edges[e].source]++] = e;
        clique.incident_edges[cursor[clique.edges[e].tip]++] = e;
    }
    return clique;
}

/// Ids of nodes with zero degree in the expanded layer, ascending.
inline std::vector<std::size_t> isolated_nodes(const CliqueLayer& clique) {
    std::vector<std::size_t> isolated;
    for (std::size_t u = 0; u < clique.degrees.size(); ++u) {
        if (clique.degrees[u] == 0.0) isolated.push_back(u);
    }
    return isolated;
}

} // namespace hyplap
