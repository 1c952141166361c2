#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hyplap/errors.hpp"
#include "hyplap/hypergraph.hpp"
#include "hyplap/labels.hpp"
#include "hyplap/rng.hpp"

namespace hyplap {

/// Planted-partition (stochastic block model) benchmark graphs: an edge of
/// weight 1 between two nodes appears with probability p_in inside a block
/// and p_out across blocks, each unordered pair sampled independently.
struct SbmSpec {
    std::vector<std::size_t> block_sizes;
    double p_in = 0.0;
    double p_out = 0.0;
    std::uint64_t seed = 0;
};

struct SbmInstance {
    MultilayerHypergraph graph; // one layer, all |e| = 2, weight 1
    std::vector<int> ground_truth;
};

inline SbmInstance generate_sbm(const SbmSpec& spec) {
    if (spec.block_sizes.empty()) {
        throw InvalidParameterError("block model needs at least one block");
    }
    for (const std::size_t size : spec.block_sizes) {
        if (size == 0) throw InvalidParameterError("block sizes must be positive");
    }
    auto check_prob = [](double value, const char* name) {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw InvalidParameterError(std::string(name) + " must lie in [0, 1], got " +
                                        std::to_string(value));
        }
    };
    check_prob(spec.p_in, "p_in");
    check_prob(spec.p_out, "p_out");

    SbmInstance instance;
    for (std::size_t block = 0; block < spec.block_sizes.size(); ++block) {
        instance.ground_truth.insert(instance.ground_truth.end(), spec.block_sizes[block],
                                     static_cast<int>(block));
    }
    const std::size_t n = instance.ground_truth.size();
    instance.graph.n = n;

    Layer layer;
    Rng rng(spec.seed);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            const bool same = instance.ground_truth[u] == instance.ground_truth[v];
            const double prob = same ? spec.p_in : spec.p_out;
            if (uniform01(rng) < prob) {
                layer.hyperedges.push_back({1.0, {u, v}});
            }
        }
    }
    instance.graph.layers.push_back(std::move(layer));
    return instance;
}

/// Sample floor(perc/100 * |class|) nodes per class, uniformly without
/// replacement, classes drawn in ascending id order from one seeded stream.
inline std::vector<std::size_t> sample_observed(const std::vector<int>& ground_truth, double perc,
                                                std::uint64_t seed) {
    if (!(perc >= 0.0 && perc <= 100.0)) {
        throw InvalidParameterError("perc must lie in [0, 100], got " + std::to_string(perc));
    }
    int max_class = -1;
    for (const int c : ground_truth) max_class = std::max(max_class, c);
    if (max_class < 0) throw InvalidParameterError("ground truth contains no labeled node");

    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(max_class) + 1);
    for (std::size_t u = 0; u < ground_truth.size(); ++u) {
        if (ground_truth[u] != kUnknownClass) {
            members[static_cast<std::size_t>(ground_truth[u])].push_back(u);
        }
    }

    Rng rng(seed);
    std::vector<std::size_t> observed;
    for (std::size_t c = 0; c < members.size(); ++c) {
        const std::size_t size = members[c].size();
        const auto count =
            static_cast<std::size_t>(std::floor(perc * static_cast<double>(size) / 100.0 + 1e-9));
        if (count == 0) {
            throw EmptyClassSampleError("class " + std::to_string(c) + " with " +
                                        std::to_string(size) +
                                        " nodes yields an empty sample at perc = " +
                                        std::to_string(perc));
        }
        fisher_yates_shuffle(members[c], rng);
        observed.insert(observed.end(), members[c].begin(), members[c].begin() + count);
    }
    std::sort(observed.begin(), observed.end());
    return observed;
}

} // namespace hyplap
