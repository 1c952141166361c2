#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "hyplap/errors.hpp"
#include "hyplap/matrix.hpp"

namespace hyplap {

/// Class id used for nodes whose ground truth is unknown.
inline constexpr int kUnknownClass = -1;

/// Ground-truth classes, the observed node set O, and the derived label
/// matrix Y with Y(u, j) = 1/|C_j cap O| when u is observed with class j
/// and 0 otherwise. Each column of Y sums to 1 when its class has at
/// least one observed node.
struct LabelData {
    std::size_t m = 0;
    std::vector<int> ground_truth;      // per node, kUnknownClass if unknown
    std::vector<std::size_t> observed;  // sorted, duplicate-free
    std::vector<char> observed_mask;    // per node
    Matrix label_matrix;                // n x m

    std::size_t num_nodes() const { return ground_truth.size(); }
    bool is_observed(std::size_t u) const { return observed_mask[u] != 0; }
};

inline LabelData build_label_matrix(const std::vector<int>& ground_truth,
                                    std::vector<std::size_t> observed, std::size_t m,
                                    std::size_t n) {
    if (ground_truth.size() != n) {
        throw DimensionError("ground truth has " + std::to_string(ground_truth.size()) +
                             " entries for " + std::to_string(n) + " nodes");
    }
    if (m < 1) throw InvalidParameterError("class count must be at least 1");
    for (std::size_t u = 0; u < n; ++u) {
        const int c = ground_truth[u];
        if (c != kUnknownClass && (c < 0 || static_cast<std::size_t>(c) >= m)) {
            throw InvalidParameterError("node " + std::to_string(u) + ": class id " +
                                        std::to_string(c) + " outside [0, " + std::to_string(m) + ")");
        }
    }
    std::sort(observed.begin(), observed.end());
    observed.erase(std::unique(observed.begin(), observed.end()), observed.end());
    if (observed.empty()) throw EmptyObservationError("observed set is empty");
    for (const std::size_t u : observed) {
        if (u >= n) {
            throw InvalidNodeError("observed node " + std::to_string(u) + " outside [0, " +
                                   std::to_string(n) + ")");
        }
        if (ground_truth[u] == kUnknownClass) {
            throw MissingLabelError("observed node " + std::to_string(u) + " has no class");
        }
    }

    LabelData labels;
    labels.m = m;
    labels.ground_truth = ground_truth;
    labels.observed = std::move(observed);
    labels.observed_mask.assign(n, 0);
    for (const std::size_t u : labels.observed) labels.observed_mask[u] = 1;

    std::vector<std::size_t> class_counts(m, 0);
    for (const std::size_t u : labels.observed) {
        ++class_counts[static_cast<std::size_t>(ground_truth[u])];
    }
    labels.label_matrix = Matrix(n, m, 0.0);
    for (const std::size_t u : labels.observed) {
        const auto j = static_cast<std::size_t>(ground_truth[u]);
        labels.label_matrix(u, j) = 1.0 / static_cast<double>(class_counts[j]);
    }
    return labels;
}

} // namespace hyplap
