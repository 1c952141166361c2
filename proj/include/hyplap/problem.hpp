#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hyplap/errors.hpp"
#include "hyplap/hypergraph.hpp"
#include "hyplap/labels.hpp"
#include "hyplap/matrix.hpp"

namespace hyplap {

/// Floor applied inside M^(p-2) when p < 2, where the scaled-difference
/// magnitude bound M could otherwise blow the stepsize denominator up.
inline constexpr double kLevelSetFloor = 1e-3;

/// A regularized label-inference problem instance:
///
///   theta(Z) = ||Z - Y||_F^2
///            + sum_l lambda_l sum_{(u,v) in E_l} w_uv
///              sum_j |Z(u,j)/sqrt(d_u) - Z(v,j)/sqrt(d_v)|^p
///
/// over the clique expansions of the hypergraph layers. Isolated nodes in
/// a layer take 1/sqrt(d) := 0 in that layer and feel only the fidelity
/// term. Values are immutable once built and safe to share across threads.
struct Problem {
    MultilayerHypergraph hypergraph;
    std::vector<CliqueLayer> cliques;
    LabelData labels;
    double p = 2.0;
    std::vector<double> lambdas;

    std::size_t num_nodes() const { return hypergraph.n; }
    std::size_t num_classes() const { return labels.m; }
    std::size_t num_layers() const { return hypergraph.num_layers(); }
};

inline Problem make_problem(MultilayerHypergraph hypergraph, LabelData labels, double p,
                            std::vector<double> lambdas) {
    if (hypergraph.n < 1 || hypergraph.layers.empty()) {
        throw InvalidParameterError("hypergraph needs at least 1 node and 1 layer");
    }
    if (labels.num_nodes() != hypergraph.n) {
        throw DimensionError("labels cover " + std::to_string(labels.num_nodes()) +
                             " nodes, hypergraph has " + std::to_string(hypergraph.n));
    }
    if (!(p >= 1.0)) throw InvalidParameterError("exponent p must be >= 1");
    if (lambdas.size() != hypergraph.num_layers()) {
        throw DimensionError("got " + std::to_string(lambdas.size()) + " lambdas for " +
                             std::to_string(hypergraph.num_layers()) + " layers");
    }
    for (const double lambda : lambdas) {
        if (!(lambda >= 0.0)) throw InvalidParameterError("lambdas must be nonnegative");
    }
    Problem problem;
    problem.cliques.reserve(hypergraph.layers.size());
    for (const auto& layer : hypergraph.layers) {
        problem.cliques.push_back(clique_expand(layer, hypergraph.n));
    }
    problem.hypergraph = std::move(hypergraph);
    problem.labels = std::move(labels);
    problem.p = p;
    problem.lambdas = std::move(lambdas);
    return problem;
}

/// phi_p(y) = |y|^(p-1) sgn(y); odd in y, identity for p = 2.
inline double phi_p(double y, double p) {
    if (p == 2.0) return y;
    if (y == 0.0) return 0.0;
    const double mag = std::pow(std::abs(y), p - 1.0);
    return y > 0.0 ? mag : -mag;
}

/// |y|^p with a fast path for the quadratic case.
inline double abs_pow(double y, double p) {
    if (p == 2.0) return y * y;
    return std::pow(std::abs(y), p);
}

namespace detail {

inline void check_score_shape(const Problem& problem, const Matrix& z) {
    if (z.rows() != problem.num_nodes() || z.cols() != problem.num_classes()) {
        throw DimensionError("score matrix is " + std::to_string(z.rows()) + "x" +
                             std::to_string(z.cols()) + ", expected " +
                             std::to_string(problem.num_nodes()) + "x" +
                             std::to_string(problem.num_classes()));
    }
}

} // namespace detail

/// Objective value theta(Z) = fidelity + weighted p-th-power smoothness.
inline double evaluate(const Problem& problem, const Matrix& z) {
    detail::check_score_shape(problem, z);
    const std::size_t m = problem.num_classes();
    const Matrix& y = problem.labels.label_matrix;

    double fidelity = 0.0;
    for (std::size_t k = 0; k < z.data().size(); ++k) {
        const double r = z.data()[k] - y.data()[k];
        fidelity += r * r;
    }

    double smoothness = 0.0;
    for (std::size_t l = 0; l < problem.cliques.size(); ++l) {
        const double lambda = problem.lambdas[l];
        if (lambda == 0.0) continue;
        const CliqueLayer& clique = problem.cliques[l];
        double layer_sum = 0.0;
        for (const auto& edge : clique.edges) {
            const double su = clique.inv_sqrt_degree[edge.source];
            const double sv = clique.inv_sqrt_degree[edge.tip];
            const double* zu = z.row(edge.source);
            const double* zv = z.row(edge.tip);
            double edge_sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                edge_sum += abs_pow(zu[j] * su - zv[j] * sv, problem.p);
            }
            layer_sum += edge.weight * edge_sum;
        }
        smoothness += lambda * layer_sum;
    }
    return fidelity + smoothness;
}

/// Full gradient: 2(Z - Y) plus, per oriented edge (u -> v), the
/// contribution p * lambda_l * w_uv * phi_p(scaled difference) scattered
/// with weights +1/sqrt(d_u) at the source and -1/sqrt(d_v) at the tip.
inline Matrix gradient(const Problem& problem, const Matrix& z) {
    detail::check_score_shape(problem, z);
    const std::size_t m = problem.num_classes();
    const Matrix& y = problem.labels.label_matrix;

    Matrix grad(z.rows(), z.cols());
    for (std::size_t k = 0; k < z.data().size(); ++k) {
        grad.data()[k] = 2.0 * (z.data()[k] - y.data()[k]);
    }

    for (std::size_t l = 0; l < problem.cliques.size(); ++l) {
        const double lambda = problem.lambdas[l];
        if (lambda == 0.0) continue;
        const CliqueLayer& clique = problem.cliques[l];
        for (const auto& edge : clique.edges) {
            const double su = clique.inv_sqrt_degree[edge.source];
            const double sv = clique.inv_sqrt_degree[edge.tip];
            const double scale = problem.p * lambda * edge.weight;
            const double* zu = z.row(edge.source);
            const double* zv = z.row(edge.tip);
            double* gu = grad.row(edge.source);
            double* gv = grad.row(edge.tip);
            for (std::size_t j = 0; j < m; ++j) {
                const double c = scale * phi_p(zu[j] * su - zv[j] * sv, problem.p);
                gu[j] += c * su;
                gv[j] -= c * sv;
            }
        }
    }
    return grad;
}

/// Coordinatewise Lipschitz constant of the gradient for the quadratic
/// case: 2 + 2 sum_l lambda_l [node non-isolated in layer l]. Quadratic
/// only; other exponents use global_stepsize.
inline double coordinate_lipschitz(const Problem& problem, std::size_t node) {
    if (problem.p != 2.0) {
        throw WrongModeError("coordinate_lipschitz is defined for p = 2 only");
    }
    if (node >= problem.num_nodes()) {
        throw InvalidNodeError("node " + std::to_string(node) + " outside [0, " +
                               std::to_string(problem.num_nodes()) + ")");
    }
    double lipschitz = 2.0;
    for (std::size_t l = 0; l < problem.cliques.size(); ++l) {
        if (problem.cliques[l].degrees[node] > 0.0) lipschitz += 2.0 * problem.lambdas[l];
    }
    return lipschitz;
}

/// Fixed stepsize 1/L-hat from an upper bound on the gradient Lipschitz
/// constant. For p = 2, L-hat = 2 + 4 sum_l lambda_l (the normalized
/// Laplacian spectrum is bounded by 2). Otherwise
///
///   L-hat = 2 + p |p-1| M'^(p-2) sum_l lambda_l w-hat_l (2 d-hat_l)
///
/// with w-hat_l the largest clique-edge weight, d-hat_l the largest
/// incident-edge count, and M' = level_set_bound, floored at
/// kLevelSetFloor when p < 2 (where the second derivative of |y|^p grows
/// as y -> 0).
inline double global_stepsize(const Problem& problem, double level_set_bound = 1.0) {
    double lambda_sum = 0.0;
    for (const double lambda : problem.lambdas) lambda_sum += lambda;
    if (problem.p == 2.0) return 1.0 / (2.0 + 4.0 * lambda_sum);

    const double p = problem.p;
    double bound = level_set_bound;
    if (p < 2.0) bound = std::max(bound, kLevelSetFloor);
    double curvature = 0.0;
    for (std::size_t l = 0; l < problem.cliques.size(); ++l) {
        const CliqueLayer& clique = problem.cliques[l];
        curvature += problem.lambdas[l] * clique.max_edge_weight *
                     2.0 * static_cast<double>(clique.max_incident_count);
    }
    const double lipschitz = 2.0 + p * std::abs(p - 1.0) * std::pow(bound, p - 2.0) * curvature;
    return 1.0 / lipschitz;
}

} // namespace hyplap
