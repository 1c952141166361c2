#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hyplap/errors.hpp"
#include "hyplap/heap.hpp"
#include "hyplap/matrix.hpp"
#include "hyplap/problem.hpp"

namespace hyplap {

/// Solver iterate plus the caches that make one-coordinate updates cheap:
///
///   - per layer, the scaled-difference rows
///     U_l(e, j) = Z(u, j)/sqrt(d_u) - Z(v, j)/sqrt(d_v) for edge e = (u -> v),
///   - the full gradient, kept in sync entry-wise,
///   - one max-heap per class keyed by |gradient|, ties to the lowest node id,
///   - the running objective (maintained by exact per-update deltas),
///   - the running assignment and its correct count over unlabeled nodes.
///
/// A coordinate update at (i, j) touches only the incident edges of i, the
/// gradient entries of i and its neighbors in column j, and row i of the
/// assignment. The flop counter is owned by the caller: updates never
/// advance it.
class ScoreState {
public:
    ScoreState(const Problem& problem, Matrix scores)
        : problem_(&problem) {
        detail::check_score_shape(problem, scores);
        reset(std::move(scores));
        level_set_bound_ = 1.0;
        for (const Matrix& u : scaled_diffs_) {
            for (const double value : u.data()) {
                level_set_bound_ = std::max(level_set_bound_, std::abs(value));
            }
        }
    }

    const Problem& problem() const { return *problem_; }
    const Matrix& scores() const { return scores_; }
    const Matrix& grad() const { return grad_; }
    const Matrix& scaled_diffs(std::size_t layer) const { return scaled_diffs_[layer]; }
    double objective() const { return objective_; }
    const std::vector<int>& assignment() const { return assignment_; }

    std::uint64_t flops() const { return flops_; }
    void add_flops(std::uint64_t count) { flops_ += count; }

    /// max(1, largest |U| entry at construction); the magnitude bound used
    /// by the fixed stepsize for p != 2.
    double level_set_bound() const { return level_set_bound_; }

    /// Node with the largest |gradient| in class j (lowest id under ties).
    std::size_t heap_top(std::size_t j) const { return heaps_[j].top(); }

    double grad_inf_norm() const {
        double norm = 0.0;
        for (const auto& heap : heaps_) norm = std::max(norm, heap.top_key());
        return norm;
    }

    /// Fraction of unlabeled nodes (with known ground truth) whose running
    /// assignment matches it; NaN when there are none.
    double accuracy() const {
        if (unlabeled_total_ == 0) return std::numeric_limits<double>::quiet_NaN();
        return static_cast<double>(correct_) / static_cast<double>(unlabeled_total_);
    }

    /// Gradient entry (i, j) recomputed from the cached scaled differences.
    double coordinate_gradient(std::size_t i, std::size_t j) const {
        check_coordinate(i, j);
        double g = 2.0 * (scores_(i, j) - problem_->labels.label_matrix(i, j));
        for (std::size_t l = 0; l < problem_->cliques.size(); ++l) {
            const double lambda = problem_->lambdas[l];
            if (lambda == 0.0) continue;
            const CliqueLayer& clique = problem_->cliques[l];
            const double scale_i = clique.inv_sqrt_degree[i];
            const auto [begin, end] = clique.incident(i);
            for (const std::size_t* e = begin; e != end; ++e) {
                const CliqueEdge& edge = clique.edges[*e];
                const double sigma = clique.orientation_sign(*e, i);
                g += problem_->p * lambda * edge.weight *
                     phi_p(scaled_diffs_[l](*e, j), problem_->p) * sigma * scale_i;
            }
        }
        return g;
    }

    /// Exact objective change theta(Z + s e_ij) - theta(Z), from the
    /// fidelity term and the incident edges of node i.
    double delta_objective(std::size_t i, std::size_t j, double step) const {
        check_coordinate(i, j);
        double delta = step * (step + 2.0 * (scores_(i, j) - problem_->labels.label_matrix(i, j)));
        for (std::size_t l = 0; l < problem_->cliques.size(); ++l) {
            const double lambda = problem_->lambdas[l];
            if (lambda == 0.0) continue;
            const CliqueLayer& clique = problem_->cliques[l];
            const double scale_i = clique.inv_sqrt_degree[i];
            const auto [begin, end] = clique.incident(i);
            for (const std::size_t* e = begin; e != end; ++e) {
                const CliqueEdge& edge = clique.edges[*e];
                const double sigma = clique.orientation_sign(*e, i);
                const double u = scaled_diffs_[l](*e, j);
                delta += lambda * edge.weight *
                         (abs_pow(u + sigma * step * scale_i, problem_->p) - abs_pow(u, problem_->p));
            }
        }
        return delta;
    }

    /// One-coordinate move Z(i, j) -= alpha * grad(i, j), with all caches
    /// updated in place. For p != 2 the step is halved (up to 20 times)
    /// while it would increase the objective, and dropped entirely if no
    /// halving helps, which keeps the running objective non-increasing.
    void apply_coordinate_update(std::size_t i, std::size_t j, double alpha) {
        check_coordinate(i, j);
        double step = -alpha * grad_(i, j);
        if (step == 0.0) return;
        double delta = delta_objective(i, j, step);
        if (problem_->p != 2.0 && delta > 0.0) {
            int halvings = 0;
            while (delta > 0.0 && halvings < 20) {
                step *= 0.5;
                delta = delta_objective(i, j, step);
                ++halvings;
            }
            if (delta > 0.0) return; // skip this coordinate
        }

        objective_ += delta;
        touched_.clear();
        for (std::size_t l = 0; l < problem_->cliques.size(); ++l) {
            const CliqueLayer& clique = problem_->cliques[l];
            const double scale_i = clique.inv_sqrt_degree[i];
            const double lambda = problem_->lambdas[l];
            const auto [begin, end] = clique.incident(i);
            for (const std::size_t* e = begin; e != end; ++e) {
                const CliqueEdge& edge = clique.edges[*e];
                const double sigma = clique.orientation_sign(*e, i);
                double& u = scaled_diffs_[l](*e, j);
                const double u_new = u + sigma * step * scale_i;
                const double dc = problem_->p * lambda * edge.weight *
                                  (phi_p(u_new, problem_->p) - phi_p(u, problem_->p));
                u = u_new;
                grad_(edge.source, j) += dc * clique.inv_sqrt_degree[edge.source];
                grad_(edge.tip, j) -= dc * clique.inv_sqrt_degree[edge.tip];
                touched_.push_back(edge.source == i ? edge.tip : edge.source);
            }
        }
        scores_(i, j) += step;
        grad_(i, j) += 2.0 * step;

        heaps_[j].update(i, std::abs(grad_(i, j)));
        for (const std::size_t node : touched_) {
            heaps_[j].update(node, std::abs(grad_(node, j)));
        }
        refresh_assignment_row(i);
    }

    /// Replace the whole iterate and rebuild every cache (used by full
    /// gradient steps). Keeps the flop counter and the level-set bound.
    void set_scores(Matrix scores) {
        detail::check_score_shape(*problem_, scores);
        reset(std::move(scores));
    }

private:
    void check_coordinate(std::size_t i, std::size_t j) const {
        if (i >= scores_.rows() || j >= scores_.cols()) {
            throw InvalidParameterError("coordinate (" + std::to_string(i) + ", " +
                                        std::to_string(j) + ") outside " +
                                        std::to_string(scores_.rows()) + "x" +
                                        std::to_string(scores_.cols()));
        }
    }

    void reset(Matrix scores) {
        const Problem& problem = *problem_;
        scores_ = std::move(scores);
        const std::size_t m = problem.num_classes();

        scaled_diffs_.clear();
        scaled_diffs_.reserve(problem.cliques.size());
        for (const CliqueLayer& clique : problem.cliques) {
            Matrix u(clique.num_edges(), m);
            for (std::size_t e = 0; e < clique.num_edges(); ++e) {
                const CliqueEdge& edge = clique.edges[e];
                const double su = clique.inv_sqrt_degree[edge.source];
                const double sv = clique.inv_sqrt_degree[edge.tip];
                for (std::size_t j = 0; j < m; ++j) {
                    u(e, j) = scores_(edge.source, j) * su - scores_(edge.tip, j) * sv;
                }
            }
            scaled_diffs_.push_back(std::move(u));
        }

        grad_ = gradient(problem, scores_);
        objective_ = evaluate(problem, scores_);

        heaps_.resize(m);
        std::vector<double> keys(problem.num_nodes());
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i < problem.num_nodes(); ++i) keys[i] = std::abs(grad_(i, j));
            heaps_[j].build(keys);
        }

        assignment_.assign(problem.num_nodes(), 0);
        correct_ = 0;
        unlabeled_total_ = 0;
        for (std::size_t i = 0; i < problem.num_nodes(); ++i) {
            assignment_[i] = row_argmax(i);
            if (counts_for_accuracy(i)) {
                ++unlabeled_total_;
                if (assignment_[i] == problem.labels.ground_truth[i]) ++correct_;
            }
        }
    }

    int row_argmax(std::size_t i) const {
        std::size_t best = 0;
        for (std::size_t j = 1; j < scores_.cols(); ++j) {
            if (scores_(i, j) > scores_(i, best)) best = j;
        }
        return static_cast<int>(best);
    }

    bool counts_for_accuracy(std::size_t i) const {
        return !problem_->labels.is_observed(i) && problem_->labels.ground_truth[i] != kUnknownClass;
    }

    void refresh_assignment_row(std::size_t i) {
        const int best = row_argmax(i);
        if (best == assignment_[i]) return;
        if (counts_for_accuracy(i)) {
            if (assignment_[i] == problem_->labels.ground_truth[i]) --correct_;
            if (best == problem_->labels.ground_truth[i]) ++correct_;
        }
        assignment_[i] = best;
    }

    const Problem* problem_;
    Matrix scores_;
    Matrix grad_;
    std::vector<Matrix> scaled_diffs_; // one |E_l| x m block per layer
    std::vector<IndexedMaxHeap> heaps_;
    double objective_ = 0.0;
    double level_set_bound_ = 1.0;
    std::vector<int> assignment_;
    std::size_t correct_ = 0;
    std::size_t unlabeled_total_ = 0;
    std::uint64_t flops_ = 0;
    std::vector<std::size_t> touched_; // scratch for heap refreshes
};

} // namespace hyplap
