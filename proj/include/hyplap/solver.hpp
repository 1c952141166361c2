#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyplap/errors.hpp"
#include "hyplap/matrix.hpp"
#include "hyplap/problem.hpp"
#include "hyplap/rng.hpp"
#include "hyplap/state.hpp"

namespace hyplap {

enum class Method { gd, ccd, rcd, gcd };

inline const char* method_name(Method method) {
    switch (method) {
        case Method::gd: return "gd";
        case Method::ccd: return "ccd";
        case Method::rcd: return "rcd";
        case Method::gcd: return "gcd";
    }
    return "?";
}

inline Method parse_method(const std::string& name) {
    if (name == "gd") return Method::gd;
    if (name == "ccd") return Method::ccd;
    if (name == "rcd") return Method::rcd;
    if (name == "gcd") return Method::gcd;
    throw InvalidParameterError("unknown method '" + name + "' (expected gd, ccd, rcd, or gcd)");
}

/// One trace sample. Flop counts normalize to "sweeps over all nodes":
/// a full gradient step costs n flops, a coordinate step (one node, all
/// classes) costs 1.
struct Checkpoint {
    std::uint64_t flops = 0;
    double normalized_flops = 0.0;
    double objective = 0.0;
    double accuracy = 0.0;
};

struct SolverTrace {
    Method method = Method::gd;
    double p = 2.0;
    std::uint64_t seed = 0;
    std::size_t num_nodes = 0;
    std::vector<Checkpoint> checkpoints; // strictly increasing flops, starts at 0
    Matrix final_scores;
    std::vector<int> final_assignment;
    double final_objective = 0.0;
    double final_grad_inf = 0.0;
    bool failed_tolerance = false; // grad_tol > 0 and never reached in budget
    std::string instance;          // optional tag used by experiment tables
};

struct SolveOptions {
    std::uint64_t checkpoint_stride = 0;    // 0 -> max(1, ceil(n / 100))
    double grad_tol = 0.0;                  // 0 -> run out the budget
    std::optional<double> stepsize;         // overrides the derived stepsizes
};

namespace detail {

inline std::uint64_t effective_stride(std::uint64_t stride, std::size_t n) {
    if (stride > 0) return stride;
    return std::max<std::uint64_t>(1, (static_cast<std::uint64_t>(n) + 99) / 100);
}

class TraceRecorder {
public:
    TraceRecorder(Method method, const Problem& problem, std::uint64_t seed, std::uint64_t stride)
        : stride_(effective_stride(stride, problem.num_nodes())) {
        trace_.method = method;
        trace_.p = problem.p;
        trace_.seed = seed;
        trace_.num_nodes = problem.num_nodes();
        next_mark_ = stride_;
    }

    void record(const ScoreState& state) {
        trace_.checkpoints.push_back({state.flops(),
                                      static_cast<double>(state.flops()) /
                                          static_cast<double>(trace_.num_nodes),
                                      state.objective(), state.accuracy()});
    }

    void maybe_record(const ScoreState& state) {
        if (state.flops() < next_mark_) return;
        record(state);
        next_mark_ = (state.flops() / stride_ + 1) * stride_;
    }

    SolverTrace finish(const ScoreState& state, double grad_tol) {
        if (trace_.checkpoints.empty() || trace_.checkpoints.back().flops < state.flops()) {
            record(state);
        }
        trace_.final_scores = state.scores();
        trace_.final_assignment = state.assignment();
        trace_.final_objective = state.objective();
        trace_.final_grad_inf = state.grad_inf_norm();
        trace_.failed_tolerance = grad_tol > 0.0 && trace_.final_grad_inf > grad_tol;
        return std::move(trace_);
    }

private:
    SolverTrace trace_;
    std::uint64_t stride_;
    std::uint64_t next_mark_;
};

inline void check_budget(std::uint64_t budget_flops) {
    if (budget_flops == 0) throw InvalidParameterError("flop budget must be positive");
}

/// Per-node stepsizes for the coordinate methods: 1/L_i for p = 2, the
/// shared global stepsize otherwise, the explicit override when given.
inline std::vector<double> coordinate_stepsizes(const Problem& problem, const ScoreState& state,
                                                const SolveOptions& opts) {
    std::vector<double> alpha(problem.num_nodes());
    if (opts.stepsize) {
        std::fill(alpha.begin(), alpha.end(), *opts.stepsize);
    } else if (problem.p == 2.0) {
        for (std::size_t i = 0; i < problem.num_nodes(); ++i) {
            alpha[i] = 1.0 / coordinate_lipschitz(problem, i);
        }
    } else {
        std::fill(alpha.begin(), alpha.end(), global_stepsize(problem, state.level_set_bound()));
    }
    return alpha;
}

inline bool done(const ScoreState& state, double grad_tol) {
    return grad_tol > 0.0 && state.grad_inf_norm() <= grad_tol;
}

} // namespace detail

/// Full gradient descent from Z = 0. Each iteration costs n flops. For
/// p != 2 a step that would increase the objective is halved up to 20
/// times and skipped if that never helps.
inline SolverTrace run_gd(const Problem& problem, std::uint64_t budget_flops,
                          const SolveOptions& opts = {}) {
    detail::check_budget(budget_flops);
    const std::size_t n = problem.num_nodes();
    const std::size_t m = problem.num_classes();
    ScoreState state(problem, Matrix(n, m));
    const double alpha =
        opts.stepsize ? *opts.stepsize : global_stepsize(problem, state.level_set_bound());

    detail::TraceRecorder recorder(Method::gd, problem, 0, opts.checkpoint_stride);
    recorder.record(state);
    Matrix next(n, m);
    while (!detail::done(state, opts.grad_tol) && state.flops() + n <= budget_flops) {
        const Matrix& z = state.scores();
        const Matrix& g = state.grad();
        double step = alpha;
        bool moved = true;
        for (int attempt = 0;; ++attempt) {
            for (std::size_t k = 0; k < n * m; ++k) next.data()[k] = z.data()[k] - step * g.data()[k];
            if (problem.p == 2.0 || evaluate(problem, next) <= state.objective()) break;
            if (attempt == 20) {
                moved = false;
                break;
            }
            step *= 0.5;
        }
        if (moved) state.set_scores(next);
        state.add_flops(n);
        recorder.maybe_record(state);
    }
    return recorder.finish(state, opts.grad_tol);
}

namespace detail {

template <typename PickNode>
SolverTrace run_coordinate(Method method, const Problem& problem, std::uint64_t budget_flops,
                           std::uint64_t seed, const SolveOptions& opts, PickNode&& pick) {
    check_budget(budget_flops);
    const std::size_t m = problem.num_classes();
    ScoreState state(problem, Matrix(problem.num_nodes(), m));
    const std::vector<double> alpha = coordinate_stepsizes(problem, state, opts);

    TraceRecorder recorder(method, problem, seed, opts.checkpoint_stride);
    recorder.record(state);
    while (!done(state, opts.grad_tol) && state.flops() + 1 <= budget_flops) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t i = pick(state, j);
            state.apply_coordinate_update(i, j, alpha[i]);
        }
        state.add_flops(1);
        recorder.maybe_record(state);
    }
    return recorder.finish(state, opts.grad_tol);
}

} // namespace detail

/// Cyclic coordinate descent: the first pass visits nodes in index order,
/// later passes visit a fresh seeded shuffle. Within one iteration the same
/// node is updated in every class.
inline SolverTrace run_ccd(const Problem& problem, std::uint64_t budget_flops, std::uint64_t seed,
                           const SolveOptions& opts = {}) {
    std::vector<std::size_t> order(problem.num_nodes());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    std::size_t pos = 0;
    std::size_t cursor = 0; // node picked for the current iteration
    auto pick = [&](const ScoreState&, std::size_t j) {
        if (j == 0) {
            cursor = order[pos];
            if (++pos == order.size()) {
                pos = 0;
                fisher_yates_shuffle(order, rng);
            }
        }
        return cursor;
    };
    return detail::run_coordinate(Method::ccd, problem, budget_flops, seed, opts, pick);
}

/// Random coordinate descent: each iteration draws one node uniformly.
inline SolverTrace run_rcd(const Problem& problem, std::uint64_t budget_flops, std::uint64_t seed,
                           const SolveOptions& opts = {}) {
    Rng rng(seed);
    std::size_t cursor = 0;
    auto pick = [&](const ScoreState&, std::size_t j) {
        if (j == 0) cursor = uniform_index(rng, problem.num_nodes());
        return cursor;
    };
    return detail::run_coordinate(Method::rcd, problem, budget_flops, seed, opts, pick);
}

/// Greedy (Gauss-Southwell) coordinate descent: per class, the node with
/// the largest |gradient| (lowest id under ties). Deterministic.
inline SolverTrace run_gcd(const Problem& problem, std::uint64_t budget_flops,
                           const SolveOptions& opts = {}) {
    auto pick = [](const ScoreState& state, std::size_t j) { return state.heap_top(j); };
    return detail::run_coordinate(Method::gcd, problem, budget_flops, 0, opts, pick);
}

/// Row-wise argmax of the score matrix; ties break to the lowest class id.
inline std::vector<int> assign_labels(const Matrix& scores) {
    std::vector<int> labels(scores.rows());
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < scores.cols(); ++j) {
            if (scores(i, j) > scores(i, best)) best = j;
        }
        labels[i] = static_cast<int>(best);
    }
    return labels;
}

/// Fraction of unlabeled nodes whose assignment matches the ground truth.
/// Nodes without ground truth are left out of both counts.
inline double accuracy(const std::vector<int>& assignment, const std::vector<int>& ground_truth,
                       const std::vector<std::size_t>& observed) {
    if (assignment.size() != ground_truth.size()) {
        throw DimensionError("assignment has " + std::to_string(assignment.size()) +
                             " entries but ground truth has " + std::to_string(ground_truth.size()));
    }
    std::vector<char> is_observed(assignment.size(), 0);
    for (const std::size_t u : observed) {
        if (u >= assignment.size()) {
            throw InvalidNodeError("observed node " + std::to_string(u) + " out of range");
        }
        is_observed[u] = 1;
    }
    std::size_t total = 0;
    std::size_t correct = 0;
    for (std::size_t u = 0; u < assignment.size(); ++u) {
        if (is_observed[u] || ground_truth[u] == kUnknownClass) continue;
        ++total;
        if (assignment[u] == ground_truth[u]) ++correct;
    }
    if (total == 0) throw UndefinedError("accuracy undefined: no unlabeled nodes");
    return static_cast<double>(correct) / static_cast<double>(total);
}

} // namespace hyplap
