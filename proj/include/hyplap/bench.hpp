#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "hyplap/errors.hpp"
#include "hyplap/io.hpp"
#include "hyplap/labels.hpp"
#include "hyplap/problem.hpp"
#include "hyplap/rng.hpp"
#include "hyplap/sbm.hpp"
#include "hyplap/solver.hpp"

namespace hyplap {

/// Traces that share one instance (same graph and observed set), and hence
/// one cross-method reference value for gate residuals.
struct InstanceTraces {
    std::string instance;
    std::vector<SolverTrace> traces;
};

enum class GateMetric { objective, accuracy };

/// Accuracy gates: `relative` measures (a* - a_k)/(a* - a_0) like the
/// objective gates; `absolute` asks for a_k within `gate` of a* outright.
enum class AccuracyGateMode { relative, absolute };

inline std::vector<double> default_gates() { return {0.75, 0.5, 0.25, 0.1, 0.05}; }

inline std::vector<Method> default_methods() {
    return {Method::ccd, Method::rcd, Method::gcd, Method::gd};
}

/// Best (smallest) objective any trace of the instance reached in budget.
inline double best_objective(const std::vector<SolverTrace>& traces) {
    double best = std::numeric_limits<double>::infinity();
    for (const SolverTrace& trace : traces) {
        for (const Checkpoint& point : trace.checkpoints) best = std::min(best, point.objective);
    }
    return best;
}

/// Best (largest) accuracy any trace of the instance reached in budget.
inline double best_accuracy(const std::vector<SolverTrace>& traces) {
    double best = -std::numeric_limits<double>::infinity();
    for (const SolverTrace& trace : traces) {
        for (const Checkpoint& point : trace.checkpoints) best = std::max(best, point.accuracy);
    }
    return best;
}

/// Normalized flop count at which the run first meets the gate, measured
/// against the instance-wide best value; nullopt when it never does within
/// its budget. A degenerate residual (initial value already equal to the
/// best) counts as hit at flop 0.
inline std::optional<double> gate_hit(const SolverTrace& trace, double gate, double best_value,
                                      GateMetric metric,
                                      AccuracyGateMode mode = AccuracyGateMode::relative) {
    if (trace.checkpoints.empty()) return std::nullopt;
    if (metric == GateMetric::objective) {
        const double denom = trace.checkpoints.front().objective - best_value;
        if (denom <= 0.0) return 0.0;
        for (const Checkpoint& point : trace.checkpoints) {
            if (point.objective - best_value <= gate * denom) return point.normalized_flops;
        }
        return std::nullopt;
    }
    if (mode == AccuracyGateMode::absolute) {
        for (const Checkpoint& point : trace.checkpoints) {
            if (best_value - point.accuracy <= gate) return point.normalized_flops;
        }
        return std::nullopt;
    }
    const double denom = best_value - trace.checkpoints.front().accuracy;
    if (denom <= 0.0) return 0.0;
    for (const Checkpoint& point : trace.checkpoints) {
        if (best_value - point.accuracy <= gate * denom) return point.normalized_flops;
    }
    return std::nullopt;
}

/// One table cell: runs pooled over every instance, failures excluded from
/// the mean/std (sample standard deviation, zero for a single success).
struct GateCell {
    std::size_t runs = 0;
    std::size_t failures = 0;
    bool has_mean = false;
    double mean = 0.0;
    double stddev = 0.0;

    double fail_fraction() const {
        return runs == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(runs);
    }
};

struct GateReport {
    GateMetric metric = GateMetric::objective;
    std::vector<double> gates;
    std::vector<Method> methods;
    std::vector<GateCell> cells; // gates.size() x methods.size(), row-major

    const GateCell& cell(std::size_t gate_index, std::size_t method_index) const {
        return cells[gate_index * methods.size() + method_index];
    }

    const GateCell* find(double gate, Method method) const {
        for (std::size_t g = 0; g < gates.size(); ++g) {
            if (gates[g] != gate) continue;
            for (std::size_t m = 0; m < methods.size(); ++m) {
                if (methods[m] == method) return &cell(g, m);
            }
        }
        return nullptr;
    }
};

inline GateReport gate_stats(const std::vector<InstanceTraces>& instances,
                             const std::vector<double>& gates, GateMetric metric,
                             AccuracyGateMode mode = AccuracyGateMode::relative,
                             std::vector<Method> methods = {}) {
    if (methods.empty()) {
        for (const Method method : default_methods()) {
            for (const InstanceTraces& group : instances) {
                if (std::any_of(group.traces.begin(), group.traces.end(),
                                [&](const SolverTrace& t) { return t.method == method; })) {
                    methods.push_back(method);
                    break;
                }
            }
        }
    }

    GateReport report;
    report.metric = metric;
    report.gates = gates;
    report.methods = methods;
    report.cells.assign(gates.size() * methods.size(), GateCell{});

    std::vector<std::vector<std::vector<double>>> hits(
        gates.size(), std::vector<std::vector<double>>(methods.size()));
    for (const InstanceTraces& group : instances) {
        const double best = metric == GateMetric::objective ? best_objective(group.traces)
                                                            : best_accuracy(group.traces);
        for (const SolverTrace& trace : group.traces) {
            const auto method_it = std::find(methods.begin(), methods.end(), trace.method);
            if (method_it == methods.end()) continue;
            const auto mi = static_cast<std::size_t>(method_it - methods.begin());
            for (std::size_t g = 0; g < gates.size(); ++g) {
                GateCell& cell = report.cells[g * methods.size() + mi];
                ++cell.runs;
                const auto hit = gate_hit(trace, gates[g], best, metric, mode);
                if (hit) {
                    hits[g][mi].push_back(*hit);
                } else {
                    ++cell.failures;
                }
            }
        }
    }

    for (std::size_t g = 0; g < gates.size(); ++g) {
        for (std::size_t m = 0; m < methods.size(); ++m) {
            GateCell& cell = report.cells[g * methods.size() + m];
            const std::vector<double>& values = hits[g][m];
            if (values.empty()) continue;
            cell.has_mean = true;
            double sum = 0.0;
            for (const double v : values) sum += v;
            cell.mean = sum / static_cast<double>(values.size());
            if (values.size() > 1) {
                double ss = 0.0;
                for (const double v : values) ss += (v - cell.mean) * (v - cell.mean);
                cell.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
            }
        }
    }
    return report;
}

/// CSV mirror of the gate tables: one row per gate, per-method mean/std of
/// normalized flops plus failure fraction; `-` marks an all-fail cell.
inline void write_gate_table_csv(std::ostream& out, const GateReport& report,
                                 const std::vector<std::string>& config = {}) {
    for (const std::string& entry : config) out << "# " << entry << "\n";
    out << "gate";
    for (const Method method : report.methods) {
        const char* name = method_name(method);
        out << ',' << name << "_flop_mean," << name << "_flop_std," << name << "_fail";
    }
    out << "\n";
    for (std::size_t g = 0; g < report.gates.size(); ++g) {
        out << format_double(report.gates[g]);
        for (std::size_t m = 0; m < report.methods.size(); ++m) {
            const GateCell& cell = report.cell(g, m);
            if (cell.has_mean) {
                out << ',' << format_double(cell.mean) << ',' << format_double(cell.stddev);
            } else {
                out << ",-,-";
            }
            out << ',' << format_double(cell.fail_fraction());
        }
        out << "\n";
    }
}

/// One gnuplot-ready dataset per trace (objective and accuracy against
/// normalized flops), datasets separated by double blank lines.
inline void write_curves(std::ostream& out, const std::vector<InstanceTraces>& instances,
                         const std::vector<std::string>& config = {}) {
    for (const std::string& entry : config) out << "# " << entry << "\n";
    bool first = true;
    for (const InstanceTraces& group : instances) {
        for (const SolverTrace& trace : group.traces) {
            if (!first) out << "\n\n";
            first = false;
            out << "# instance=" << group.instance << " method=" << method_name(trace.method)
                << " seed=" << trace.seed << "\n";
            out << "# normalized_flops objective accuracy\n";
            for (const Checkpoint& point : trace.checkpoints) {
                out << format_double(point.normalized_flops) << ' '
                    << format_double(point.objective) << ' ' << format_double(point.accuracy)
                    << "\n";
            }
        }
    }
}

/// Run every (method, seed) pair on one problem with the shared flop
/// budget. Deterministic methods record the seed but ignore it.
inline std::vector<SolverTrace> run_experiment(const Problem& problem,
                                               const std::vector<Method>& methods,
                                               std::uint64_t budget_flops,
                                               const std::vector<std::uint64_t>& seeds,
                                               const SolveOptions& opts = {}) {
    std::vector<SolverTrace> traces;
    for (const Method method : methods) {
        for (const std::uint64_t seed : seeds) {
            SolverTrace trace;
            switch (method) {
                case Method::gd: trace = run_gd(problem, budget_flops, opts); break;
                case Method::ccd: trace = run_ccd(problem, budget_flops, seed, opts); break;
                case Method::rcd: trace = run_rcd(problem, budget_flops, seed, opts); break;
                case Method::gcd: trace = run_gcd(problem, budget_flops, opts); break;
            }
            trace.seed = seed;
            traces.push_back(std::move(trace));
        }
    }
    return traces;
}

/// The synthetic sweep: block model instances over a grid of inter/intra
/// edge-probability ratios and observed percentages, `reps` instances per
/// cell, every method run once per instance with a 4n-flop default budget.
struct SweepConfig {
    std::vector<std::size_t> block_sizes = {125, 125, 125, 125};
    double p_in = 0.2;
    std::vector<double> ratios = {2.0, 2.5, 3.0, 3.5}; // p_out = p_in / ratio
    std::vector<double> percs = {3.0, 6.0, 9.0, 12.0};
    std::size_t reps = 5;
    std::uint64_t base_seed = 1;
    double p = 2.0;
    double lambda = 1.0;
    std::vector<Method> methods = default_methods();
    double budget_multiplier = 4.0;
    std::uint64_t checkpoint_stride = 0; // 0 -> solver default
    std::optional<double> stepsize;
    unsigned jobs = 1;
};

inline std::vector<InstanceTraces> run_sbm_sweep(const SweepConfig& config) {
    struct Cell {
        double ratio;
        double perc;
        std::size_t rep;
        std::uint64_t seed;
        std::string tag;
    };
    std::vector<Cell> cells;
    for (std::size_t r = 0; r < config.ratios.size(); ++r) {
        if (!(config.ratios[r] > 0.0)) throw InvalidParameterError("ratio must be positive");
        for (std::size_t q = 0; q < config.percs.size(); ++q) {
            for (std::size_t rep = 0; rep < config.reps; ++rep) {
                const std::uint64_t seed =
                    mix_seed(mix_seed(mix_seed(config.base_seed, r), q), rep);
                cells.push_back({config.ratios[r], config.percs[q], rep, seed,
                                 "sbm_ratio" + format_double(config.ratios[r]) + "_perc" +
                                     format_double(config.percs[q]) + "_rep" +
                                     std::to_string(rep)});
            }
        }
    }

    std::vector<InstanceTraces> results(cells.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t index = cursor.fetch_add(1);
            if (index >= cells.size()) return;
            const Cell& cell = cells[index];

            SbmSpec spec;
            spec.block_sizes = config.block_sizes;
            spec.p_in = config.p_in;
            spec.p_out = config.p_in / cell.ratio;
            spec.seed = mix_seed(cell.seed, 0xA11CE);
            SbmInstance instance = generate_sbm(spec);

            const auto observed =
                sample_observed(instance.ground_truth, cell.perc, mix_seed(cell.seed, 0x0B5E12));
            const std::size_t n = instance.graph.n;
            LabelData labels = build_label_matrix(instance.ground_truth, observed,
                                                  config.block_sizes.size(), n);
            Problem problem = make_problem(std::move(instance.graph), std::move(labels), config.p,
                                           std::vector<double>(1, config.lambda));

            const auto budget = static_cast<std::uint64_t>(
                config.budget_multiplier * static_cast<double>(n));
            SolveOptions opts;
            opts.checkpoint_stride = config.checkpoint_stride;
            opts.stepsize = config.stepsize;
            results[index].instance = cell.tag;
            results[index].traces = run_experiment(problem, config.methods, budget,
                                                   {mix_seed(cell.seed, 0x5eed)}, opts);
        }
    };

    const unsigned jobs = std::max(1u, config.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& thread : pool) thread.join();
    }
    return results;
}

} // namespace hyplap
