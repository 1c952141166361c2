// Command-line front end: generate block-model benchmarks, solve single
// instances, run the synthetic sweep, and aggregate trace files into gate
// tables. Exit codes: 0 success, 2 usage error, 1 runtime failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyplap/hyplap.hpp"

namespace {

using namespace hyplap;

// Flag combinations that CLI11 cannot check on its own (cross-flag or
// flag-vs-input consistency). Reported like parse errors, exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

std::string join_sizes(const std::vector<std::size_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> methods;
    for (const std::string& name : names) methods.push_back(parse_method(name));
    return methods;
}

std::string method_list(const std::vector<Method>& methods) {
    std::string out;
    for (std::size_t i = 0; i < methods.size(); ++i) {
        if (i) out += ',';
        out += method_name(methods[i]);
    }
    return out;
}

std::vector<double> resolve_lambdas(const std::vector<double>& flag, std::size_t num_layers) {
    if (flag.empty()) return std::vector<double>(num_layers, 1.0);
    if (flag.size() != num_layers) {
        throw UsageError("--lambda lists " + std::to_string(flag.size()) + " value(s) for " +
                         std::to_string(num_layers) + " layer(s)");
    }
    return flag;
}

struct GenerateSbmArgs {
    std::vector<std::size_t> blocks{125, 125, 125, 125};
    double p_in = 0.2;
    double ratio = 0.0;   // p_in / p_out; 0 = not set
    double p_out = -1.0;  // explicit; < 0 = not set
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

int cmd_generate_sbm(const GenerateSbmArgs& args) {
    if (args.ratio > 0.0 && args.p_out >= 0.0) {
        throw UsageError("pass either --ratio or --p-out, not both");
    }
    if (args.ratio <= 0.0 && args.p_out < 0.0) {
        throw UsageError("one of --ratio or --p-out is required");
    }
    SbmSpec spec;
    spec.block_sizes = args.blocks;
    spec.p_in = args.p_in;
    spec.p_out = args.p_out >= 0.0 ? args.p_out : args.p_in / args.ratio;
    spec.seed = args.seed;
    const SbmInstance instance = generate_sbm(spec);

    const std::vector<std::string> config = {
        "command=generate-sbm",
        "blocks=" + join_sizes(args.blocks),
        "p_in=" + format_double(spec.p_in),
        "p_out=" + format_double(spec.p_out),
        "seed=" + std::to_string(spec.seed),
    };

    namespace fs = std::filesystem;
    fs::create_directories(args.out_dir);
    const std::string layer_path = (fs::path(args.out_dir) / "layer_0.hyp").string();
    const std::string manifest_path = (fs::path(args.out_dir) / "manifest.txt").string();
    const std::string truth_path = (fs::path(args.out_dir) / "ground_truth.csv").string();

    write_file(layer_path, [&](std::ostream& out) {
        write_layer_file(out, instance.graph.layers[0], instance.graph.n, config);
    });
    write_file(manifest_path, [&](std::ostream& out) {
        for (const std::string& entry : config) out << "# " << entry << "\n";
        out << "layer_0.hyp 1\n";
    });
    write_file(truth_path, [&](std::ostream& out) {
        write_labels_csv(out, instance.ground_truth, config);
    });
    std::cout << "wrote " << layer_path << " (" << instance.graph.layers[0].hyperedges.size()
              << " edges), " << manifest_path << ", " << truth_path << "\n";
    return 0;
}

struct SolveArgs {
    std::string manifest;
    std::string labels;
    std::string observed_file;
    double perc = -1.0;
    std::string method = "gcd";
    double p = 2.0;
    std::vector<double> lambdas;
    std::uint64_t seed = 0;
    double budget_multiplier = 4.0;
    std::uint64_t stride = 0;
    double grad_tol = 0.0;
    double stepsize = 0.0; // 0 = derived
    std::string out_prefix = "solve";
};

int cmd_solve(const SolveArgs& args) {
    if (args.observed_file.empty() == (args.perc < 0.0)) {
        throw UsageError("pass exactly one of --observed or --perc");
    }
    LoadedGraph loaded = load_graph(args.manifest);
    for (const std::string& warning : loaded.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    const std::size_t n = loaded.graph.n;
    const std::vector<int> ground_truth = read_labels_csv(args.labels, n);

    std::vector<std::size_t> observed;
    std::string observed_desc;
    if (!args.observed_file.empty()) {
        observed = read_observed_csv(args.observed_file);
        observed_desc = "observed=" + args.observed_file;
    } else {
        observed = sample_observed(ground_truth, args.perc, mix_seed(args.seed, 0x0B5E12));
        observed_desc =
            "perc=" + format_double(args.perc) + " observed_seed=" + std::to_string(args.seed);
    }

    int max_class = -1;
    for (const int c : ground_truth) max_class = std::max(max_class, c);
    if (max_class < 0) throw InvalidParameterError("ground truth contains no labeled node");
    const auto m = static_cast<std::size_t>(max_class) + 1;

    const std::vector<double> lambdas = resolve_lambdas(args.lambdas, loaded.graph.num_layers());
    LabelData labels = build_label_matrix(ground_truth, observed, m, n);
    const Problem problem =
        make_problem(std::move(loaded.graph), std::move(labels), args.p, lambdas);

    const auto budget = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(args.budget_multiplier * static_cast<double>(n)));
    SolveOptions opts;
    opts.checkpoint_stride = args.stride;
    opts.grad_tol = args.grad_tol;
    if (args.stepsize > 0.0) opts.stepsize = args.stepsize;

    const Method method = parse_method(args.method);
    SolverTrace trace;
    switch (method) {
        case Method::gd: trace = run_gd(problem, budget, opts); break;
        case Method::ccd: trace = run_ccd(problem, budget, args.seed, opts); break;
        case Method::rcd: trace = run_rcd(problem, budget, args.seed, opts); break;
        case Method::gcd: trace = run_gcd(problem, budget, opts); break;
    }
    trace.seed = args.seed;
    trace.instance = args.manifest + "|" + args.labels + "|" + observed_desc;

    const std::vector<std::string> config = {
        "command=solve",
        "manifest=" + args.manifest,
        "labels=" + args.labels,
        observed_desc,
        "method=" + std::string(method_name(method)),
        "p=" + format_double(args.p),
        "lambda=" + join_doubles(lambdas),
        "seed=" + std::to_string(args.seed),
        "budget=" + std::to_string(budget),
        "instance=" + trace.instance,
    };
    write_file(args.out_prefix + "_trace.csv",
               [&](std::ostream& out) { write_trace_csv(out, trace, config); });
    write_file(args.out_prefix + "_assignment.csv", [&](std::ostream& out) {
        write_assignment_csv(out, trace.final_assignment, config);
    });

    const Checkpoint& last = trace.checkpoints.back();
    std::cout << "method=" << method_name(method) << " n=" << n << " m=" << m
              << " flops=" << last.flops << " objective=" << format_double(last.objective)
              << " grad_inf=" << format_double(trace.final_grad_inf)
              << " accuracy=" << format_double(last.accuracy) << "\n";
    return 0;
}

struct BenchArgs {
    std::vector<std::size_t> blocks{125, 125, 125, 125};
    double p_in = 0.2;
    std::vector<double> ratios{2.0, 2.5, 3.0, 3.5};
    std::vector<double> percs{3.0, 6.0, 9.0, 12.0};
    std::size_t seeds = 5;
    std::uint64_t base_seed = 1;
    std::vector<std::string> methods{"ccd", "rcd", "gcd", "gd"};
    double p = 2.0;
    double lambda = 1.0;
    double budget_multiplier = 4.0;
    std::vector<double> gates{0.75, 0.5, 0.25, 0.1, 0.05};
    std::uint64_t stride = 0;
    double stepsize = 0.0;
    unsigned jobs = 1;
    std::string accuracy_mode = "relative";
    bool write_traces = false;
    bool write_curve_file = false;
    std::string out_dir = "bench_out";
};

int cmd_bench(const BenchArgs& args) {
    SweepConfig config;
    config.block_sizes = args.blocks;
    config.p_in = args.p_in;
    config.ratios = args.ratios;
    config.percs = args.percs;
    config.reps = args.seeds;
    config.base_seed = args.base_seed;
    config.p = args.p;
    config.lambda = args.lambda;
    config.methods = parse_methods(args.methods);
    config.budget_multiplier = args.budget_multiplier;
    config.checkpoint_stride = args.stride;
    if (args.stepsize > 0.0) config.stepsize = args.stepsize;
    config.jobs = args.jobs;
    const AccuracyGateMode mode = args.accuracy_mode == "absolute" ? AccuracyGateMode::absolute
                                                                   : AccuracyGateMode::relative;

    const std::vector<InstanceTraces> instances = run_sbm_sweep(config);

    const std::vector<std::string> header = {
        "command=bench",
        "blocks=" + join_sizes(args.blocks),
        "p_in=" + format_double(args.p_in),
        "ratios=" + join_doubles(args.ratios),
        "percs=" + join_doubles(args.percs),
        "seeds=" + std::to_string(args.seeds),
        "base_seed=" + std::to_string(args.base_seed),
        "methods=" + method_list(config.methods),
        "p=" + format_double(args.p),
        "lambda=" + format_double(args.lambda),
        "budget_multiplier=" + format_double(args.budget_multiplier),
        "gates=" + join_doubles(args.gates),
        "accuracy_gate_mode=" + args.accuracy_mode,
    };

    namespace fs = std::filesystem;
    fs::create_directories(args.out_dir);
    const GateReport objective_report =
        gate_stats(instances, args.gates, GateMetric::objective, mode, config.methods);
    const GateReport accuracy_report =
        gate_stats(instances, args.gates, GateMetric::accuracy, mode, config.methods);
    const std::string objective_path = (fs::path(args.out_dir) / "objective_gates.csv").string();
    const std::string accuracy_path = (fs::path(args.out_dir) / "accuracy_gates.csv").string();
    write_file(objective_path,
               [&](std::ostream& out) { write_gate_table_csv(out, objective_report, header); });
    write_file(accuracy_path,
               [&](std::ostream& out) { write_gate_table_csv(out, accuracy_report, header); });

    if (args.write_curve_file) {
        const std::string curves_path = (fs::path(args.out_dir) / "curves.dat").string();
        write_file(curves_path,
                   [&](std::ostream& out) { write_curves(out, instances, header); });
    }
    if (args.write_traces) {
        const fs::path trace_dir = fs::path(args.out_dir) / "traces";
        fs::create_directories(trace_dir);
        for (const InstanceTraces& group : instances) {
            for (const SolverTrace& trace : group.traces) {
                auto config_lines = header;
                config_lines.push_back("instance=" + group.instance);
                const std::string path =
                    (trace_dir / (group.instance + "_" + method_name(trace.method) + ".csv"))
                        .string();
                write_file(path, [&](std::ostream& out) {
                    write_trace_csv(out, trace, config_lines);
                });
            }
        }
    }
    std::cout << "ran " << instances.size() << " instances x " << config.methods.size()
              << " methods; tables in " << args.out_dir << "\n";
    return 0;
}

struct AggregateArgs {
    std::vector<std::string> traces;
    std::vector<double> gates{0.75, 0.5, 0.25, 0.1, 0.05};
    std::string accuracy_mode = "relative";
    std::string out_dir = ".";
};

int cmd_aggregate(const AggregateArgs& args) {
    std::vector<InstanceTraces> instances;
    for (const std::string& path : args.traces) {
        const TraceFileData data = read_trace_csv(path);
        SolverTrace trace;
        trace.method = data.method;
        trace.p = data.p;
        trace.seed = data.seed;
        trace.checkpoints = data.checkpoints;
        trace.instance = data.instance;
        auto group = std::find_if(instances.begin(), instances.end(), [&](const InstanceTraces& g) {
            return g.instance == data.instance;
        });
        if (group == instances.end()) {
            instances.push_back({data.instance, {}});
            group = instances.end() - 1;
        }
        group->traces.push_back(std::move(trace));
    }

    const AccuracyGateMode mode = args.accuracy_mode == "absolute" ? AccuracyGateMode::absolute
                                                                   : AccuracyGateMode::relative;
    std::vector<std::string> header = {"command=aggregate",
                                       "gates=" + join_doubles(args.gates),
                                       "accuracy_gate_mode=" + args.accuracy_mode,
                                       "traces=" + std::to_string(args.traces.size())};
    namespace fs = std::filesystem;
    fs::create_directories(args.out_dir);
    const GateReport objective_report =
        gate_stats(instances, args.gates, GateMetric::objective, mode);
    const GateReport accuracy_report =
        gate_stats(instances, args.gates, GateMetric::accuracy, mode);
    const std::string objective_path = (fs::path(args.out_dir) / "objective_gates.csv").string();
    const std::string accuracy_path = (fs::path(args.out_dir) / "accuracy_gates.csv").string();
    write_file(objective_path,
               [&](std::ostream& out) { write_gate_table_csv(out, objective_report, header); });
    write_file(accuracy_path,
               [&](std::ostream& out) { write_gate_table_csv(out, accuracy_report, header); });
    std::cout << "aggregated " << args.traces.size() << " traces over " << instances.size()
              << " instance(s); tables in " << args.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-Laplacian label inference on multilayer hypergraphs"};
    app.require_subcommand(1);

    GenerateSbmArgs gen;
    CLI::App* gen_cmd =
        app.add_subcommand("generate-sbm", "Write a planted-partition benchmark instance");
    gen_cmd->add_option("--blocks", gen.blocks, "Comma-separated block sizes")
        ->delimiter(',')
        ->capture_default_str();
    gen_cmd->add_option("--p-in", gen.p_in, "Intra-block edge probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    gen_cmd->add_option("--ratio", gen.ratio, "p_in / p_out ratio (alternative to --p-out)")
        ->check(CLI::PositiveNumber);
    gen_cmd->add_option("--p-out", gen.p_out, "Inter-block edge probability")
        ->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--seed", gen.seed, "Generator seed (required for reproducibility)")
        ->required();
    gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->capture_default_str();

    SolveArgs solve;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Run one method on one instance");
    solve_cmd->add_option("--manifest", solve.manifest, "Multilayer manifest file")->required();
    solve_cmd->add_option("--labels", solve.labels, "Ground-truth CSV")->required();
    solve_cmd->add_option("--observed", solve.observed_file, "Observed node-id CSV");
    solve_cmd->add_option("--perc", solve.perc, "Observed percentage per class")
        ->check(CLI::Range(0.0, 100.0));
    solve_cmd->add_option("--method", solve.method, "gd | ccd | rcd | gcd")
        ->check(CLI::IsMember({"gd", "ccd", "rcd", "gcd"}))
        ->capture_default_str();
    solve_cmd->add_option("--p", solve.p, "Regularizer exponent (p >= 1)")
        ->check(CLI::Range(1.0, 1e9))
        ->capture_default_str();
    solve_cmd->add_option("--lambda", solve.lambdas, "Per-layer weights (default all 1)")
        ->delimiter(',');
    solve_cmd->add_option("--seed", solve.seed, "Seed for sampling and ccd/rcd")
        ->capture_default_str();
    solve_cmd->add_option("--budget-multiplier", solve.budget_multiplier, "Budget in units of n")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    solve_cmd->add_option("--stride", solve.stride, "Checkpoint stride in flops (0 = auto)");
    solve_cmd->add_option("--grad-tol", solve.grad_tol,
                          "Stop when the gradient max-norm drops below this (0 = budget only)");
    solve_cmd->add_option("--stepsize", solve.stepsize, "Override the derived stepsize")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--out-prefix", solve.out_prefix, "Output file prefix")
        ->capture_default_str();

    BenchArgs bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run the synthetic block-model sweep");
    bench_cmd->add_option("--blocks", bench.blocks, "Block sizes")->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--p-in", bench.p_in, "Intra-block edge probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    bench_cmd->add_option("--ratios", bench.ratios, "p_in/p_out ratios")->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--perc", bench.percs, "Observed percentages")->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--seeds", bench.seeds, "Instances per (ratio, perc) cell")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--base-seed", bench.base_seed, "Base seed for the sweep")
        ->capture_default_str();
    bench_cmd->add_option("--methods", bench.methods, "Methods to run")->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--p", bench.p, "Regularizer exponent")
        ->check(CLI::Range(1.0, 1e9))
        ->capture_default_str();
    bench_cmd->add_option("--lambda", bench.lambda, "Layer weight")->capture_default_str();
    bench_cmd->add_option("--budget-multiplier", bench.budget_multiplier, "Budget in units of n")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--gates", bench.gates, "Gate tolerances")->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--stride", bench.stride, "Checkpoint stride in flops (0 = auto)");
    bench_cmd->add_option("--stepsize", bench.stepsize, "Override the derived stepsize")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--jobs", bench.jobs, "Worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd
        ->add_option("--accuracy-gate-mode", bench.accuracy_mode, "relative | absolute")
        ->check(CLI::IsMember({"relative", "absolute"}))
        ->capture_default_str();
    bench_cmd->add_flag("--traces", bench.write_traces, "Also write per-run trace CSVs");
    bench_cmd->add_flag("--curves", bench.write_curve_file,
                        "Also write a gnuplot curves data file");
    bench_cmd->add_option("--out-dir", bench.out_dir, "Output directory")->capture_default_str();

    AggregateArgs agg;
    CLI::App* agg_cmd = app.add_subcommand("aggregate", "Build gate tables from trace CSVs");
    agg_cmd->add_option("traces", agg.traces, "Trace CSV files")->required()->expected(-1);
    agg_cmd->add_option("--gates", agg.gates, "Gate tolerances")->delimiter(',')
        ->capture_default_str();
    agg_cmd->add_option("--accuracy-gate-mode", agg.accuracy_mode, "relative | absolute")
        ->check(CLI::IsMember({"relative", "absolute"}))
        ->capture_default_str();
    agg_cmd->add_option("--out-dir", agg.out_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
        if (gen_cmd->parsed()) return cmd_generate_sbm(gen);
        if (solve_cmd->parsed()) return cmd_solve(solve);
        if (bench_cmd->parsed()) return cmd_bench(bench);
        if (agg_cmd->parsed()) return cmd_aggregate(agg);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
