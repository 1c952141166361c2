// Race the four solvers on a small planted-partition instance and print
// the objective-gate table (normalized flops to reach each tolerance).

#include <iostream>
#include <sstream>

#include "hyplap/hyplap.hpp"

int main() {
    using namespace hyplap;

    SweepConfig config;
    config.block_sizes = {50, 50, 50, 50};
    config.p_in = 0.2;
    config.ratios = {2.5};
    config.percs = {6.0};
    config.reps = 3;
    config.base_seed = 42;

    const std::vector<InstanceTraces> instances = run_sbm_sweep(config);
    const GateReport report =
        gate_stats(instances, default_gates(), GateMetric::objective);

    std::ostringstream table;
    write_gate_table_csv(table, report);
    std::cout << "objective gates, " << instances.size() << " instances of "
              << config.block_sizes.size() << "x" << config.block_sizes[0] << " nodes:\n"
              << table.str();
    return 0;
}
