// Infer the missing labels of a two-layer toy network: a friendship layer
// with plain edges and a "shared project" layer with two 3-node hyperedges.
// Nodes 0 and 5 are labeled (classes 0 and 1); everything else is inferred.

#include <iostream>

#include "hyplap/hyplap.hpp"

int main() {
    using namespace hyplap;

    MultilayerHypergraph graph;
    graph.n = 8;

    Layer friendships;
    for (const auto& [u, v] : {std::pair<std::size_t, std::size_t>{0, 1},
                               {1, 2},
                               {2, 3},
                               {4, 5},
                               {5, 6},
                               {6, 7},
                               {3, 4}}) {
        friendships.hyperedges.push_back({1.0, {u, v}});
    }
    Layer projects;
    projects.hyperedges.push_back({2.0, {0, 1, 2}});
    projects.hyperedges.push_back({2.0, {5, 6, 7}});
    graph.layers = {friendships, projects};

    std::vector<int> truth = {0, 0, 0, 0, 1, 1, 1, 1};
    LabelData labels = build_label_matrix(truth, /*observed=*/{0, 5}, /*m=*/2, graph.n);
    Problem problem = make_problem(std::move(graph), std::move(labels), /*p=*/2.0,
                                   /*lambdas=*/{1.0, 1.0});

    SolveOptions opts;
    opts.grad_tol = 1e-10;
    SolverTrace trace = run_gcd(problem, /*budget_flops=*/10000, opts);

    std::cout << "converged after " << trace.checkpoints.back().flops
              << " coordinate flops, objective " << format_double(trace.final_objective) << "\n";
    for (std::size_t u = 0; u < trace.final_assignment.size(); ++u) {
        std::cout << "node " << u << " -> class " << trace.final_assignment[u]
                  << "  (scores";
        for (std::size_t j = 0; j < trace.final_scores.cols(); ++j) {
            std::cout << ' ' << format_double(trace.final_scores(u, j));
        }
        std::cout << ")\n";
    }
    std::cout << "accuracy on unlabeled nodes: "
              << format_double(accuracy(trace.final_assignment, truth, {0, 5})) << "\n";
    return 0;
}
