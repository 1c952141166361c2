#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "test_support.hpp"

using namespace hyplap;

TEST_CASE("sbm with zero probabilities is empty") {
    const SbmInstance inst = generate_sbm({{3, 3}, 0.0, 0.0, 1});
    CHECK(inst.graph.n == 6);
    REQUIRE(inst.graph.layers.size() == 1);
    CHECK(inst.graph.layers[0].hyperedges.empty());
    CHECK(inst.ground_truth == std::vector<int>{0, 0, 0, 1, 1, 1});
}

TEST_CASE("sbm with p_in = 1, p_out = 0 yields two cliques") {
    const SbmInstance inst = generate_sbm({{3, 3}, 1.0, 0.0, 1});
    const Layer& layer = inst.graph.layers[0];
    REQUIRE(layer.hyperedges.size() == 6); // C(3,2) per block
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const Hyperedge& edge : layer.hyperedges) {
        REQUIRE(edge.nodes.size() == 2);
        CHECK(edge.weight == 1.0);
        CHECK(edge.nodes[0] < edge.nodes[1]);
        CHECK(inst.ground_truth[edge.nodes[0]] == inst.ground_truth[edge.nodes[1]]);
        pairs.insert({edge.nodes[0], edge.nodes[1]});
    }
    CHECK(pairs.size() == 6); // each unordered pair sampled once
}

TEST_CASE("sbm edges are simple and in range") {
    const SbmInstance inst = generate_sbm({{10, 5, 5}, 0.6, 0.2, 9});
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const Hyperedge& edge : inst.graph.layers[0].hyperedges) {
        REQUIRE(edge.nodes.size() == 2);
        CHECK(edge.nodes[0] < edge.nodes[1]); // no self-loops, canonical order
        CHECK(edge.nodes[1] < 20);
        CHECK(pairs.insert({edge.nodes[0], edge.nodes[1]}).second);
    }
}

TEST_CASE("sbm is deterministic in the seed") {
    const SbmSpec spec{{8, 8}, 0.5, 0.1, 42};
    const SbmInstance a = generate_sbm(spec);
    const SbmInstance b = generate_sbm(spec);
    REQUIRE(a.graph.layers[0].hyperedges.size() == b.graph.layers[0].hyperedges.size());
    for (std::size_t e = 0; e < a.graph.layers[0].hyperedges.size(); ++e) {
        CHECK(a.graph.layers[0].hyperedges[e].nodes == b.graph.layers[0].hyperedges[e].nodes);
    }
    const SbmInstance c = generate_sbm({{8, 8}, 0.5, 0.1, 43});
    bool different = a.graph.layers[0].hyperedges.size() != c.graph.layers[0].hyperedges.size();
    for (std::size_t e = 0; !different && e < a.graph.layers[0].hyperedges.size(); ++e) {
        different = a.graph.layers[0].hyperedges[e].nodes != c.graph.layers[0].hyperedges[e].nodes;
    }
    CHECK(different);
}

TEST_CASE("sbm edge counts track the block probabilities") {
    const SbmInstance inst = generate_sbm({{40, 40}, 0.5, 0.1, 7});
    std::size_t intra = 0;
    std::size_t inter = 0;
    for (const Hyperedge& edge : inst.graph.layers[0].hyperedges) {
        if (inst.ground_truth[edge.nodes[0]] == inst.ground_truth[edge.nodes[1]]) {
            ++intra;
        } else {
            ++inter;
        }
    }
    // intra: 2 * C(40,2) * 0.5 = 780, sigma = sqrt(1560 * 0.25) ~ 19.7
    CHECK(std::abs(static_cast<double>(intra) - 780.0) <= 3.0 * 19.75);
    // inter: 1600 * 0.1 = 160, sigma = sqrt(1600 * 0.09) = 12
    CHECK(std::abs(static_cast<double>(inter) - 160.0) <= 3.0 * 12.0);
}

TEST_CASE("sbm parameter validation") {
    CHECK_THROWS_AS(generate_sbm({{}, 0.5, 0.1, 1}), InvalidParameterError);
    CHECK_THROWS_AS(generate_sbm({{5, 0}, 0.5, 0.1, 1}), InvalidParameterError);
    CHECK_THROWS_AS(generate_sbm({{5, 5}, 1.5, 0.1, 1}), InvalidParameterError);
    CHECK_THROWS_AS(generate_sbm({{5, 5}, 0.5, -0.1, 1}), InvalidParameterError);
}

TEST_CASE("sample_observed takes floor(perc * size / 100) per class") {
    const std::vector<int> truth(125, 0);
    CHECK(sample_observed(truth, 3.0, 1).size() == 3);
    CHECK(sample_observed(truth, 6.0, 1).size() == 7);
    CHECK(sample_observed(truth, 9.0, 1).size() == 11);
    CHECK(sample_observed(truth, 12.0, 1).size() == 15);
    CHECK(sample_observed(truth, 100.0, 1).size() == 125);
}

TEST_CASE("sample_observed draws per class without replacement") {
    std::vector<int> truth;
    for (int c = 0; c < 3; ++c) truth.insert(truth.end(), 50, c);
    const std::vector<std::size_t> observed = sample_observed(truth, 10.0, 5);
    REQUIRE(observed.size() == 15); // 5 per class

    CHECK(std::is_sorted(observed.begin(), observed.end()));
    std::vector<std::size_t> counts(3, 0);
    std::set<std::size_t> unique;
    for (const std::size_t u : observed) {
        REQUIRE(u < truth.size());
        ++counts[truth[u]];
        unique.insert(u);
    }
    CHECK(unique.size() == observed.size());
    CHECK(counts == std::vector<std::size_t>{5, 5, 5});

    CHECK(sample_observed(truth, 10.0, 5) == observed);
    CHECK(sample_observed(truth, 10.0, 6) != observed);
}

TEST_CASE("sample_observed skips unknown labels") {
    std::vector<int> truth(20, 0);
    truth[3] = kUnknownClass;
    truth[4] = kUnknownClass;
    const std::vector<std::size_t> observed = sample_observed(truth, 50.0, 2);
    CHECK(observed.size() == 9); // floor(18 * 0.5)
    for (const std::size_t u : observed) CHECK(truth[u] == 0);
}

TEST_CASE("sample_observed rejects empty draws and bad percentages") {
    const std::vector<int> tiny{0, 0, 0, 1}; // class 1 has one member
    CHECK_THROWS_AS(sample_observed(tiny, 3.0, 1), EmptyClassSampleError);
    CHECK_THROWS_AS(sample_observed(tiny, -1.0, 1), InvalidParameterError);
    CHECK_THROWS_AS(sample_observed(tiny, 101.0, 1), InvalidParameterError);
    CHECK_THROWS_AS(sample_observed(std::vector<int>(4, kUnknownClass), 50.0, 1),
                    InvalidParameterError);
}

TEST_CASE("sbm instances route into the solver stack") {
    const SbmInstance inst = generate_sbm({{20, 20}, 0.4, 0.05, 11});
    const std::vector<std::size_t> observed = sample_observed(inst.ground_truth, 10.0, 12);
    LabelData labels = build_label_matrix(inst.ground_truth, observed, 2, inst.graph.n);
    MultilayerHypergraph graph = inst.graph;
    const Problem problem = make_problem(std::move(graph), std::move(labels), 2.0, {1.0});

    SolveOptions opts;
    opts.grad_tol = 1e-8;
    const SolverTrace trace = run_gcd(problem, 160 * 40, opts);
    CHECK_FALSE(trace.failed_tolerance);
    // assortative blocks with 10% supervision should beat coin flipping
    CHECK(accuracy(trace.final_assignment, inst.ground_truth, observed) > 0.7);
}
