#include <catch_amalgamated.hpp>

#include "catalog.hpp"
#include "worm/graph.hpp"

using namespace worm;

TEST_CASE("parse_graph basics") {
    auto g = parse_graph("2\n1 2");
    CHECK(g.n == 2);
    CHECK(g.m() == 1);
    CHECK(g.edges[0] == std::make_pair(0, 1));

    auto k3 = parse_graph("3\n1 2\n2 3\n1 3");
    CHECK(k3.m() == 3);
    CHECK(k3.max_degree == 2);
}

TEST_CASE("parse_graph comments and whitespace") {
    auto g = parse_graph("# a triangle\n3\n\n1 2  # first edge\n  2 3\n1 3\n");
    CHECK(g.n == 3);
    CHECK(g.m() == 3);
}

TEST_CASE("parse_graph rejections") {
    CHECK_THROWS_AS(parse_graph("3\n1 2\n1 2"), DuplicateEdge);
    CHECK_THROWS_AS(parse_graph("3\n2 1\n1 2\n1 3\n2 3"), DuplicateEdge);
    CHECK_THROWS_AS(parse_graph("2\n1 1"), SelfLoop);
    CHECK_THROWS_AS(parse_graph("2\n1 3"), BadLabel);
    CHECK_THROWS_AS(parse_graph("2\n"), EmptyEdgeSet);
    CHECK_THROWS_AS(parse_graph("4\n1 2\n3 4"), DisconnectedGraph);
    CHECK_THROWS_AS(parse_graph(""), ParseError);
}

TEST_CASE("generators") {
    auto c4 = generate("cycle", {4});
    CHECK(c4.n == 4);
    CHECK(c4.m() == 4);
    CHECK(c4.max_degree == 2);

    auto k4 = generate("complete", {4});
    CHECK(k4.n == 4);
    CHECK(k4.m() == 6);
    CHECK(k4.max_degree == 3);

    auto g22 = generate("grid", {2, 2});
    CHECK(g22.n == 4);
    CHECK(g22.m() == 4);
    CHECK(g22.max_degree == 2);  // isomorphic to cycle(4)

    CHECK_THROWS_AS(generate("cycle", {2}), BadDimension);
    CHECK_THROWS_AS(generate("torus", {3}), BadDimension);
}

TEST_CASE("graph_distance") {
    auto c4 = generate("cycle", {4});
    CHECK(graph_distance(c4, 0, 2) == 2);
    CHECK(graph_distance(c4, 1, 1) == 0);
    CHECK_THROWS_AS(graph_distance(c4, 0, 7), BadLabel);

    auto g33 = generate("grid", {3, 3});
    CHECK(graph_distance(g33, 0, 8) == 4);  // corner to opposite corner
}

TEST_CASE("distance is a metric on small graphs") {
    for (int n = 2; n <= 5; ++n)
        for (const auto& g : worm::testing::connected_catalog(n))
            for (int u = 0; u < g.n; ++u)
                for (int v = 0; v < g.n; ++v) {
                    int duv = graph_distance(g, u, v);
                    CHECK(duv == graph_distance(g, v, u));
                    CHECK((duv == 0) == (u == v));
                    for (int w = 0; w < g.n; ++w)
                        CHECK(duv <= graph_distance(g, u, w) + graph_distance(g, w, v));
                }
}

TEST_CASE("edge order deterministic") {
    std::string doc = "4\n2 3\n1 2\n3 4\n1 4";
    auto a = parse_graph(doc);
    auto b = parse_graph(doc);
    REQUIRE(a.edges == b.edges);
    for (size_t i = 1; i < a.edges.size(); ++i) CHECK(a.edges[i - 1] < a.edges[i]);
    CHECK(graph_hash(a) == graph_hash(b));
}

TEST_CASE("degree sums") {
    for (const auto& g : worm::testing::standard_set()) {
        int sum = 0;
        for (int v = 0; v < g.n; ++v) sum += g.degree[v];
        CHECK(sum == 2 * g.m());
        CHECK(g.max_degree == *std::max_element(g.degree.begin(), g.degree.end()));
    }
}
