#include <gtest/gtest.h>

#include "covercomm/error.hpp"
#include "covercomm/graph.hpp"
#include "fixtures.hpp"

#include <random>

using namespace covercomm;

TEST(GraphBuild, SingleVertexNoEdges)
{
    Graph g = Graph::Builder("pt").add_vertex("o").build();
    EXPECT_EQ(g.num_vertices(), 1u);
    EXPECT_EQ(g.num_darts(), 0u);
    EXPECT_EQ(euler_characteristic(g), 1);
    EXPECT_EQ(free_rank(g), 0);
}

TEST(GraphBuild, RoseHasFourDarts)
{
    auto g = fixtures::rose({"a", "b"});
    EXPECT_EQ(g->num_darts(), 4u);
    EXPECT_EQ(g->degree(0), 4);
    EXPECT_EQ(euler_characteristic(*g), -1);
    auto d = *g->find_dart("a");
    EXPECT_EQ(g->label_text(d), "a");
    EXPECT_EQ(g->label_text(g->inv(d)), "A");
    EXPECT_EQ(g->label(g->inv(d)), -g->label(d));
}

TEST(GraphBuild, ThetaDegreesAndRank)
{
    auto g = fixtures::theta();
    EXPECT_EQ(g->num_darts(), 6u);
    EXPECT_EQ(g->degree(0), 3);
    EXPECT_EQ(g->degree(1), 3);
    EXPECT_EQ(free_rank(*g), 2);
}

TEST(GraphBuild, Errors)
{
    EXPECT_THROW(Graph::Builder().add_vertex("a").add_edge("e", "a", "b").build(), InputError);
    EXPECT_THROW(Graph::Builder().add_vertex("a").add_vertex("a").build(), InputError);
    EXPECT_THROW(Graph::Builder().add_vertex("a").add_edge("e", "a", "a").add_edge("e", "a", "a").build(), InputError);
    EXPECT_THROW(Graph::Builder().alphabet({"a"}).add_vertex("o").add_edge("e", "o", "o", "b").build(), InputError);
    EXPECT_THROW(Graph::Builder().add_vertex("o").add_edge("e", "o", "o", "a").add_edge("f", "o", "o").build(),
                 InputError);
}

TEST(GraphBuild, ExplicitAlphabetWithoutEdgesIsLabeled)
{
    Graph g = Graph::Builder().alphabet({"a", "b"}).add_vertex("o").build();
    EXPECT_TRUE(g.labeled());
    EXPECT_EQ(g.alphabet().size(), 2u);
}

TEST(GraphBuild, IdentifiersAreSorted)
{
    Graph g = Graph::Builder().add_vertex("z").add_vertex("b").add_vertex("m").build();
    EXPECT_EQ(g.vertex_name(0), "b");
    EXPECT_EQ(g.vertex_name(2), "z");
    EXPECT_EQ(numbered_id("v", 3, 12), "v03");
    EXPECT_LT(numbered_id("v", 9, 12), numbered_id("v", 10, 12));
}

TEST(GraphCounts, TwentyVerticesHundredEdges)
{
    auto g = fixtures::twenty_hundred();
    EXPECT_EQ(euler_characteristic(*g), -80);
    EXPECT_EQ(free_rank(*g), 81);
    EXPECT_EQ(average_degree_after_folds(*g, 0), Rational(10));
    EXPECT_EQ(average_degree_after_folds(*g, 19), Rational(162));
    for (long f = 0; f < 18; ++f)
        EXPECT_LT(average_degree_after_folds(20, 100, f), average_degree_after_folds(20, 100, f + 1));
    EXPECT_THROW(average_degree_after_folds(20, 100, 20), PreconditionError);
    EXPECT_THROW(average_degree_after_folds(20, 100, -1), PreconditionError);
}

TEST(GraphCounts, AverageAtZeroIsMeanDegree)
{
    for (auto g : {fixtures::k4(), fixtures::k33(), fixtures::theta(), fixtures::path3()}) {
        Rational mean(2 * static_cast<long>(g->num_edges()), static_cast<long>(g->num_vertices()));
        mean.canonicalize();
        EXPECT_EQ(average_degree_after_folds(*g, 0), mean);
    }
}

TEST(GraphCounts, FreeRankOfDisconnectedThrows)
{
    Graph g = Graph::Builder().add_vertex("a").add_vertex("b").build();
    EXPECT_THROW(free_rank(g), PreconditionError);
    EXPECT_EQ(connected_components(g).size(), 2u);
}

TEST(GraphCounts, TreesHaveRankZero)
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 12);
        Graph::Builder b;
        for (int i = 0; i < n; ++i)
            b.add_vertex("v" + std::to_string(i));
        for (int i = 1; i < n; ++i)
            b.add_edge("e" + std::to_string(i), "v" + std::to_string(rng() % i), "v" + std::to_string(i));
        Graph g = b.build();
        EXPECT_EQ(free_rank(g), 0);
    }
}

TEST(GraphProperties, DegreeSumAndAdditivity)
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 9);
        const int m = static_cast<int>(rng() % 15);
        Graph::Builder b;
        for (int i = 0; i < n; ++i)
            b.add_vertex("v" + std::to_string(i));
        for (int i = 0; i < m; ++i)
            b.add_edge("e" + std::to_string(i), "v" + std::to_string(rng() % n), "v" + std::to_string(rng() % n));
        Graph g = b.build();
        long sum = 0;
        for (int v = 0; v < n; ++v)
            sum += g.degree(v);
        EXPECT_EQ(sum, static_cast<long>(g.num_darts()));
        EXPECT_EQ(sum, 2L * static_cast<long>(g.num_edges()));
        for (int d = 0; d < static_cast<int>(g.num_darts()); ++d) {
            EXPECT_EQ(g.inv(g.inv(d)), d);
            EXPECT_NE(g.inv(d), d);
        }
        long chi = 0;
        for (const auto& comp : connected_components(g)) {
            std::vector<int> edges;
            for (int e = 0; e < static_cast<int>(g.num_edges()); ++e)
                if (std::binary_search(comp.begin(), comp.end(), g.origin(g.edge_dart(e))))
                    edges.push_back(e);
            auto piece = subgraph(g, comp, edges, "piece");
            chi += euler_characteristic(*piece);
            EXPECT_GE(free_rank(*piece), 0);
            EXPECT_EQ(free_rank(*piece) == 0, piece->num_edges() + 1 == piece->num_vertices());
        }
        EXPECT_EQ(chi, euler_characteristic(g));
    }
}

TEST(Morphism, IdentityIsValid)
{
    for (auto g : {fixtures::k4(), fixtures::rose({"a", "b"}), fixtures::theta()})
        EXPECT_TRUE(validate_morphism(identity_morphism(g)).valid());
}

TEST(Morphism, BrokenInvolutionIsListed)
{
    auto g = fixtures::theta();
    GraphMorphism m = identity_morphism(g);
    // Send t0 to t1 but leave t0' on t0'.
    m.dmap[*g->find_dart("t0")] = *g->find_dart("t1");
    auto report = validate_morphism(m);
    ASSERT_FALSE(report.valid());
    bool named = false;
    for (const auto& v : report.violations)
        named = named || v.find("involution") != std::string::npos;
    EXPECT_TRUE(named);
}

TEST(Morphism, LabelMismatchIsListed)
{
    auto src = fixtures::rose({"a"});
    auto dst = fixtures::rose({"a", "b"});
    GraphMorphism m{"m", src, dst, {0}, {*dst->find_dart("b"), *dst->find_dart("b'")}};
    auto report = validate_morphism(m);
    EXPECT_FALSE(report.valid());
}

TEST(Morphism, UnmappedEntriesAreListed)
{
    auto g = fixtures::path3();
    GraphMorphism m = identity_morphism(g);
    m.vmap[1] = -1;
    EXPECT_FALSE(validate_morphism(m).valid());
}
