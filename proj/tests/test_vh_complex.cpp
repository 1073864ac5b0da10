#include "covercomm/error.hpp"
#include "covercomm/vh_complex.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace covercomm;

namespace {

GraphPtr one_vertex(const std::vector<std::string>& edges, bool labeled = false)
{
    return fixtures::rose(edges, "X", labeled);
}

SquareComplex relator_complex(const GraphPtr& g, const std::vector<std::string>& relators)
{
    std::vector<Square> squares;
    for (const auto& r : relators)
        for (const Square& s : relator_squares(*g, r))
            squares.push_back(s);
    return build_complex(g, squares);
}

std::vector<std::string> names(const Graph& g, const std::vector<int>& edges)
{
    std::vector<std::string> out;
    for (int e : edges)
        out.push_back(g.edge_name(e));
    return out;
}

// The witness must be a closed walk through real square relations with an
// odd number of adjacent steps.
void expect_odd_cycle(const SquareComplex& sc, const VHResult& r)
{
    const Graph& g = *sc.skeleton;
    ASSERT_FALSE(r.witness.empty());
    int adjacent = 0;
    for (std::size_t i = 0; i < r.witness.size(); ++i) {
        const VHLink& l = r.witness[i];
        const VHLink& next = r.witness[(i + 1) % r.witness.size()];
        EXPECT_EQ(l.to, next.from);
        const Square& s = sc.squares.at(l.square);
        bool found = false;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                if (a != b && g.edge_of(s[a]) == l.from && g.edge_of(s[b]) == l.to &&
                    ((a - b + 4) % 4 == 2) != l.adjacent)
                    found = true;
        EXPECT_TRUE(found);
        adjacent += l.adjacent;
    }
    EXPECT_EQ(adjacent % 2, 1);
}

// Random degree-d cover of the rank-k rose, as permutations; connected.
std::vector<std::vector<int>> random_cover(std::mt19937& rng, int k, int d)
{
    for (;;) {
        std::vector<std::vector<int>> perms(k, std::vector<int>(d));
        for (auto& p : perms) {
            std::iota(p.begin(), p.end(), 0);
            std::shuffle(p.begin(), p.end(), rng);
        }
        std::vector<int> seen{0};
        std::vector<char> mark(d, 0);
        mark[0] = 1;
        for (std::size_t i = 0; i < seen.size(); ++i)
            for (const auto& p : perms)
                for (int w : {p[seen[i]], static_cast<int>(std::find(p.begin(), p.end(), seen[i]) - p.begin())})
                    if (!mark[w]) {
                        mark[w] = 1;
                        seen.push_back(w);
                    }
        if (static_cast<int>(seen.size()) == d)
            return perms;
    }
}

} // namespace

TEST(BuildComplex, Relators)
{
    GraphPtr g = one_vertex({"a", "b"});
    EXPECT_EQ(relator_complex(g, {"abAB"}).squares.size(), 1u);
    EXPECT_EQ(relator_complex(g, {"abab"}).squares.size(), 1u);
    GraphPtr g3 = one_vertex({"a", "b", "c"});
    SquareComplex sc = relator_complex(g3, {"abcA"});
    ASSERT_EQ(sc.squares.size(), 1u);
    EXPECT_EQ(g3->dart_name(sc.squares[0][2]), "c");
    EXPECT_EQ(g3->dart_name(sc.squares[0][3]), "a'");
    EXPECT_THROW(relator_squares(*g, "abA"), InputError);
    EXPECT_THROW(relator_squares(*g, "abAz"), InputError);
}

TEST(BuildComplex, NonClosingSquareIsRejected)
{
    Graph::Builder b("two");
    b.add_vertex("p").add_vertex("q").add_edge("a", "p", "q").add_edge("b", "p", "p");
    GraphPtr g = b.build_shared();
    EXPECT_THROW(relator_squares(*g, "abAB"), InputError);
    EXPECT_THROW(build_complex(g, {Square{*g->find_dart("a"), *g->find_dart("b"), *g->find_dart("a'"),
                                          *g->find_dart("b'")}}),
                 InputError);
    EXPECT_THROW(square_from_darts(*g, {"a", "b", "x", "b"}), InputError);
}

TEST(BuildComplex, LabeledRelatorLiftsAtEveryVertex)
{
    // Degree-2 cover of the two-petal rose: a swaps the vertices, b fixes them.
    Graph::Builder b("cover");
    b.add_vertex("p").add_vertex("q");
    b.add_edge("a1", "p", "q", "a").add_edge("a2", "q", "p", "a");
    b.add_edge("b1", "p", "p", "b").add_edge("b2", "q", "q", "b");
    GraphPtr g = b.build_shared();
    std::vector<Square> squares = relator_squares(*g, "abAB");
    ASSERT_EQ(squares.size(), 2u);
    EXPECT_NO_THROW(build_complex(g, squares));
    // abab is a proper power: its two lifts from p and q give the same square.
    EXPECT_EQ(relator_squares(*g, "abab").size(), 1u);
}

TEST(VHPartition, Torus)
{
    GraphPtr g = one_vertex({"a", "b"});
    SquareComplex sc = relator_complex(g, {"abAB"});
    VHResult r = vh_partition(sc);
    ASSERT_TRUE(r.partition);
    EXPECT_EQ(names(*g, r.partition->vertical_edges()), (std::vector<std::string>{"a"}));
    EXPECT_EQ(names(*g, r.partition->horizontal_edges()), (std::vector<std::string>{"b"}));
    VHResult flipped = vh_partition(sc, false);
    EXPECT_EQ(names(*g, flipped.partition->vertical_edges()), (std::vector<std::string>{"b"}));
}

TEST(VHPartition, AabbIsNotVH)
{
    GraphPtr g = one_vertex({"a", "b"});
    SquareComplex sc = relator_complex(g, {"aabb"});
    VHResult r = vh_partition(sc);
    EXPECT_FALSE(r.partition);
    expect_odd_cycle(sc, r);
    EXPECT_NE(r.describe(sc).find("not VH"), std::string::npos);
}

TEST(VHPartition, SharedHorizontal)
{
    GraphPtr g = one_vertex({"a", "b", "c"});
    SquareComplex sc = relator_complex(g, {"abAB", "cbCB"});
    VHResult r = vh_partition(sc);
    ASSERT_TRUE(r.partition);
    EXPECT_EQ(names(*g, r.partition->vertical_edges()), (std::vector<std::string>{"a", "c"}));
    EXPECT_EQ(names(*g, r.partition->horizontal_edges()), (std::vector<std::string>{"b"}));
}

TEST(VHPartition, LongerOddCycle)
{
    // abAB and bcBC force a, c vertical against b; acAC makes them adjacent.
    GraphPtr g = one_vertex({"a", "b", "c"});
    SquareComplex sc = relator_complex(g, {"abAB", "bcBC", "acAC"});
    VHResult r = vh_partition(sc);
    EXPECT_FALSE(r.partition);
    expect_odd_cycle(sc, r);
}

TEST(VHPartition, InvariantUnderRelabelingSquares)
{
    auto [p1, p2] = fixtures::twenty_hundred_legs();
    SquareComplex sc = cylinder_complex(p1, p2);
    const VHResult base = vh_partition(sc);
    ASSERT_TRUE(base.partition);
    const Graph& g = *sc.skeleton;
    std::mt19937 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        SquareComplex mixed = sc;
        std::shuffle(mixed.squares.begin(), mixed.squares.end(), rng);
        for (Square& s : mixed.squares) {
            std::rotate(s.begin(), s.begin() + rng() % 4, s.end());
            if (rng() % 2)
                s = {g.inv(s[3]), g.inv(s[2]), g.inv(s[1]), g.inv(s[0])};
        }
        VHResult r = vh_partition(build_complex(sc.skeleton, mixed.squares));
        ASSERT_TRUE(r.partition);
        EXPECT_EQ(r.partition->vertical, base.partition->vertical);
    }
}

TEST(HorizontalSubgraph, Components)
{
    GraphPtr g = one_vertex({"a", "b"});
    SquareComplex torus = relator_complex(g, {"abAB"});
    HorizontalGraph h = horizontal_subgraph(torus, *vh_partition(torus).partition);
    ASSERT_EQ(h.components.size(), 1u);
    EXPECT_EQ(h.component_graphs[0]->num_edges(), 1u);
    EXPECT_EQ(h.component_graphs[0]->edge_name(0), "b");

    GraphPtr loop = one_vertex({"b"});
    GraphMorphism id = identity_morphism(loop);
    SquareComplex layers = cylinder_complex(id, id);
    HorizontalGraph h2 = horizontal_subgraph(layers, *vh_partition(layers).partition);
    ASSERT_EQ(h2.components.size(), 2u);
    EXPECT_EQ(h2.component_graphs[0]->vertex_name(0), "t:o");
    EXPECT_EQ(h2.component_graphs[1]->vertex_name(0), "u:o");

    Graph::Builder b("bare");
    b.add_vertex("o").add_edge("a", "o", "o");
    SquareComplex bare = build_complex(b.build_shared(), {});
    HorizontalGraph h3 = horizontal_subgraph(bare, *vh_partition(bare).partition);
    EXPECT_EQ(h3.graph->num_vertices(), 0u);
    EXPECT_TRUE(h3.components.empty());
}

TEST(CrossSection, Torus)
{
    GraphPtr g = one_vertex({"a", "b"});
    SquareComplex sc = relator_complex(g, {"abAB"});
    CrossSection cs = cross_section(sc, *vh_partition(sc).partition);
    EXPECT_EQ(cs.z->num_vertices(), 1u);
    EXPECT_EQ(cs.z->num_edges(), 1u);
    EXPECT_EQ(cs.z->origin(0), cs.z->terminus(0));
    EXPECT_TRUE(validate_morphism(cs.p1).valid());
    EXPECT_TRUE(validate_morphism(cs.p2).valid());
    EXPECT_EQ(analyze_covering(cs.p1).degree, 1);
    EXPECT_EQ(analyze_covering(cs.p2).degree, 1);
    // p2 reads the bottom side B backwards, so both legs send the loop to b.
    EXPECT_EQ(cs.x1->dart_name(cs.p1.dmap[*cs.z->find_dart("s0")]), "b");
    EXPECT_EQ(cs.x2->dart_name(cs.p2.dmap[*cs.z->find_dart("s0")]), "b");
}

TEST(CrossSection, TwoLayers)
{
    GraphPtr loop = one_vertex({"b"});
    GraphMorphism id = identity_morphism(loop);
    SquareComplex sc = cylinder_complex(id, id);
    CrossSection cs = cross_section(sc, *vh_partition(sc).partition);
    EXPECT_EQ(cs.component1, 0);
    EXPECT_EQ(cs.component2, 1);
    EXPECT_EQ(cs.x1->vertex_name(cs.p1.vmap[0]), "t:o");
    EXPECT_EQ(cs.x2->vertex_name(cs.p2.vmap[0]), "u:o");
    EXPECT_EQ(cs.x1->dart_name(cs.p1.dmap[*cs.z->find_dart("s0")]), "b:b");
    EXPECT_EQ(cs.x2->dart_name(cs.p2.dmap[*cs.z->find_dart("s0")]), "c:b");
}

TEST(CrossSection, TwentyHundredCounts)
{
    auto [p1, p2] = fixtures::twenty_hundred_legs();
    ASSERT_TRUE(analyze_covering(p1).is_covering);
    ASSERT_TRUE(analyze_covering(p2).is_covering);
    SquareComplex sc = cylinder_complex(p1, p2);
    CrossSectionAnalysis a = analyze_cross_section(sc);
    ASSERT_TRUE(a.coverings());
    EXPECT_EQ(a.cross->z->num_vertices(), 20u);
    EXPECT_EQ(a.cross->z->num_edges(), 100u);
    EXPECT_EQ(a.euler, -80);
    EXPECT_EQ(a.rank, 81);
    EXPECT_EQ(a.cover1.degree, 20);
    EXPECT_EQ(a.cover2.degree, 20);
    EXPECT_EQ(a.folds1, 0);
    EXPECT_EQ(a.euler, *a.cover1.degree * a.euler1);
    EXPECT_EQ(a.euler, *a.cover2.degree * a.euler2);
    for (int v = 0; v < static_cast<int>(a.cross->x1->num_vertices()); ++v)
        EXPECT_EQ(a.cross->x1->degree(v), 10);

    Commensuration c = commensuration_from_cross_section(*a.cross);
    CommensurationReport rep = validate_commensuration(c);
    ASSERT_TRUE(rep.valid) << (rep.problems.empty() ? "" : rep.problems.front());
    EXPECT_EQ(c.h_rank, 81);
    EXPECT_EQ(rep.index1, 20);
    EXPECT_EQ(rep.index2, 20);
}

TEST(CrossSection, CorruptedTorusIsNotACovering)
{
    GraphPtr g = one_vertex({"a", "b"});
    SquareComplex sc = relator_complex(g, {"abAB"});
    sc.squares.push_back(sc.squares[0]);
    CrossSectionAnalysis a = analyze_cross_section(sc);
    ASSERT_TRUE(a.cross);
    EXPECT_FALSE(a.cover1.is_covering);
    EXPECT_GT(a.folds1, 0);
    const auto lines = a.cover1.describe(*a.cross->z);
    ASSERT_FALSE(lines.empty());
    EXPECT_EQ(lines.front(), "vertex a: not locally injective");
    EXPECT_FALSE(a.coverings());
    EXPECT_THROW(commensuration_from_cross_section(*a.cross), PreconditionError);
}

TEST(CrossSection, Preconditions)
{
    // Three layers joined by one vertical edge each way: squares mix components.
    GraphPtr loop = one_vertex({"b"});
    GraphMorphism id = identity_morphism(loop);
    SquareComplex two = cylinder_complex(id, id);
    Graph::Builder b("three");
    b.add_vertex("t").add_vertex("u").add_vertex("w");
    b.add_edge("a1", "u", "t").add_edge("a2", "w", "t");
    b.add_edge("b", "t", "t").add_edge("c", "u", "u").add_edge("d", "w", "w");
    GraphPtr g = b.build_shared();
    auto sq = [&](std::array<std::string, 4> t) { return square_from_darts(*g, t); };
    SquareComplex three = build_complex(g, {sq({"a1", "b", "a1'", "c'"}), sq({"a2", "b", "a2'", "d'"})});
    VHResult r = vh_partition(three);
    ASSERT_TRUE(r.partition);
    EXPECT_THROW(cross_section(three, *r.partition), PreconditionError);

    // A vertical edge outside every square.
    Graph::Builder b2("loose");
    b2.add_vertex("o").add_edge("a", "o", "o").add_edge("b", "o", "o").add_edge("a0", "o", "o");
    GraphPtr g2 = b2.build_shared();
    SquareComplex loose = relator_complex(g2, {"abAB"});
    EXPECT_THROW(cross_section(loose, *vh_partition(loose).partition), PreconditionError);
}

TEST(Commensuration, TorusIsTrivial)
{
    GraphPtr g = one_vertex({"a", "b"});
    SquareComplex sc = relator_complex(g, {"abAB"});
    CrossSection cs = cross_section(sc, *vh_partition(sc).partition);
    Commensuration c = commensuration_from_cross_section(cs);
    EXPECT_EQ(c.h_rank, 1);
    EXPECT_EQ(c.g1_rank, 1);
    EXPECT_EQ(c.i1, (std::vector<Word>{{1}}));
    EXPECT_EQ(c.i2, (std::vector<Word>{{1}}));
    CommensurationReport rep = validate_commensuration(c);
    EXPECT_TRUE(rep.valid);
    EXPECT_TRUE(rep.trivial);
    EXPECT_EQ(rep.index1, 1);
    EXPECT_EQ(rep.index2, 1);
}

TEST(Commensuration, DoubleLayerDegreeTwo)
{
    // z: the 2-vertex cover of the two-petal rose where a swaps and b fixes.
    Graph::Builder zb("z");
    zb.add_vertex("p").add_vertex("q");
    zb.add_edge("a1", "p", "q").add_edge("a2", "q", "p").add_edge("b1", "p", "p").add_edge("b2", "q", "q");
    GraphPtr z = zb.build_shared();
    GraphPtr x = one_vertex({"x", "y"});
    auto leg = [&](bool swap) {
        GraphMorphism p{"p", z, x, {0, 0}, std::vector<int>(z->num_darts())};
        for (const char* e : {"a1", "a2", "b1", "b2"}) {
            const bool is_a = e[0] == 'a';
            const int xd = *x->find_dart(is_a != swap ? "x" : "y");
            const int d = *z->find_dart(e);
            p.dmap[d] = xd;
            p.dmap[z->inv(d)] = x->inv(xd);
        }
        return p;
    };
    SquareComplex sc = cylinder_complex(leg(false), leg(true));
    CrossSectionAnalysis a = analyze_cross_section(sc);
    ASSERT_TRUE(a.coverings());
    Commensuration c = commensuration_from_cross_section(*a.cross);
    CommensurationReport rep = validate_commensuration(c);
    ASSERT_TRUE(rep.valid);
    EXPECT_EQ(rep.index1, 2);
    EXPECT_EQ(rep.index2, 2);
    EXPECT_EQ(c.h_rank - 1, 2 * (c.g1_rank - 1));
}

TEST(Commensuration, RandomCylindersRecoverTheirCovers)
{
    std::mt19937 rng(32);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 2), d = 1 + static_cast<int>(rng() % 5);
        const auto perms = random_cover(rng, k, d);
        Graph::Builder zb("z");
        for (int v = 0; v < d; ++v)
            zb.add_vertex("v" + std::to_string(v));
        for (int i = 0; i < k; ++i)
            for (int v = 0; v < d; ++v)
                zb.add_edge("e" + std::to_string(i) + "_" + std::to_string(v), "v" + std::to_string(v),
                            "v" + std::to_string(perms[i][v]));
        GraphPtr z = zb.build_shared();
        std::vector<std::string> letters;
        for (int i = 0; i < k; ++i)
            letters.push_back(std::string(1, static_cast<char>('p' + i)));
        GraphPtr x1 = one_vertex(letters), x2 = one_vertex(letters);
        // Leg 2 permutes the petals and flips some of them.
        std::vector<int> sigma(k);
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        std::vector<char> flip(k);
        for (auto& f : flip)
            f = rng() % 2;
        auto leg = [&](const GraphPtr& x, bool second) {
            GraphMorphism p{"p", z, x, std::vector<int>(d, 0), std::vector<int>(z->num_darts())};
            for (int i = 0; i < k; ++i)
                for (int v = 0; v < d; ++v) {
                    const int petal = second ? sigma[i] : i;
                    int xd = *x->find_dart(letters[petal]);
                    if (second && flip[i])
                        xd = x->inv(xd);
                    const int zd = *z->find_dart("e" + std::to_string(i) + "_" + std::to_string(v));
                    p.dmap[zd] = xd;
                    p.dmap[z->inv(zd)] = x->inv(xd);
                }
            return p;
        };
        SquareComplex sc = cylinder_complex(leg(x1, false), leg(x2, true));
        CrossSectionAnalysis a = analyze_cross_section(sc);
        ASSERT_TRUE(a.coverings());
        EXPECT_EQ(a.cross->z->num_vertices(), static_cast<std::size_t>(d));
        EXPECT_EQ(a.cross->z->num_edges(), static_cast<std::size_t>(k * d));
        EXPECT_EQ(a.cover1.degree, d);
        EXPECT_EQ(a.cover2.degree, d);
        EXPECT_EQ(a.euler, d * a.euler1);
        Commensuration c = commensuration_from_cross_section(*a.cross);
        CommensurationReport rep = validate_commensuration(c);
        ASSERT_TRUE(rep.valid);
        EXPECT_EQ(rep.index1, d);
        EXPECT_EQ(rep.index2, d);
        EXPECT_EQ(c.h_rank, 1 + d * (k - 1));
    }
}
