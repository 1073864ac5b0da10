#pragma once

#include "covercomm/graph.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fixtures {

using covercomm::Graph;
using covercomm::GraphPtr;

inline GraphPtr complete_graph(int n, const std::string& name)
{
    Graph::Builder b(name);
    for (int i = 0; i < n; ++i)
        b.add_vertex("v" + std::to_string(i));
    int e = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            b.add_edge("e" + std::to_string(e++), "v" + std::to_string(i), "v" + std::to_string(j));
    return b.build_shared();
}

inline GraphPtr k4() { return complete_graph(4, "K4"); }

inline GraphPtr k33()
{
    Graph::Builder b("K33");
    for (int i = 0; i < 3; ++i) {
        b.add_vertex("u" + std::to_string(i));
        b.add_vertex("w" + std::to_string(i));
    }
    int e = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            b.add_edge("f" + std::to_string(e++), "u" + std::to_string(i), "w" + std::to_string(j));
    return b.build_shared();
}

/// One vertex with loops labeled by the given letters.
inline GraphPtr rose(const std::vector<std::string>& letters, const std::string& name = "rose", bool labeled = true)
{
    Graph::Builder b(name);
    b.add_vertex("o");
    for (const auto& x : letters)
        b.add_edge(x, "o", "o", labeled ? x : std::string());
    return b.build_shared();
}

inline GraphPtr theta()
{
    Graph::Builder b("theta");
    b.add_vertex("p").add_vertex("q");
    for (int i = 0; i < 3; ++i)
        b.add_edge("t" + std::to_string(i), "p", "q");
    return b.build_shared();
}

inline GraphPtr path3()
{
    Graph::Builder b("P3");
    b.add_vertex("x").add_vertex("y").add_vertex("z");
    b.add_edge("xy", "x", "y").add_edge("yz", "y", "z");
    return b.build_shared();
}

/// 2-cycle with both edges labeled a.
inline GraphPtr double_loop()
{
    Graph::Builder b("C2");
    b.add_vertex("x").add_vertex("y");
    b.add_edge("s", "x", "y", "a").add_edge("t", "y", "x", "a");
    return b.build_shared();
}

/// Cycle on n vertices, unlabeled.
inline GraphPtr cycle(int n, const std::string& name)
{
    Graph::Builder b(name);
    for (int i = 0; i < n; ++i)
        b.add_vertex("c" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        b.add_edge("k" + std::to_string(i), "c" + std::to_string(i), "c" + std::to_string((i + 1) % n));
    return b.build_shared();
}

/// Graph with 20 vertices and 100 edges: K_{10,10} split into two halves.
inline GraphPtr twenty_hundred()
{
    Graph::Builder b("Z20");
    for (int i = 0; i < 10; ++i) {
        b.add_vertex("l" + std::to_string(i));
        b.add_vertex("r" + std::to_string(i));
    }
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            b.add_edge("e" + std::to_string(i) + "_" + std::to_string(j), "l" + std::to_string(i), "r" + std::to_string(j));
    return b.build_shared();
}

/// Two degree-20 coverings of a five-petal rose by twenty_hundred(). Edge
/// l_i -> r_j lies in matching k = j - i mod 10; leg 1 pairs matchings
/// (0,1), (2,3), ... into petals b1..b5, leg 2 pairs (1,2), ..., (9,0) into
/// c1..c5. The first matching of a pair runs forward along its petal.
inline std::pair<covercomm::GraphMorphism, covercomm::GraphMorphism> twenty_hundred_legs()
{
    GraphPtr z = twenty_hundred();
    GraphPtr x1 = rose({"b1", "b2", "b3", "b4", "b5"}, "X1", false);
    GraphPtr x2 = rose({"c1", "c2", "c3", "c4", "c5"}, "X2", false);
    auto leg = [&](const GraphPtr& x, const std::string& prefix, int shift) {
        covercomm::GraphMorphism p{prefix, z, x, std::vector<int>(z->num_vertices(), 0),
                                   std::vector<int>(z->num_darts(), -1)};
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) {
                const int k = (j - i + 10) % 10;
                const int q = (k + shift) % 10;
                const std::string petal = prefix + std::to_string(q / 2 + 1);
                const bool forward = q % 2 == 0;
                const int d = *z->find_dart("e" + std::to_string(i) + "_" + std::to_string(j));
                const int xd = *x->find_dart(forward ? petal : petal + "'");
                p.dmap[d] = xd;
                p.dmap[z->inv(d)] = x->inv(xd);
            }
        return p;
    };
    return {leg(x1, "b", 0), leg(x2, "c", 9)};
}

} // namespace fixtures
