#pragma once

#include "covercomm/amalgam.hpp"
#include "covercomm/covering.hpp"
#include "covercomm/graph.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace covercomm {

using Square = std::array<int, 4>; ///< darts of the skeleton, a closed path

struct SquareComplex {
    GraphPtr skeleton;
    std::vector<Square> squares;
};

/// Throws InputError when a square references a missing dart or does not close up.
SquareComplex build_complex(GraphPtr skeleton, std::vector<Square> squares);

/// `square d1 d2 d3 d4`: each token is a dart name (edge id, or id' for the reverse).
Square square_from_darts(const Graph& skeleton, const std::array<std::string, 4>& tokens);

/// Squares spelled by a length-4 relator such as "abAB" or "a1b1A2B2".
/// Unlabeled skeleton: letters are edge ids, uppercase for the reverse dart,
/// giving one square. Labeled skeleton: letters are labels and the relator is
/// lifted at every vertex, one square per lift up to cyclic rotation.
std::vector<Square> relator_squares(const Graph& skeleton, std::string_view relator);

struct VHPartition {
    std::vector<char> vertical; ///< per geometric edge of the skeleton

    std::vector<int> vertical_edges() const;
    std::vector<int> horizontal_edges() const;
};

/// One step of an odd cycle: edges `from` and `to` are opposite (same class)
/// or adjacent (different classes) in `square`.
struct VHLink {
    int square = -1;
    int from = -1, to = -1;
    bool adjacent = false;
};

struct VHResult {
    std::optional<VHPartition> partition;
    std::vector<VHLink> witness; ///< closed walk with an odd number of adjacent steps
    std::string describe(const SquareComplex& sc) const;
};

/// Opposite sides share a class, adjacent sides differ. In each connected
/// block of constraints the class holding the least edge id is vertical, or
/// horizontal when `least_is_vertical` is false.
VHResult vh_partition(const SquareComplex& sc, bool least_is_vertical = true);

struct HorizontalGraph {
    GraphPtr graph;                              ///< horizontal edges and their endpoints
    std::vector<std::vector<int>> components;    ///< skeleton vertices, ordered by least vertex
    std::vector<GraphPtr> component_graphs;      ///< named X1, X2, ...
    std::vector<int> component_of;               ///< skeleton vertex -> component or -1
};

HorizontalGraph horizontal_subgraph(const SquareComplex& sc, const VHPartition& part);

/// z has a vertex per vertical edge (same id) and an edge s<k> per square.
/// Each square is read (vertical, horizontal, vertical, horizontal) from its
/// least vertical dart, among the readings that put an X1 side first;
/// p1 sends the z-edge to the first horizontal side and p2 to the second,
/// reversed.
struct CrossSection {
    GraphPtr z;
    GraphPtr x1, x2;
    int component1 = -1, component2 = -1;
    GraphMorphism p1, p2;
    std::vector<Square> readings; ///< the reading chosen for each square
};

/// Throws PreconditionError when the partition does not fit, squares mix
/// components, a vertical edge lies in no square or is read both ways.
CrossSection cross_section(const SquareComplex& sc, const VHPartition& part);

struct CrossSectionAnalysis {
    VHResult vh;
    std::optional<CrossSection> cross;
    CoveringReport cover1, cover2;
    long folds1 = 0, folds2 = 0;
    long euler = 0;
    std::optional<long> rank; ///< when z is connected
    long euler1 = 0, euler2 = 0;

    bool coverings() const { return cross && cover1.is_covering && cover2.is_covering; }
};

CrossSectionAnalysis analyze_cross_section(const SquareComplex& sc, bool least_is_vertical = true);

/// pi_1(X1) <- pi_1(z) -> pi_1(X2). Each graph gets a breadth-first spanning
/// tree from its least vertex (from p_i of it for X_i); free bases are the
/// non-tree edges in edge order. Throws PreconditionError unless both legs are
/// coverings and z is connected.
Commensuration commensuration_from_cross_section(const CrossSection& cs, std::string name = "Z");

/// Complex with X1 on top, X2 at the bottom, a vertical edge a:<v> from
/// u:<p2 v> to t:<p1 v> per vertex of z and a square per edge of z. Horizontal
/// edges are b:<id> (X1) and c:<id> (X2).
SquareComplex cylinder_complex(const GraphMorphism& p1, const GraphMorphism& p2);

} // namespace covercomm
