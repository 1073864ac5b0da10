#pragma once

#include "covercomm/numeric.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace covercomm {

/// Signed letter over a finite alphabet: +k is the k-th letter (1-based),
/// -k its inverse, 0 means "unlabeled".
using Letter = int;

/// True for a lowercase letter optionally followed by digits ("a", "b", "a12").
bool is_letter_token(std::string_view token);

/// The first `rank` letters: a, b, c, ...
std::vector<std::string> standard_alphabet(int rank);

/// Printable form of a signed letter; inverses are capitalized ("a1" -> "A1").
std::string letter_text(const std::vector<std::string>& alphabet, Letter x);

/// `prefix` followed by `index` zero-padded to the width of `count - 1`, so
/// that lexicographic order of the generated ids equals numeric order.
std::string numbered_id(std::string_view prefix, std::size_t index, std::size_t count);

/// Finite Serre graph: vertices, darts, a fixed-point-free involution on darts
/// and an origin map. Loops and parallel edges are ordinary.
///
/// Vertices and darts are stored in lexicographic order of their external
/// identifiers; every index-based iteration is therefore deterministic.
/// Instances are immutable once built.
class Graph {
public:
    class Builder;

    Graph() = default;

    const std::string& name() const noexcept { return name_; }

    std::size_t num_vertices() const noexcept { return vertex_names_.size(); }
    std::size_t num_darts() const noexcept { return dart_names_.size(); }
    std::size_t num_edges() const noexcept { return edge_darts_.size(); }

    const std::string& vertex_name(int v) const { return vertex_names_.at(v); }
    const std::string& dart_name(int d) const { return dart_names_.at(d); }
    std::optional<int> find_vertex(std::string_view id) const;
    std::optional<int> find_dart(std::string_view id) const;

    int origin(int d) const { return origin_[d]; }
    int inv(int d) const { return inv_[d]; }
    int terminus(int d) const { return origin_[inv_[d]]; }

    /// Darts with origin `v`, in increasing dart order.
    std::span<const int> darts_at(int v) const
    {
        return {incident_.data() + offsets_[v], incident_.data() + offsets_[v + 1]};
    }
    int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }

    bool labeled() const noexcept { return labeled_; }
    Letter label(int d) const { return labels_.empty() ? 0 : labels_[d]; }
    const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
    std::string label_text(int d) const { return labels_.empty() ? std::string() : letter_text(alphabet_, labels_[d]); }

    /// Geometric edges are numbered by the lesser dart of each pair.
    int edge_of(int d) const { return dart_edge_[d]; }
    int edge_dart(int e) const { return edge_darts_[e]; }
    const std::string& edge_name(int e) const { return dart_names_[edge_darts_[e]]; }

private:
    std::string name_;
    std::vector<std::string> vertex_names_;
    std::vector<std::string> dart_names_;
    std::vector<int> inv_;
    std::vector<int> origin_;
    bool labeled_ = false;
    std::vector<Letter> labels_;
    std::vector<std::string> alphabet_;
    std::vector<int> offsets_;
    std::vector<int> incident_;
    std::vector<int> dart_edge_;
    std::vector<int> edge_darts_;
};

/// Collects vertices and edges by identifier, then validates and freezes them.
class Graph::Builder {
public:
    explicit Builder(std::string name = {});

    /// Fixes the label alphabet; otherwise it is the sorted set of letters used.
    Builder& alphabet(std::vector<std::string> letters);
    Builder& add_vertex(std::string id);
    /// Edge `id` from `src` to `dst`, realized as darts `id` and `id'`.
    Builder& add_edge(const std::string& id, std::string src, std::string dst, std::string label = {});
    /// Edge with explicit names for the forward and reverse darts.
    Builder& add_darts(std::string forward, std::string reverse, std::string src, std::string dst,
                       std::string label = {});

    /// Throws InputError on duplicate identifiers, dangling endpoints or a
    /// label outside the alphabet.
    Graph build() const;
    std::shared_ptr<const Graph> build_shared() const { return std::make_shared<const Graph>(build()); }

private:
    struct PendingEdge {
        std::string forward, reverse, src, dst, label;
    };
    std::string name_;
    std::optional<std::vector<std::string>> alphabet_;
    std::vector<std::string> vertices_;
    std::vector<PendingEdge> edges_;
};

using GraphPtr = std::shared_ptr<const Graph>;

/// Combinatorial map of Serre graphs. Unassigned entries are -1.
struct GraphMorphism {
    std::string name;
    GraphPtr source;
    GraphPtr target;
    std::vector<int> vmap;
    std::vector<int> dmap;
};

struct MorphismReport {
    std::vector<std::string> violations;
    bool valid() const noexcept { return violations.empty(); }
};

GraphMorphism identity_morphism(GraphPtr g);

/// Checks total definition, origin and involution compatibility, and label
/// preservation when both sides are labeled. Lists every violation.
MorphismReport validate_morphism(const GraphMorphism& m);

/// Same identifiers, incidences and labels.
bool identical(const Graph& a, const Graph& b);

/// |V| - |E|.
long euler_characteristic(const Graph& g);

/// Vertex sets of the connected components, each sorted, ordered by least vertex.
std::vector<std::vector<int>> connected_components(const Graph& g);
bool is_connected(const Graph& g);

/// Rank of the fundamental group, 1 - chi. Throws PreconditionError when `g`
/// is empty or disconnected.
long free_rank(const Graph& g);

/// Average vertex degree after `folds` vertex-identifying folds, each of which
/// removes one vertex and one edge: (2|E| - 2f) / (|V| - f).
Rational average_degree_after_folds(long vertices, long edges, long folds);
Rational average_degree_after_folds(const Graph& g, long folds);

/// Subgraph on the given vertices and edges (edges must join listed
/// vertices), keeping identifiers and labels.
GraphPtr subgraph(const Graph& g, std::span<const int> vertices, std::span<const int> edges, std::string name);

} // namespace covercomm
