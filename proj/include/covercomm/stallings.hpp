#pragma once

#include "covercomm/graph.hpp"
#include "covercomm/perm.hpp"
#include "covercomm/word.hpp"

#include <optional>
#include <string>
#include <vector>

namespace covercomm {

/// Folded core graph of a finitely generated subgroup of F_n, stored as a
/// table vertex x (a, A, b, B, ...) -> vertex or -1. Always kept in canonical
/// form: vertices numbered breadth-first from the basepoint 0, so equal
/// subgroups have equal tables.
class SubgroupGraph {
public:
    SubgroupGraph() = default;

    static SubgroupGraph from_generators(int rank, const std::vector<Word>& generators);
    /// Folds, trims and canonicalizes an arbitrary partial table.
    static SubgroupGraph from_table(int rank, std::vector<int> table, int basepoint = 0);
    /// Stabilizer of `base` under the right action v.x = perms[x-1][v].
    static SubgroupGraph from_action(const std::vector<Perm>& perms, int base = 0);
    /// The whole free group.
    static SubgroupGraph whole(int rank);

    int rank() const noexcept { return rank_; }
    int num_vertices() const noexcept { return vertices_; }
    int target(int v, Letter x) const { return table_[v * 2 * rank_ + letter_column(x)]; }
    const std::vector<int>& table() const noexcept { return table_; }
    long num_edges() const;

    bool complete() const;
    /// Free rank of the subgroup: |E| - |V| + 1.
    long free_rank() const { return num_edges() - num_vertices() + 1; }

    /// End of the path spelling w from v, or -1 if it leaves the graph.
    int trace(int v, const Word& w) const;

    /// Labeled Serre graph with vertices v0, v1, ... and one edge per
    /// positively labeled entry.
    GraphPtr graph(const std::string& name = "S") const;

    bool operator==(const SubgroupGraph& other) const
    {
        return rank_ == other.rank_ && vertices_ == other.vertices_ && table_ == other.table_;
    }
    bool operator!=(const SubgroupGraph& other) const { return !(*this == other); }

private:
    friend class Folder;
    int rank_ = 0;
    int vertices_ = 1;
    std::vector<int> table_{};
};

bool membership(const SubgroupGraph& s, const Word& w);
/// Number of vertices when complete, nullopt for infinite index.
std::optional<long> index(const SubgroupGraph& s);
SubgroupGraph conjugate(const SubgroupGraph& s, const Word& w);
SubgroupGraph intersect(const SubgroupGraph& s, const SubgroupGraph& t);
bool is_normal(const SubgroupGraph& s);
SubgroupGraph normal_core(const SubgroupGraph& s);
/// Spanning-tree basis: one word per non-tree edge, in vertex then letter order.
std::vector<Word> basis(const SubgroupGraph& s);
/// Right coset action sigma_x(v) = v.x, one permutation per generator.
std::vector<Perm> coset_action(const SubgroupGraph& s);
/// Schreier transversal: the tree word from the basepoint to each vertex.
std::vector<Word> schreier_representatives(const SubgroupGraph& s);

/// Preimage of a finite-index subgroup K of F_n under the homomorphism
/// F_m -> F_n sending the i-th generator to images[i].
SubgroupGraph preimage(const SubgroupGraph& k, const std::vector<Word>& images);

/// Homomorphism F_m -> F_n given by generator images, with the folded image
/// graph annotated by F_m words so that image elements can be pulled back.
class Embedding {
public:
    Embedding(int source_rank, int target_rank, std::vector<Word> images);

    int source_rank() const noexcept { return m_; }
    int target_rank() const noexcept { return n_; }
    const std::vector<Word>& images() const noexcept { return images_; }
    const SubgroupGraph& image() const noexcept { return image_; }
    /// Injective iff the image has rank m (free groups are Hopfian).
    bool injective() const { return image_.free_rank() == m_; }

    Word apply(const Word& h) const { return substitute(h, images_); }
    /// Some h with apply(h) = g, or nullopt if g is not in the image. Unique
    /// when the embedding is injective.
    std::optional<Word> pull_back(const Word& g) const;

private:
    struct Edge {
        int from, to;
        Letter x;
        Word weight;
    };
    int m_, n_;
    std::vector<Word> images_;
    SubgroupGraph image_;
    std::vector<Edge> edges_;
    std::vector<int> slots_; ///< vertex x column -> 2*edge + (1 if read backwards), or -1
};

} // namespace covercomm
