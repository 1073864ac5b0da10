#pragma once

#include "covercomm/error.hpp"
#include "covercomm/graph.hpp"
#include "covercomm/parallel.hpp"

#include <optional>
#include <string>
#include <vector>

namespace covercomm {

/// Thrown when an operation needs a valid morphism; carries the full report.
class InvalidMorphismError : public PreconditionError {
public:
    explicit InvalidMorphismError(MorphismReport report);
    const MorphismReport& report() const noexcept { return report_; }

private:
    MorphismReport report_;
};

struct CoveringViolation {
    enum class Reason { NotLocallyInjective, NotLocallySurjective };
    int vertex;
    Reason reason;
};

std::string to_string(CoveringViolation::Reason reason);

struct CoveringReport {
    bool is_covering = false;
    std::optional<long> degree;
    std::vector<CoveringViolation> violations;

    /// One line per violation: "vertex <id>: not locally injective".
    std::vector<std::string> describe(const Graph& source) const;
};

/// Checks local bijectivity at every source vertex. Throws
/// InvalidMorphismError for an invalid morphism and PreconditionError when
/// the target is disconnected.
CoveringReport analyze_covering(const GraphMorphism& m);

struct FoldResult {
    GraphPtr folded;
    GraphMorphism quotient; ///< source -> folded
    GraphMorphism induced;  ///< folded -> target, locally injective
    long folds = 0;         ///< geometric edges identified
    long vertex_folds = 0;  ///< folds that also identified two vertices
};

/// Stallings folding of a morphism until it is an immersion. Classes keep
/// the least identifier of their members.
FoldResult fold(const GraphMorphism& m);

struct DegreeRefinement {
    std::vector<int> class_of;
    std::vector<std::vector<int>> classes;
    std::vector<std::vector<long>> matrix;
};

/// Iterated color refinement to the coarsest equitable partition. Classes are
/// numbered by the rank of their refinement signature, so two graphs with the
/// same universal cover produce identical matrices.
DegreeRefinement degree_refinement(const Graph& g);

bool same_universal_cover(const Graph& g1, const Graph& g2);

struct CommonCover {
    GraphPtr z;
    GraphMorphism p1; ///< z -> g1
    GraphMorphism p2; ///< z -> g2
    long degree1 = 0;
    long degree2 = 0;
};

enum class SearchStatus { Found, NoneExists, Exhausted };

struct CommonCoverResult {
    SearchStatus status = SearchStatus::Exhausted;
    std::optional<CommonCover> cover;
    std::string base; ///< name of the graph whose covers were enumerated
    long candidates = 0;
};

/// Enumerates connected covers of the smaller graph by increasing degree, one
/// per isomorphism class, and backtracks for a covering map onto the other.
/// Deterministic: the first hit in enumeration order is returned whatever the
/// kernel or thread count.
CommonCoverResult find_common_cover(const GraphPtr& g1, const GraphPtr& g2, long max_vertices,
                                    const SearchOptions& options = {});

/// Connected covers of `base` of degree d, one per isomorphism class, as
/// permutation tables over the non-tree edges (row-major, d x 2k, columns
/// sigma_1, sigma_1^-1, sigma_2, ...). Exposed for testing.
struct CoverEnumeration {
    std::vector<int> generator_edges;
    std::vector<std::vector<int>> tables;
};
CoverEnumeration enumerate_covers(const Graph& base, int degree);

/// The cover of `base` given by one of the tables above.
GraphMorphism cover_from_table(const GraphPtr& base, const std::vector<int>& generator_edges, int degree,
                               const std::vector<int>& table);

/// A locally bijective morphism z -> target, least in search order, if any.
std::optional<GraphMorphism> find_covering_map(const GraphPtr& z, const GraphPtr& target);

struct FiberProduct {
    GraphPtr graph;
    GraphMorphism q1;
    GraphMorphism q2;
};

/// Pullback of p1 and p2 over their common target. Vertex and dart ids are
/// "<id1>|<id2>".
FiberProduct fiber_product(const GraphMorphism& p1, const GraphMorphism& p2);

} // namespace covercomm
