#pragma once

#include "covercomm/graph.hpp"
#include "covercomm/numeric.hpp"
#include "covercomm/parallel.hpp"
#include "covercomm/perm.hpp"
#include "covercomm/stallings.hpp"

#include <optional>
#include <string>
#include <vector>

namespace covercomm {

/// Pair of homomorphisms i1: H -> G1, i2: H -> G2 of free groups, given by
/// the images of a basis of H.
struct Commensuration {
    std::string name = "C";
    int h_rank = 0;
    int g1_rank = 0;
    int g2_rank = 0;
    std::vector<Word> i1;
    std::vector<Word> i2;

    const std::vector<Word>& images(int side) const { return side == 1 ? i1 : i2; }
    int target_rank(int side) const { return side == 1 ? g1_rank : g2_rank; }
};

struct CommensurationReport {
    bool valid = false;
    bool trivial = false;
    long rank1 = 0, rank2 = 0;
    std::optional<long> index1, index2;
    std::vector<std::string> problems;
};

CommensurationReport validate_commensuration(const Commensuration& c);

/// Image of a subgroup of H in G_side.
SubgroupGraph image_subgroup(const Commensuration& c, int side, const SubgroupGraph& n);

struct NormalCommensuration {
    Commensuration base;
    SubgroupGraph n;      ///< N <= H, finite index
    SubgroupGraph image1; ///< i1(N), normal in G1
    SubgroupGraph image2; ///< i2(N), normal in G2
    int steps = 0;        ///< iterations until stable
    long index_in_h() const { return *index(n); }
};

/// Checks that n has finite index in H and that both images are normal.
/// Returns the assembled NormalCommensuration or nullopt.
std::optional<NormalCommensuration> check_normal_extension(const Commensuration& c, const SubgroupGraph& n);

/// Largest N <= H with i1(N), i2(N) normal, by the intersection iteration
/// started from H. nullopt when [H:N_k] passes max_index (inconclusive).
/// Throws PreconditionError for an invalid commensuration.
std::optional<NormalCommensuration> find_normal_extension(const Commensuration& c, long max_index);

/// Amalgam syllable: factor 1 or 2 for G1, G2 words; 0 for an H word.
struct Syllable {
    int factor;
    Word word;
    bool operator==(const Syllable& o) const { return factor == o.factor && word == o.word; }
};

/// h t_1 ... t_k with h in H and t_j nontrivial Schreier representatives of
/// the right cosets of i(H), alternating between factors.
struct NormalForm {
    Word h;
    std::vector<Syllable> reps;

    long length() const { return static_cast<long>(reps.size()); }
    bool operator==(const NormalForm& o) const { return h == o.h && reps == o.reps; }
};

/// Reduces products in G1 *_H G2.
class AmalgamReducer {
public:
    explicit AmalgamReducer(const Commensuration& c);

    NormalForm reduce(const std::vector<Syllable>& syllables) const;
    /// The element as a syllable sequence: h is absorbed into the first
    /// representative (or becomes one G1 syllable when there are none).
    std::vector<Syllable> syllables(const NormalForm& nf) const;

private:
    struct Side {
        Embedding embedding;
        SubgroupGraph image;
        std::vector<Word> reps;
    };
    Word head_image(int factor, const Word& h) const;
    const Commensuration c_;
    std::vector<Side> sides_;
};

std::vector<Syllable> amalgam_normal_form(const Commensuration& c, const std::vector<Syllable>& syllables);

/// A *_C B with C given abstractly and by generator images in A and B.
struct FiniteAmalgam {
    PermGroup a, b, c;
    std::vector<Perm> c_in_a, c_in_b;
    long order_a = 0, order_b = 0, order_c = 0;
};

/// Problems with a FiniteAmalgam (empty when the embeddings are injective
/// homomorphisms and the orders divide).
std::vector<std::string> validate_amalgam(const FiniteAmalgam& fa);

/// (G1/N) *_{H/N} (G2/N) through the regular coset actions.
FiniteAmalgam quotient_amalgam(const NormalCommensuration& nc);

struct FiniteQuotientCertificate {
    int degree = 0;
    std::vector<Perm> a_images, b_images;
    long image_order = 0;
    bool injective_on_factors = false;
};

/// First (degree, A-assignment, B-assignment) in lexicographic order giving
/// homomorphisms A, B -> Sym(d) that agree on C and have nontrivial image.
std::optional<FiniteQuotientCertificate> find_finite_quotient(const FiniteAmalgam& fa, int max_degree,
                                                              bool require_injective_on_factors,
                                                              const SearchOptions& options = {});

/// Recomputes everything a certificate claims; empty means valid.
std::vector<std::string> verify_finite_quotient(const FiniteAmalgam& fa, const FiniteQuotientCertificate& cert);

struct FreeKernelData {
    GraphPtr quotient;   ///< vertices A<i>, B<j> for cosets of phi(A), phi(B); edges C<k>
    long kernel_rank = 0;
    Rational formula;    ///< 1 - |F|(1/|A| + 1/|B| - 1/|C|)
};

FreeKernelData free_kernel_data(const FiniteAmalgam& fa, const FiniteQuotientCertificate& cert);

struct ObstructionBounds {
    long max_index = 1000;
    int max_degree = 6;
};

enum class ObstructionVerdict { Invalid, ExtensionInconclusive, NoQuotientWithinBound, NecessaryConditionsHold };

std::string to_string(ObstructionVerdict v);

struct ObstructionReport {
    ObstructionVerdict verdict = ObstructionVerdict::Invalid;
    CommensurationReport validation;
    std::optional<NormalCommensuration> extension;
    std::optional<FiniteAmalgam> amalgam;
    std::optional<FiniteQuotientCertificate> quotient;
    std::string message;
};

ObstructionReport obstruction_report(const Commensuration& c, const ObstructionBounds& bounds = {},
                                     const SearchOptions& options = {});

} // namespace covercomm
