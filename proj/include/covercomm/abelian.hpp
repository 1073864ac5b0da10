#pragma once

#include "covercomm/int_matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace covercomm {

/// Default order cap in dimension <= 2: finite subgroups of GL_2(Z) have at
/// most 12 elements.
constexpr long kGL2Cap = 12;

/// g has infinite order because |tr(g^exponent)| > dim or g^exponent is
/// unipotent and not the identity.
struct InfiniteOrderWitness {
    std::vector<int> word; ///< 0-based generator indices
    IntMatrix matrix;
    long exponent = 1;
    std::string reason;
};

/// Certificate for g, using exponents up to max_exponent, or nullopt.
std::optional<InfiniteOrderWitness> infinite_order_certificate(const IntMatrix& g, long max_exponent);
/// Re-derives the claim of a witness against its generators.
bool check_witness(const InfiniteOrderWitness& w, const std::vector<IntMatrix>& generators);

std::string generator_word_text(const std::vector<int>& word);

enum class ClosureVerdict { Finite, Infinite, Inconclusive };

struct MatrixGroupClosure {
    ClosureVerdict verdict = ClosureVerdict::Inconclusive;
    std::vector<IntMatrix> generators;
    long cap = 0;
    /// Finite: every element, shortlex-first word order. Otherwise the part enumerated.
    std::vector<IntMatrix> elements;
    std::vector<std::vector<int>> words;
    std::optional<InfiniteOrderWitness> witness;
};

/// Breadth-first closure of matrices in GL_d(Z). Finite when at most `cap`
/// elements arise; otherwise the shortlex-first element with an infinite-order
/// certificate is returned. cap may be omitted only for d <= 2.
MatrixGroupClosure closure(const std::vector<IntMatrix>& generators, std::optional<long> cap = std::nullopt,
                           int dim = -1);

/// G_i = Z^d x| P_i with N = Z^d embedded in the translations by M_i.
struct AbelianCommensuration {
    std::string name = "A";
    int d = 0;
    IntMatrix m1, m2;
    std::vector<IntMatrix> p1, p2;

    const IntMatrix& m(int side) const { return side == 1 ? m1 : m2; }
    const std::vector<IntMatrix>& p(int side) const { return side == 1 ? p1 : p2; }
};

/// Shape, determinants, lattice invariance (naming the offending generator)
/// and finiteness of both holonomy groups.
std::vector<std::string> validate_abelian(const AbelianCommensuration& c, std::optional<long> cap = std::nullopt);

/// Holonomy generators of side i written in N-coordinates: M_i^-1 A M_i.
std::vector<IntMatrix> transported_holonomy(const AbelianCommensuration& c, int side);

enum class OutFiniteVerdict { OutFinite, NotOutFinite, Inconclusive };
std::string to_string(OutFiniteVerdict v);

struct OutFiniteResult {
    OutFiniteVerdict verdict = OutFiniteVerdict::Inconclusive;
    MatrixGroupClosure gamma;
};

/// Throws PreconditionError for an invalid commensuration.
OutFiniteResult is_out_finite(const AbelianCommensuration& c, std::optional<long> cap = std::nullopt);

/// K = L x| Gamma, with j_i(t, A) = (C_i t, C_i A C_i^-1) and C_i = M_i^-1.
struct AbelianCompletion {
    Lattice l;
    std::vector<IntMatrix> gamma;
    RatMatrix c1, c2;
    Integer index1 = 0, index2 = 0;
};

struct CompletionResult {
    OutFiniteResult out;
    std::optional<AbelianCompletion> completion;
};

CompletionResult complete_abelian(const AbelianCommensuration& c, std::optional<long> cap = std::nullopt);

/// Empty when the completion checks out.
std::vector<std::string> verify_completion(const AbelianCommensuration& c, const AbelianCompletion& comp);

/// M with a finite group Gamma acting, a Gamma-invariant subgroup Z and a
/// retraction rho0: M -> Z. Matrices act on coordinate columns.
struct AveragingInstance {
    FGAbelian m;
    std::vector<IntMatrix> gamma;
    std::vector<IntVector> z;
    IntMatrix rho0;
};

struct AveragingResult {
    IntMatrix rho;
    std::vector<IntMatrix> gamma_elements;
    std::vector<IntVector> kernel; ///< generators of ker rho
    long gamma_order() const { return static_cast<long>(gamma_elements.size()); }
};

/// rho(v) = sum over gamma of gamma rho0(gamma^-1 v). Throws PreconditionError
/// if Z is not invariant, rho0 is not a retraction onto Z, or a generator is
/// not an automorphism of finite order.
AveragingResult equivariant_average(const AveragingInstance& inst, long max_order = 4096);

/// Equivariance on generators, rho|Z = |Gamma|, invariance of ker rho and
/// |Gamma| M <= Z + ker rho; empty when all hold.
std::vector<std::string> check_averaging(const AveragingInstance& inst, const AveragingResult& result);

} // namespace covercomm
