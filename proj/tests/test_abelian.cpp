#include "covercomm/abelian.hpp"
#include "covercomm/error.hpp"
#include "random_instances.hpp"

#include <gtest/gtest.h>

#include <array>
#include <random>
#include <set>

using namespace covercomm;
using instances::d4;
using instances::d6;
using instances::m2;

namespace {

using Small = std::array<long, 4>;

Small small(const IntMatrix& m) { return {m(0, 0).get_si(), m(0, 1).get_si(), m(1, 0).get_si(), m(1, 1).get_si()}; }

Small mul(const Small& a, const Small& b)
{
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

// Plain 2x2 closure on machine integers; -1 when more than `limit` elements.
long oracle_order(const std::vector<IntMatrix>& gens, long limit, std::set<Small>* out = nullptr)
{
    std::set<Small> seen{{1, 0, 0, 1}};
    std::vector<Small> queue{{1, 0, 0, 1}};
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (const IntMatrix& g : gens) {
            Small next = mul(queue[i], small(g));
            for (long e : next)
                if (e > 1000000 || e < -1000000)
                    return -1;
            if (seen.insert(next).second) {
                queue.push_back(next);
                if (static_cast<long>(queue.size()) > limit)
                    return -1;
            }
        }
    if (out)
        *out = seen;
    return static_cast<long>(queue.size());
}

IntMatrix random_unimodular(std::mt19937& rng)
{
    IntMatrix u = IntMatrix::identity(2);
    for (int step = 0; step < 4; ++step) {
        const long k = static_cast<long>(rng() % 5) - 2;
        u = u * (rng() % 2 ? m2(1, k, 0, 1) : m2(1, 0, k, 1));
    }
    return u;
}

AbelianCommensuration abelian(IntMatrix m1, IntMatrix m2_, std::vector<IntMatrix> p1, std::vector<IntMatrix> p2)
{
    AbelianCommensuration c;
    c.d = m1.rows();
    c.m1 = std::move(m1);
    c.m2 = std::move(m2_);
    c.p1 = std::move(p1);
    c.p2 = std::move(p2);
    return c;
}

} // namespace

TEST(Closure, DihedralOrders)
{
    EXPECT_EQ(closure(d4()).elements.size(), 8u);
    EXPECT_EQ(closure(d6()).elements.size(), 12u);
    EXPECT_EQ(closure({}, std::nullopt, 2).elements.size(), 1u);
    EXPECT_EQ(closure({IntMatrix::identity(2)}).elements.size(), 1u);
    EXPECT_EQ(closure(d4()).verdict, ClosureVerdict::Finite);
}

TEST(Closure, UnionOfD4AndD6IsInfinite)
{
    std::vector<IntMatrix> gens = d4();
    for (const IntMatrix& g : d6())
        gens.push_back(g);
    MatrixGroupClosure c = closure(gens);
    ASSERT_EQ(c.verdict, ClosureVerdict::Infinite);
    ASSERT_TRUE(c.witness);
    EXPECT_EQ(c.witness->word, (std::vector<int>{0, 2}));
    EXPECT_EQ(c.witness->matrix, m2(-1, -1, 0, -1));
    EXPECT_EQ(c.witness->exponent, 2);
    EXPECT_EQ(power(c.witness->matrix, 2), m2(1, 2, 0, 1));
    EXPECT_TRUE(check_witness(*c.witness, gens));
    EXPECT_EQ(generator_word_text(c.witness->word), "g1 g3");
}

TEST(Closure, WitnessMutationsFail)
{
    std::vector<IntMatrix> gens = d4();
    for (const IntMatrix& g : d6())
        gens.push_back(g);
    InfiniteOrderWitness w = *closure(gens).witness;
    InfiniteOrderWitness bad = w;
    bad.word = {0};
    EXPECT_FALSE(check_witness(bad, gens));
    bad = w;
    bad.exponent = 1;
    EXPECT_FALSE(check_witness(bad, gens));
    EXPECT_FALSE(infinite_order_certificate(m2(0, -1, 1, 0), 12));
    EXPECT_TRUE(infinite_order_certificate(m2(2, 1, 1, 1), 1));
}

TEST(Closure, Preconditions)
{
    EXPECT_THROW(closure({m2(2, 0, 0, 1)}), PreconditionError);
    IntMatrix swap3 = int_matrix(3, 3, {0, 1, 0, 1, 0, 0, 0, 0, 1});
    EXPECT_THROW(closure({swap3}), PreconditionError);
    // Signed permutations of Z^3: order 48.
    IntMatrix cyc = int_matrix(3, 3, {0, 0, 1, 1, 0, 0, 0, 1, 0});
    IntMatrix neg = int_matrix(3, 3, {-1, 0, 0, 0, 1, 0, 0, 0, 1});
    MatrixGroupClosure c = closure({swap3, cyc, neg}, 48);
    EXPECT_EQ(c.verdict, ClosureVerdict::Finite);
    EXPECT_EQ(c.elements.size(), 48u);
    EXPECT_NE(closure({swap3, cyc, neg}, 47).verdict, ClosureVerdict::Finite);
}

TEST(Closure, ElementsFormAGroup)
{
    for (const auto& gens : {d4(), d6()}) {
        MatrixGroupClosure c = closure(gens);
        std::set<IntMatrix> set(c.elements.begin(), c.elements.end());
        ASSERT_EQ(set.size(), c.elements.size());
        for (const IntMatrix& a : c.elements) {
            for (const IntMatrix& b : c.elements)
                EXPECT_TRUE(set.count(a * b));
            EXPECT_TRUE(set.count(to_integer(inverse(to_rational(a)))));
        }
        for (std::size_t i = 0; i < c.elements.size(); ++i) {
            IntMatrix w = IntMatrix::identity(2);
            for (int s : c.words[i])
                w = w * gens[s];
            EXPECT_EQ(w, c.elements[i]);
        }
    }
}

TEST(Closure, RandomConjugatesAgreeWithOracle)
{
    std::mt19937 rng(21);
    const std::vector<IntMatrix> pool = {m2(0, -1, 1, 0), m2(1, 0, 0, -1), m2(0, -1, 1, 1), m2(0, 1, 1, 0),
                                         m2(-1, 0, 0, -1), m2(-1, -1, 1, 0)};
    for (int trial = 0; trial < 200; ++trial) {
        IntMatrix u = random_unimodular(rng);
        IntMatrix uinv = to_integer(inverse(to_rational(u)));
        std::vector<IntMatrix> gens;
        const int count = 1 + static_cast<int>(rng() % 2);
        for (int k = 0; k < count; ++k)
            gens.push_back(uinv * pool[rng() % pool.size()] * u);
        MatrixGroupClosure c = closure(gens);
        std::set<Small> oracle;
        const long order = oracle_order(gens, 200, &oracle);
        if (c.verdict == ClosureVerdict::Finite) {
            EXPECT_LE(c.elements.size(), 12u);
            ASSERT_EQ(order, static_cast<long>(c.elements.size()));
            for (const IntMatrix& e : c.elements)
                EXPECT_TRUE(oracle.count(small(e)));
        } else {
            ASSERT_EQ(c.verdict, ClosureVerdict::Infinite);
            EXPECT_TRUE(check_witness(*c.witness, gens));
            EXPECT_EQ(order, -1);
        }
    }
}

TEST(Closure, RandomGeneratorsVerdictMatchesOracle)
{
    std::mt19937 rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<IntMatrix> gens{random_unimodular(rng)};
        if (rng() % 2)
            gens.push_back(random_unimodular(rng) * m2(1, 0, 0, -1));
        MatrixGroupClosure c = closure(gens);
        const long order = oracle_order(gens, 500);
        if (c.verdict == ClosureVerdict::Finite)
            EXPECT_EQ(order, static_cast<long>(c.elements.size()));
        else {
            ASSERT_EQ(c.verdict, ClosureVerdict::Infinite);
            EXPECT_TRUE(check_witness(*c.witness, gens));
            EXPECT_EQ(order, -1);
        }
    }
}

TEST(OutFinite, Examples)
{
    auto trivial = abelian(IntMatrix::identity(2), IntMatrix::identity(2), {}, {});
    OutFiniteResult r = is_out_finite(trivial);
    EXPECT_EQ(r.verdict, OutFiniteVerdict::OutFinite);
    EXPECT_EQ(r.gamma.elements.size(), 1u);

    auto mixed = abelian(IntMatrix::identity(2), IntMatrix::identity(2), d4(), d6());
    r = is_out_finite(mixed);
    EXPECT_EQ(r.verdict, OutFiniteVerdict::NotOutFinite);
    ASSERT_TRUE(r.gamma.witness);

    auto scaled = abelian(IntMatrix::identity(2), int_matrix(2, 2, {2, 0, 0, 2}), d4(), d4());
    r = is_out_finite(scaled);
    EXPECT_EQ(r.verdict, OutFiniteVerdict::OutFinite);
    EXPECT_EQ(r.gamma.elements.size(), 8u);
    EXPECT_EQ(to_string(OutFiniteVerdict::NotOutFinite), "not out-finite");
}

TEST(OutFinite, ValidationNamesTheGenerator)
{
    auto bad = abelian(int_matrix(2, 2, {1, 0, 0, 2}), IntMatrix::identity(2), d4(), d4());
    std::vector<std::string> problems = validate_abelian(bad);
    ASSERT_FALSE(problems.empty());
    EXPECT_NE(problems.front().find("p1 generator 1"), std::string::npos) << problems.front();
    EXPECT_THROW(is_out_finite(bad), PreconditionError);
    auto singular = abelian(int_matrix(2, 2, {1, 1, 1, 1}), IntMatrix::identity(2), {}, {});
    EXPECT_FALSE(validate_abelian(singular).empty());
}

TEST(OutFinite, D4AgainstD6NeverOutFinite)
{
    const auto bases4 = instances::invariant_bases(d4());
    const auto bases6 = instances::invariant_bases(d6());
    ASSERT_FALSE(bases4.empty());
    ASSERT_FALSE(bases6.empty());
    std::mt19937 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        auto c = abelian(bases4[rng() % bases4.size()], bases6[rng() % bases6.size()], d4(), d6());
        ASSERT_TRUE(validate_abelian(c).empty());
        OutFiniteResult r = is_out_finite(c);
        EXPECT_EQ(r.verdict, OutFiniteVerdict::NotOutFinite);
        ASSERT_TRUE(r.gamma.witness);
        EXPECT_TRUE(check_witness(*r.gamma.witness, r.gamma.generators));
    }
}

TEST(Completion, HalfLattice)
{
    auto c = abelian(IntMatrix::identity(2), int_matrix(2, 2, {2, 0, 0, 2}), d4(), d4());
    CompletionResult r = complete_abelian(c);
    ASSERT_TRUE(r.completion);
    const AbelianCompletion& k = *r.completion;
    EXPECT_EQ(k.l, Lattice::from_generators(2, {{Rational(1, 2), 0}, {0, Rational(1, 2)}}));
    EXPECT_EQ(k.gamma.size(), 8u);
    EXPECT_EQ(k.index1, 4);
    EXPECT_EQ(k.index2, 1);
    EXPECT_TRUE(verify_completion(c, k).empty());
}

TEST(Completion, TrivialIsIdentity)
{
    auto c = abelian(IntMatrix::identity(2), IntMatrix::identity(2), d4(), d4());
    CompletionResult r = complete_abelian(c);
    ASSERT_TRUE(r.completion);
    EXPECT_EQ(r.completion->l, Lattice::standard(2));
    EXPECT_EQ(r.completion->index1, 1);
    EXPECT_EQ(r.completion->index2, 1);
    EXPECT_TRUE(verify_completion(c, *r.completion).empty());
}

TEST(Completion, CorruptedLatticeIsRejected)
{
    auto c = abelian(IntMatrix::identity(2), int_matrix(2, 2, {2, 0, 0, 2}), d4(), d4());
    AbelianCompletion k = *complete_abelian(c).completion;
    k.l = Lattice::from_generators(2, {{Rational(1, 2), 0}, {0, 1}});
    std::vector<std::string> problems = verify_completion(c, k);
    ASSERT_FALSE(problems.empty());
    bool named = false;
    for (const std::string& p : problems)
        named = named || p.find("not invariant") != std::string::npos;
    EXPECT_TRUE(named);

    AbelianCompletion wrong_index = *complete_abelian(c).completion;
    wrong_index.index1 = 2;
    EXPECT_FALSE(verify_completion(c, wrong_index).empty());
}

TEST(Completion, NotOutFiniteHasNoCompletion)
{
    auto c = abelian(IntMatrix::identity(2), IntMatrix::identity(2), d4(), d6());
    CompletionResult r = complete_abelian(c);
    EXPECT_EQ(r.out.verdict, OutFiniteVerdict::NotOutFinite);
    EXPECT_FALSE(r.completion);
}

TEST(Completion, RandomInstancesVerify)
{
    std::mt19937 rng(24);
    for (const auto& hol : {d4(), d6()}) {
        const auto bases = instances::invariant_bases(hol);
        int completed = 0;
        for (int trial = 0; trial < 40; ++trial) {
            auto c = abelian(bases[rng() % bases.size()], bases[rng() % bases.size()], hol, hol);
            CompletionResult r = complete_abelian(c);
            if (r.out.verdict != OutFiniteVerdict::OutFinite) {
                EXPECT_EQ(r.out.verdict, OutFiniteVerdict::NotOutFinite);
                EXPECT_TRUE(check_witness(*r.out.gamma.witness, r.out.gamma.generators));
                continue;
            }
            ++completed;
            ASSERT_TRUE(r.completion);
            const AbelianCompletion& k = *r.completion;
            EXPECT_TRUE(verify_completion(c, k).empty());
            // Independent index: [L : C_i Z^2] |Gamma| / |P_i| by covolumes.
            for (int side = 1; side <= 2; ++side) {
                const Rational cov_ci = abs(determinant(side == 1 ? k.c1 : k.c2));
                const Rational expect = cov_ci / k.l.covolume() * Rational(static_cast<long>(k.gamma.size())) /
                                        Rational(oracle_order(hol, 100));
                EXPECT_EQ(Rational(side == 1 ? k.index1 : k.index2), expect);
            }
        }
        EXPECT_GT(completed, 0);
    }
}

TEST(Averaging, TrivialGroupKeepsRho0)
{
    AveragingInstance inst{FGAbelian{2, {}}, {}, {IntVector{1, 0}}, int_matrix(2, 2, {1, 3, 0, 0})};
    AveragingResult r = equivariant_average(inst);
    EXPECT_EQ(r.gamma_order(), 1);
    EXPECT_EQ(r.rho, inst.rho0);
    EXPECT_TRUE(check_averaging(inst, r).empty());
}

TEST(Averaging, SignFlip)
{
    AveragingInstance inst{FGAbelian{2, {}}, {int_matrix(2, 2, {-1, 0, 0, -1})}, {IntVector{1, 0}},
                           int_matrix(2, 2, {1, 0, 0, 0})};
    AveragingResult r = equivariant_average(inst);
    EXPECT_EQ(r.gamma_order(), 2);
    EXPECT_EQ(r.rho, int_matrix(2, 2, {2, 0, 0, 0}));
    ASSERT_EQ(r.kernel.size(), 1u);
    EXPECT_EQ(r.kernel[0], (IntVector{0, 1}));
    EXPECT_TRUE(check_averaging(inst, r).empty());
}

TEST(Averaging, TorsionAveragesToZero)
{
    // M = Z + Z/2, Gamma = C2 negating the free part, Z = the torsion part.
    AveragingInstance inst{FGAbelian{1, {Integer(2)}}, {int_matrix(2, 2, {-1, 0, 0, 1})}, {IntVector{0, 1}},
                           int_matrix(2, 2, {0, 0, 0, 1})};
    AveragingResult r = equivariant_average(inst);
    EXPECT_EQ(inst.m.reduce(r.rho), IntMatrix(2, 2));
    EXPECT_TRUE(check_averaging(inst, r).empty());
    Subgroup ker(inst.m, r.kernel);
    EXPECT_TRUE(ker.contains(IntVector{0, 1}));
    EXPECT_TRUE(ker.contains(IntVector{1, 0}));
}

TEST(Averaging, Preconditions)
{
    FGAbelian z2{2, {}};
    AveragingInstance not_invariant{z2, {int_matrix(2, 2, {0, 1, 1, 0})}, {IntVector{1, 0}},
                                    int_matrix(2, 2, {1, 0, 0, 0})};
    EXPECT_THROW(equivariant_average(not_invariant), PreconditionError);
    AveragingInstance not_retraction{z2, {}, {IntVector{1, 0}}, int_matrix(2, 2, {2, 0, 0, 0})};
    EXPECT_THROW(equivariant_average(not_retraction), PreconditionError);
    AveragingInstance infinite{z2, {int_matrix(2, 2, {1, 1, 0, 1})}, {IntVector{1, 0}}, int_matrix(2, 2, {1, 0, 0, 0})};
    EXPECT_THROW(equivariant_average(infinite), PreconditionError);
}

TEST(Averaging, RandomInstancesAgainstHiddenBasis)
{
    std::mt19937 rng(25);
    for (int trial = 0; trial < 100; ++trial) {
        instances::GeneratedAveraging g = instances::random_averaging(rng);
        const AveragingInstance& inst = g.inst;
        const FGAbelian& m = inst.m;
        AveragingResult r = equivariant_average(inst);
        ASSERT_EQ(r.gamma_order(), g.gamma_order);
        EXPECT_TRUE(check_averaging(inst, r).empty());
        const int n = m.size();
        const Integer order(g.gamma_order);
        for (const IntMatrix& gm : inst.gamma)
            EXPECT_EQ(m.reduce(gm * r.rho), m.reduce(r.rho * gm));
        for (const IntVector& z : inst.z) {
            IntVector image = r.rho.apply(z);
            for (int i = 0; i < n; ++i)
                image[i] -= order * z[i];
            EXPECT_TRUE(m.is_zero(image));
        }
        for (const IntVector& k : r.kernel) {
            EXPECT_TRUE(m.is_zero(r.rho.apply(k)));
            for (const IntMatrix& gm : inst.gamma)
                EXPECT_TRUE(m.is_zero(r.rho.apply(gm.apply(k))));
        }
        Subgroup ker(m, r.kernel);
        for (int j = 0; j < n; ++j) {
            const IntVector h = r.rho.column(j);
            EXPECT_TRUE(instances::in_z(g, h));
            IntVector kappa(n);
            for (int i = 0; i < n; ++i)
                kappa[i] = (i == j ? order : Integer(0)) - h[i];
            EXPECT_TRUE(m.is_zero(r.rho.apply(kappa)));
            EXPECT_TRUE(ker.contains(kappa));
        }
    }
}
