// Acceptance criteria 1-10: one PASS/FAIL line each; exit status 1 if any fails.

#include "covercomm/abelian.hpp"
#include "covercomm/amalgam.hpp"
#include "covercomm/covering.hpp"
#include "covercomm/graph.hpp"
#include "covercomm/perm.hpp"
#include "covercomm/stallings.hpp"
#include "covercomm/vh_complex.hpp"
#include "fixtures.hpp"
#include "random_instances.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace covercomm;

namespace {

struct Check {
    bool ok = true;
    std::string failure;
    std::ostringstream detail;

    void require(bool condition, const std::string& what)
    {
        if (!condition && ok) {
            ok = false;
            failure = "failed: " + what;
        }
    }
};

int failures = 0;

void criterion(int number, const char* title, double limit_seconds, const std::function<void(Check&)>& body)
{
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.failure = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0 && seconds >= limit_seconds && c.ok) {
        c.ok = false;
        c.failure = "took " + std::to_string(seconds) + " s, limit " + std::to_string(limit_seconds) + " s";
    }
    if (!c.ok)
        ++failures;
    std::printf("criterion %2d %s  %-34s %8.3f s  %s\n", number, c.ok ? "PASS" : "FAIL", title, seconds,
                (c.ok ? c.detail.str() : c.failure).c_str());
    std::fflush(stdout);
}

// ---------------------------------------------------------------------------

IntMatrix mul(const IntMatrix& a, const IntMatrix& b) { return a * b; }

bool unipotent_not_identity(const IntMatrix& g)
{
    const IntMatrix n = g - IntMatrix::identity(g.rows());
    IntMatrix p = n;
    for (int k = 1; k < g.rows(); ++k)
        p = p * n;
    return n != IntMatrix(g.rows(), g.cols()) && p == IntMatrix(g.rows(), g.cols());
}

FiniteAmalgam amalgam(PermGroup a, PermGroup b, PermGroup c, std::vector<Perm> ca, std::vector<Perm> cb)
{
    FiniteAmalgam fa{a, b, c, std::move(ca), std::move(cb), 0, 0, 0};
    fa.order_a = group_order(a);
    fa.order_b = group_order(b);
    fa.order_c = group_order(c);
    return fa;
}

Perm P(const char* cycles, int degree) { return parse_perm(cycles, degree); }

/// rank from the quotient graph (E - V + 1) and from the formula, computed here.
std::pair<long, Rational> kernel_rank_oracle(const FiniteAmalgam& fa, const FiniteQuotientCertificate& q)
{
    const FreeKernelData k = free_kernel_data(fa, q);
    const long graph_rank =
        static_cast<long>(k.quotient->num_edges()) - static_cast<long>(k.quotient->num_vertices()) + 1;
    std::vector<Perm> all = q.a_images;
    all.insert(all.end(), q.b_images.begin(), q.b_images.end());
    const long f = group_order({q.degree, all});
    const Rational formula =
        1 - Rational(f) * (Rational(1, fa.order_a) + Rational(1, fa.order_b) - Rational(1, fa.order_c));
    return {graph_rank, formula};
}

Perm random_perm(int n, std::mt19937& rng)
{
    Perm p = identity_perm(n);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

/// Orbit of 0 under the generators, as a set of points.
std::vector<int> orbit_of_zero(const std::vector<Perm>& perms)
{
    const int n = static_cast<int>(perms[0].size());
    std::vector<int> seen{0};
    std::vector<char> in(n, 0);
    in[0] = 1;
    for (std::size_t i = 0; i < seen.size(); ++i)
        for (const Perm& p : perms)
            for (int x : {p[seen[i]], perm_inverse(p)[seen[i]]})
                if (!in[x]) {
                    in[x] = 1;
                    seen.push_back(x);
                }
    return seen;
}

long factorial(long n) { return n <= 1 ? 1 : n * factorial(n - 1); }

} // namespace

int main()
{
    std::printf("acceptance criteria (exact arithmetic; tolerances are time limits only)\n");

    criterion(1, "counting identities (20,100)", 1, [](Check& c) {
        const GraphPtr g = fixtures::twenty_hundred();
        c.require(g->num_vertices() == 20 && g->num_edges() == 100, "instance has 20 vertices, 100 edges");
        c.require(euler_characteristic(*g) == -80, "euler characteristic -80");
        c.require(free_rank(*g) == 81, "free rank 81");
        c.detail << "chi = " << euler_characteristic(*g) << ", rank = " << free_rank(*g);
    });

    criterion(2, "average degree after folds", 1, [](Check& c) {
        c.require(average_degree_after_folds(20, 100, 0) == Rational(10), "A(0) = 10");
        for (long f = 0; f <= 18; ++f) {
            const Rational a = average_degree_after_folds(20, 100, f);
            Rational want(200 - 2 * f, 20 - f);
            want.canonicalize();
            c.require(a == want, "A(f) = (200 - 2f)/(20 - f)");
            if (f > 0)
                c.require(a > average_degree_after_folds(20, 100, f - 1), "A strictly increasing");
        }
        c.detail << "A(0) = 10, A(18) = " << to_string(average_degree_after_folds(20, 100, 18));
    });

    criterion(3, "GL2(Z) obstruction D4 vs D6", 5, [](Check& c) {
        const auto d4 = closure(instances::d4());
        const auto d6 = closure(instances::d6());
        c.require(d4.verdict == ClosureVerdict::Finite && d4.elements.size() == 8, "closure(D4) finite of order 8");
        c.require(d6.verdict == ClosureVerdict::Finite && d6.elements.size() == 12, "closure(D6) finite of order 12");
        std::vector<IntMatrix> both = instances::d4();
        for (const IntMatrix& g : instances::d6())
            both.push_back(g);
        const auto u = closure(both);
        c.require(u.verdict == ClosureVerdict::Infinite && u.witness, "closure(D4 u D6) infinite with witness");
        if (u.witness) {
            const auto& w = *u.witness;
            IntMatrix g = IntMatrix::identity(2);
            for (int k : w.word)
                g = mul(g, both.at(k));
            c.require(w.word.size() <= 2, "witness word length <= 2");
            c.require(g == w.matrix, "witness matrix is the product of its word");
            c.require(unipotent_not_identity(g * g), "witness squared is unipotent and not the identity");
            c.detail << "witness " << generator_word_text(w.word) << " = " << matrix_text(w.matrix) << "; ";
        }
        std::mt19937 rng(2024);
        const auto b4 = instances::invariant_bases(instances::d4());
        const auto b6 = instances::invariant_bases(instances::d6());
        int tried = 0;
        while (tried < 100) {
            AbelianCommensuration a{"R", 2, b4[rng() % b4.size()], b6[rng() % b6.size()], instances::d4(),
                                    instances::d6()};
            if (!validate_abelian(a).empty())
                continue;
            ++tried;
            c.require(is_out_finite(a).verdict == OutFiniteVerdict::NotOutFinite, "random embedding not out-finite");
        }
        c.detail << tried << " random embeddings not out-finite";
    });

    criterion(4, "abelian completion", 1, [](Check& c) {
        const AbelianCommensuration same{"D4", 2, IntMatrix::identity(2), instances::m2(2, 0, 0, 2), instances::d4(),
                                         instances::d4()};
        const CompletionResult r = complete_abelian(same);
        c.require(r.completion.has_value(), "completion exists");
        if (r.completion) {
            const AbelianCompletion& k = *r.completion;
            c.require(verify_completion(same, k).empty(), "verify_completion passes");
            c.require(k.index1 > 0 && k.index2 > 0, "indices finite and positive");
            // C_2 = I/2 scales the lattice by 1/2 and fixes the holonomy, so
            // the image of G_2 is four times larger than that of G_1.
            c.require(k.index1 == 4 * k.index2, "[K:G1] = 4 [K:G2]");
            c.detail << "[K:G1] = " << k.index1 << ", [K:G2] = " << k.index2 << "; ";
        }
        const AbelianCommensuration mixed{"D4D6", 2, IntMatrix::identity(2), IntMatrix::identity(2), instances::d4(),
                                          instances::d6()};
        const CompletionResult m = complete_abelian(mixed);
        c.require(!m.completion && m.out.verdict == OutFiniteVerdict::NotOutFinite, "D4 vs D6 is NotOutFinite");
        c.detail << "D4 vs D6: " << to_string(m.out.verdict);
    });

    criterion(5, "infinite dihedral pipeline", 1, [](Check& c) {
        const Commensuration zz{"zz", 1, 1, 1, {{1, 1}}, {{1, 1}}};
        auto nc = find_normal_extension(zz, 10);
        c.require(nc && nc->steps == 0 && nc->index_in_h() == 1, "normal extension at step 0");
        if (!nc)
            return;
        const FiniteAmalgam fa = quotient_amalgam(*nc);
        c.require(fa.order_a == 2 && fa.order_b == 2 && fa.order_c == 1, "quotient amalgam C2 * C2");
        auto q = find_finite_quotient(fa, 4, false);
        c.require(q && q->degree == 2 && verify_finite_quotient(fa, *q).empty(), "finite quotient at degree 2");
        // The Klein four-group certificate at degree 4, faithful on both factors.
        const FiniteQuotientCertificate klein{4, {P("(1 2)(3 4)", 4)}, {P("(1 3)(2 4)", 4)}, 4, true};
        c.require(verify_finite_quotient(fa, klein).empty(), "degree-4 certificate verifies");
        const auto [graph_rank, formula] = kernel_rank_oracle(fa, klein);
        c.require(free_kernel_data(fa, klein).kernel_rank == 1 && graph_rank == 1 && formula == 1,
                  "free kernel rank 1");
        c.detail << "steps 0, |A|=|B|=2, |C|=1, quotient degree " << (q ? q->degree : 0) << ", kernel rank "
                 << graph_rank;
    });

    criterion(6, "free-kernel formula", 1, [](Check& c) {
        const PermGroup c2{2, {P("(1 2)", 2)}};
        const PermGroup c3{3, {P("(1 2 3)", 3)}};
        struct Case {
            const char* name;
            FiniteAmalgam fa;
            FiniteQuotientCertificate q;
            long rank;
        };
        const std::vector<Case> cases = {
            {"C2*C2 -> C2xC2", amalgam(c2, c2, {1, {}}, {}, {}),
             {4, {P("(1 2)(3 4)", 4)}, {P("(1 3)(2 4)", 4)}, 4, true}, 1},
            {"C2*C3 -> Sym(3)", amalgam(c2, c3, {1, {}}, {}, {}), {3, {P("(1 2)", 3)}, {P("(1 2 3)", 3)}, 6, true}, 2},
            {"C2*_C2 C2 -> C2", amalgam(c2, c2, c2, c2.gens, c2.gens), {2, {P("(1 2)", 2)}, {P("(1 2)", 2)}, 2, true},
             0},
        };
        for (const Case& k : cases) {
            c.require(verify_finite_quotient(k.fa, k.q).empty(), std::string(k.name) + " certificate verifies");
            const auto [graph_rank, formula] = kernel_rank_oracle(k.fa, k.q);
            const FreeKernelData d = free_kernel_data(k.fa, k.q);
            c.require(graph_rank == k.rank && formula == k.rank && d.kernel_rank == k.rank && d.formula == k.rank,
                      std::string(k.name) + " rank");
            c.detail << k.name << ": " << graph_rank << "; ";
        }
    });

    criterion(7, "Stallings suite (200 subgroups)", 60, [](Check& c) {
        std::mt19937 rng(7);
        int made = 0;
        long words_checked = 0;
        while (made < 200) {
            const int rank = 2 + static_cast<int>(rng() % 2);
            const int n = 1 + static_cast<int>(rng() % 8);
            auto action = [&] {
                std::vector<Perm> perms;
                for (int i = 0; i < rank; ++i)
                    perms.push_back(random_perm(n, rng));
                return perms;
            };
            const std::vector<Perm> perms = action();
            if (static_cast<int>(orbit_of_zero(perms).size()) != n)
                continue; // keep transitive actions, so the index is n
            ++made;
            const SubgroupGraph s = SubgroupGraph::from_action(perms);
            c.require(index(s) == n, "index equals the orbit size");
            c.require(static_cast<long>(basis(s).size()) - 1 == static_cast<long>(n) * (rank - 1),
                      "Nielsen-Schreier rank - 1 = index (n - 1)");

            const SubgroupGraph core = normal_core(s);
            c.require(is_normal(core), "normal core is normal");
            const auto ci = index(core);
            c.require(ci && factorial(n) % *ci == 0, "core index divides index!");
            c.require(ci == group_order({n, perms}), "core index is the order of the permutation image");

            // Intersection against a second random subgroup of the same rank,
            // checked on every reduced word of length <= 8 through the actions.
            std::vector<Perm> other;
            do {
                other.clear();
                const int m = 1 + static_cast<int>(rng() % 8);
                for (int i = 0; i < rank; ++i)
                    other.push_back(random_perm(m, rng));
            } while (orbit_of_zero(other).size() != other[0].size());
            const SubgroupGraph t = SubgroupGraph::from_action(other);
            const SubgroupGraph x = intersect(s, t);
            std::vector<Perm> inv1, inv2;
            for (const Perm& p : perms)
                inv1.push_back(perm_inverse(p));
            for (const Perm& p : other)
                inv2.push_back(perm_inverse(p));
            bool agree = true;
            std::function<void(int, int, int, Letter, int)> walk = [&](int p1, int p2, int px, Letter last,
                                                                       int depth) {
                ++words_checked;
                const bool in_both = p1 == 0 && p2 == 0;
                const bool in_x = px == 0;
                agree = agree && in_both == in_x;
                if (depth == 8)
                    return;
                for (int g = 1; g <= rank; ++g)
                    for (Letter y : {g, -g}) {
                        if (y == -last)
                            continue;
                        const int q1 = y > 0 ? perms[g - 1][p1] : inv1[g - 1][p1];
                        const int q2 = y > 0 ? other[g - 1][p2] : inv2[g - 1][p2];
                        walk(q1, q2, px < 0 ? -1 : x.target(px, y), y, depth + 1);
                    }
            };
            walk(0, 0, 0, 0, 0);
            c.require(agree, "intersect agrees with membership in both subgroups");
        }
        c.detail << made << " subgroups, " << words_checked << " words";
    });

    criterion(8, "common cover K4 / K3,3", 300, [](Check& c) {
        const GraphPtr k4 = fixtures::k4(), k33 = fixtures::k33();
        c.require(same_universal_cover(*k4, *k33), "same universal cover");
        const CommonCoverResult r = find_common_cover(k4, k33, 96);
        c.require(r.status == SearchStatus::Found && r.cover, "cover found within 96 vertices");
        if (!r.cover)
            return;
        const CommonCover& cc = *r.cover;
        const CoveringReport r1 = analyze_covering(cc.p1), r2 = analyze_covering(cc.p2);
        c.require(r1.is_covering && r2.is_covering, "both legs are coverings");
        c.require(is_connected(*cc.z) && cc.z->num_vertices() <= 96, "cover is connected, at most 96 vertices");
        const long chi = euler_characteristic(*cc.z);
        c.require(chi == *r1.degree * euler_characteristic(*k4) && chi == *r2.degree * euler_characteristic(*k33),
                  "chi(Z) = d1 chi(K4) = d2 chi(K3,3)");
        c.detail << "|V(Z)| = " << cc.z->num_vertices() << ", degrees " << *r1.degree << ", " << *r2.degree
                 << ", chi " << chi;
    });

    criterion(9, "VH pipeline on the torus", 1, [](Check& c) {
        Graph::Builder b("T");
        b.add_vertex("v").add_edge("a", "v", "v").add_edge("b", "v", "v");
        const GraphPtr t = b.build_shared();
        const SquareComplex torus = build_complex(t, relator_squares(*t, "abAB"));
        const VHResult vh = vh_partition(torus);
        c.require(vh.partition && vh.partition->vertical_edges() == std::vector<int>{0} &&
                      vh.partition->horizontal_edges() == std::vector<int>{1},
                  "partition {a} / {b}");
        const CrossSectionAnalysis a = analyze_cross_section(torus);
        c.require(a.cross && a.cross->z->num_vertices() == 1 && a.cross->z->num_edges() == 1, "z: 1 vertex, 1 loop");
        c.require(a.coverings() && a.cover1.degree == 1 && a.cover2.degree == 1, "both projections degree-1 coverings");
        if (a.coverings()) {
            const CommensurationReport rep = validate_commensuration(commensuration_from_cross_section(*a.cross));
            c.require(rep.valid && rep.trivial, "induced commensuration is trivial");
        }
        SquareComplex mutant = torus;
        mutant.squares.push_back(mutant.squares[0]);
        const CrossSectionAnalysis m = analyze_cross_section(build_complex(t, mutant.squares));
        c.require(m.cross && !m.coverings(), "mutant is not a covering");
        bool named = false;
        if (m.cross)
            for (const std::string& v : m.cover1.describe(*m.cross->z))
                named = named || v == "vertex a: not locally injective";
        c.require(named, "violation names vertex a");
        c.detail << "mutant: vertex a: not locally injective";
    });

    criterion(10, "equivariant averaging (60 instances)", 30, [](Check& c) {
        std::mt19937 rng(10);
        int n_inst = 0;
        for (; n_inst < 60; ++n_inst) {
            const instances::GeneratedAveraging g = instances::random_averaging(rng);
            const AveragingInstance& inst = g.inst;
            const FGAbelian& m = inst.m;
            const int n = m.size();
            const AveragingResult r = equivariant_average(inst);
            c.require(r.gamma_order() == g.gamma_order && g.gamma_order <= 8, "|Gamma| matches, at most 8");
            const IntMatrix& rho = r.rho;
            const Integer order(g.gamma_order);
            for (const IntMatrix& gam : inst.gamma)
                c.require(m.reduce(rho * gam) == m.reduce(gam * rho), "rho is Gamma-equivariant");
            for (const IntVector& z : inst.z) {
                IntVector want = z;
                for (Integer& x : want)
                    x *= order;
                c.require(m.reduce(rho.apply(z)) == m.reduce(want), "rho restricted to Z is |Gamma| id");
            }
            for (const IntVector& k : r.kernel) {
                c.require(m.is_zero(rho.apply(k)), "kernel generators lie in ker rho");
                for (const IntMatrix& gam : inst.gamma)
                    c.require(m.is_zero(rho.apply(gam.apply(k))), "ker rho is Gamma-invariant");
            }
            for (int i = 0; i < n; ++i) {
                IntVector e(n, 0);
                e[i] = 1;
                const IntVector image = m.reduce(rho.apply(e));
                c.require(instances::in_z(g, image), "rho(M) lies in Z");
                IntVector rest(n);
                for (int j = 0; j < n; ++j)
                    rest[j] = order * e[j] - image[j];
                // |Gamma| e = rho(e) + (|Gamma| e - rho(e)), the second term in ker rho.
                c.require(m.is_zero(rho.apply(rest)), "|Gamma| M lies in Z + ker rho");
            }
        }
        c.detail << n_inst << " instances";
    });

    std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
