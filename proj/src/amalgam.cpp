#include "covercomm/amalgam.hpp"

#include "covercomm/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace covercomm {

CommensurationReport validate_commensuration(const Commensuration& c)
{
    CommensurationReport r;
    if (c.h_rank < 0 || c.g1_rank < 0 || c.g2_rank < 0)
        r.problems.push_back("ranks must be non-negative");
    for (int side : {1, 2}) {
        const auto& images = c.images(side);
        const std::string tag = "i" + std::to_string(side);
        if (static_cast<int>(images.size()) != c.h_rank) {
            r.problems.push_back(tag + " has " + std::to_string(images.size()) + " images for h-rank " +
                                 std::to_string(c.h_rank));
            continue;
        }
        try {
            Embedding e(c.h_rank, c.target_rank(side), images);
            const long rank = e.image().free_rank();
            const auto idx = index(e.image());
            (side == 1 ? r.rank1 : r.rank2) = rank;
            (side == 1 ? r.index1 : r.index2) = idx;
            if (rank != c.h_rank)
                r.problems.push_back(tag + " is not injective: image rank " + std::to_string(rank) + " != " +
                                     std::to_string(c.h_rank));
            if (!idx)
                r.problems.push_back(tag + " image has infinite index");
        } catch (const InputError& e) {
            r.problems.push_back(tag + ": " + e.what());
        }
    }
    r.valid = r.problems.empty();
    r.trivial = r.valid && (*r.index1 == 1 || *r.index2 == 1);
    return r;
}

SubgroupGraph image_subgroup(const Commensuration& c, int side, const SubgroupGraph& n)
{
    std::vector<Word> words;
    for (const Word& w : basis(n))
        words.push_back(substitute(w, c.images(side)));
    return SubgroupGraph::from_generators(c.target_rank(side), words);
}

std::optional<NormalCommensuration> check_normal_extension(const Commensuration& c, const SubgroupGraph& n)
{
    if (n.rank() != c.h_rank || !index(n))
        return std::nullopt;
    NormalCommensuration nc{c, n, image_subgroup(c, 1, n), image_subgroup(c, 2, n), 0};
    if (!index(nc.image1) || !index(nc.image2) || !is_normal(nc.image1) || !is_normal(nc.image2))
        return std::nullopt;
    return nc;
}

std::optional<NormalCommensuration> find_normal_extension(const Commensuration& c, long max_index)
{
    const auto report = validate_commensuration(c);
    if (!report.valid)
        throw PreconditionError("invalid commensuration: " + report.problems.front());
    SubgroupGraph n = SubgroupGraph::whole(c.h_rank);
    for (int step = 0;; ++step) {
        if (*index(n) > max_index)
            return std::nullopt;
        SubgroupGraph next = n;
        for (int side : {1, 2}) {
            SubgroupGraph img = image_subgroup(c, side, n);
            if (!is_normal(img))
                next = intersect(next, preimage(normal_core(img), c.images(side)));
        }
        if (next == n) {
            auto nc = check_normal_extension(c, n);
            if (!nc)
                throw std::logic_error("normal extension iteration stabilized on a non-normal subgroup");
            nc->steps = step;
            return nc;
        }
        n = std::move(next);
    }
}

// ---------------------------------------------------------------------------

AmalgamReducer::AmalgamReducer(const Commensuration& c) : c_(c)
{
    const auto report = validate_commensuration(c);
    if (!report.valid)
        throw PreconditionError("invalid commensuration: " + report.problems.front());
    for (int side : {1, 2}) {
        Embedding e(c.h_rank, c.target_rank(side), c.images(side));
        SubgroupGraph image = e.image();
        auto reps = schreier_representatives(image);
        sides_.push_back(Side{std::move(e), std::move(image), std::move(reps)});
    }
}

Word AmalgamReducer::head_image(int factor, const Word& h) const
{
    return sides_[factor - 1].embedding.apply(h);
}

NormalForm AmalgamReducer::reduce(const std::vector<Syllable>& syllables) const
{
    for (const Syllable& s : syllables) {
        if (s.factor < 0 || s.factor > 2)
            throw InputError("syllable factor must be 0 (H), 1 (G1) or 2 (G2)");
        check_word(s.word, s.factor == 0 ? c_.h_rank : c_.target_rank(s.factor));
    }
    NormalForm nf;
    std::vector<Syllable> reversed; // reps, last one first
    for (auto it = syllables.rbegin(); it != syllables.rend(); ++it) {
        if (it->factor == 0) {
            nf.h = covercomm::reduce(concat(it->word, nf.h));
            continue;
        }
        const int f = it->factor;
        const Side& side = sides_[f - 1];
        Word x = concat(it->word, head_image(f, nf.h));
        if (!reversed.empty() && reversed.back().factor == f) {
            x = concat(x, reversed.back().word);
            reversed.pop_back();
        }
        x = covercomm::reduce(x);
        const Word& t = side.reps[side.image.trace(0, x)];
        auto h = side.embedding.pull_back(covercomm::reduce(concat(x, inverse(t))));
        if (!h)
            throw std::logic_error("coset representative does not split off an element of H");
        nf.h = std::move(*h);
        if (!t.empty())
            reversed.push_back({f, t});
    }
    nf.reps.assign(reversed.rbegin(), reversed.rend());
    return nf;
}

std::vector<Syllable> AmalgamReducer::syllables(const NormalForm& nf) const
{
    if (nf.reps.empty()) {
        if (nf.h.empty())
            return {};
        return {{1, head_image(1, nf.h)}};
    }
    std::vector<Syllable> out = nf.reps;
    out.front().word = covercomm::reduce(concat(head_image(out.front().factor, nf.h), out.front().word));
    return out;
}

std::vector<Syllable> amalgam_normal_form(const Commensuration& c, const std::vector<Syllable>& syllables)
{
    AmalgamReducer r(c);
    return r.syllables(r.reduce(syllables));
}

// ---------------------------------------------------------------------------

namespace {

bool injective_images(const std::vector<Perm>& img)
{
    for (std::size_t i = 1; i < img.size(); ++i)
        if (is_identity(img[i]))
            return false;
    return true;
}

void check_embedding(const Closure& c, const Closure& target, const std::vector<Perm>& images, const std::string& tag,
                     std::vector<std::string>& problems)
{
    if (static_cast<int>(images.size()) != c.num_gens()) {
        problems.push_back(tag + ": one image per generator of C required");
        return;
    }
    for (const Perm& p : images)
        if (target.find(p) < 0) {
            problems.push_back(tag + ": image " + perm_text(p) + " is not in the target group");
            return;
        }
    auto img = extend_homomorphism(c, images, target.element(0).size());
    if (!img)
        problems.push_back(tag + " is not a homomorphism");
    else if (!injective_images(*img))
        problems.push_back(tag + " is not injective");
}

} // namespace

std::vector<std::string> validate_amalgam(const FiniteAmalgam& fa)
{
    std::vector<std::string> problems;
    try {
        Closure a(fa.a), b(fa.b), c(fa.c);
        check_embedding(c, a, fa.c_in_a, "C -> A", problems);
        check_embedding(c, b, fa.c_in_b, "C -> B", problems);
        if (a.size() % c.size() != 0 || b.size() % c.size() != 0)
            problems.push_back("|C| does not divide |A| and |B|");
        if (a.size() != fa.order_a || b.size() != fa.order_b || c.size() != fa.order_c)
            problems.push_back("recorded orders do not match the groups");
    } catch (const PreconditionError& e) {
        problems.push_back(e.what());
    }
    return problems;
}

FiniteAmalgam quotient_amalgam(const NormalCommensuration& nc)
{
    if (!is_normal(nc.image1) || !is_normal(nc.image2))
        throw PreconditionError("quotient_amalgam requires normal images");
    auto group = [](const SubgroupGraph& s) {
        PermGroup g{s.num_vertices(), coset_action(s)};
        return g;
    };
    FiniteAmalgam fa;
    fa.a = group(nc.image1);
    fa.b = group(nc.image2);
    fa.c = group(nc.n);
    for (const Word& w : nc.base.i1)
        fa.c_in_a.push_back(fa.a.gens.empty() ? identity_perm(1) : evaluate(fa.a.gens, w));
    for (const Word& w : nc.base.i2)
        fa.c_in_b.push_back(fa.b.gens.empty() ? identity_perm(1) : evaluate(fa.b.gens, w));
    // Regular actions: orders are the indices.
    fa.order_a = fa.a.degree;
    fa.order_b = fa.b.degree;
    fa.order_c = fa.c.degree;
    return fa;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Perm> symmetric_group(int d)
{
    std::vector<Perm> all;
    Perm p = identity_perm(d);
    do
        all.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return all;
}

struct Hom {
    std::vector<Perm> gens;    ///< generator images
    std::vector<Perm> c_image; ///< images of the C generators
    bool trivial;
};

/// Homomorphisms from the group of `c` to the group of `sym` whose generator
/// images are listed in lexicographic order of the image tuple.
std::vector<Hom> homomorphisms(const Closure& c, const PermGroup& g, const std::vector<Perm>& c_gens,
                               const std::vector<Perm>& sym, bool injective, const SearchOptions& options)
{
    const int k = c.num_gens();
    std::vector<std::vector<int>> candidates(k);
    for (int s = 0; s < k; ++s) {
        const long ord = perm_order(g.gens[s]);
        for (int i = 0; i < static_cast<int>(sym.size()); ++i)
            if (ord % perm_order(sym[i]) == 0)
                candidates[s].push_back(i);
    }
    std::size_t total = 1;
    for (const auto& cand : candidates)
        total *= cand.size();

    std::vector<long> c_index;
    for (const Perm& p : c_gens)
        c_index.push_back(c.find(p));

    auto tuple = [&](std::size_t t) {
        std::vector<Perm> images(k);
        for (int s = k - 1; s >= 0; --s) {
            images[s] = sym[candidates[s][t % candidates[s].size()]];
            t /= candidates[s].size();
        }
        return images;
    };

    std::vector<Hom> homs;
    const std::size_t chunk = 1 << 16;
    for (std::size_t start = 0; start < total; start += chunk) {
        const std::size_t n = std::min(chunk, total - start);
        std::vector<std::optional<Hom>> found(n);
        parallel_for(
            n,
            [&](std::size_t i) {
                auto images = tuple(start + i);
                auto img = extend_homomorphism(c, images, static_cast<int>(sym[0].size()));
                if (!img || (injective && !injective_images(*img)))
                    return;
                Hom h{std::move(images), {}, true};
                for (long ci : c_index)
                    h.c_image.push_back((*img)[ci]);
                for (const Perm& p : h.gens)
                    h.trivial = h.trivial && is_identity(p);
                found[i] = std::move(h);
            },
            options);
        for (auto& h : found)
            if (h)
                homs.push_back(std::move(*h));
    }
    return homs;
}

std::vector<Perm> concat_perms(const std::vector<Perm>& x, const std::vector<Perm>& y)
{
    std::vector<Perm> out = x;
    out.insert(out.end(), y.begin(), y.end());
    return out;
}

} // namespace

std::optional<FiniteQuotientCertificate> find_finite_quotient(const FiniteAmalgam& fa, int max_degree,
                                                              bool require_injective_on_factors,
                                                              const SearchOptions& options)
{
    const auto problems = validate_amalgam(fa);
    if (!problems.empty())
        throw PreconditionError("invalid amalgam: " + problems.front());
    const Closure ca(fa.a), cb(fa.b);
    for (int d = 1; d <= max_degree; ++d) {
        const auto sym = symmetric_group(d);
        const auto homs_a = homomorphisms(ca, fa.a, fa.c_in_a, sym, require_injective_on_factors, options);
        const auto homs_b = homomorphisms(cb, fa.b, fa.c_in_b, sym, require_injective_on_factors, options);
        const std::size_t nb = homs_b.size();
        auto hit = first_match(
            homs_a.size() * nb,
            [&](std::size_t i) {
                const Hom& x = homs_a[i / nb];
                const Hom& y = homs_b[i % nb];
                return !(x.trivial && y.trivial) && x.c_image == y.c_image;
            },
            options);
        if (!hit)
            continue;
        FiniteQuotientCertificate cert;
        cert.degree = d;
        cert.a_images = homs_a[*hit / nb].gens;
        cert.b_images = homs_b[*hit % nb].gens;
        cert.image_order = group_order({d, concat_perms(cert.a_images, cert.b_images)});
        cert.injective_on_factors = require_injective_on_factors;
        return cert;
    }
    return std::nullopt;
}

std::vector<std::string> verify_finite_quotient(const FiniteAmalgam& fa, const FiniteQuotientCertificate& cert)
{
    std::vector<std::string> problems = validate_amalgam(fa);
    if (!problems.empty())
        return problems;
    if (cert.degree < 1)
        return {"degree must be positive"};
    if (cert.a_images.size() != fa.a.gens.size() || cert.b_images.size() != fa.b.gens.size())
        return {"one image per generator of A and of B required"};
    for (const Perm& p : concat_perms(cert.a_images, cert.b_images))
        if (static_cast<int>(p.size()) != cert.degree || !is_permutation(p))
            return {"image is not a permutation of degree " + std::to_string(cert.degree)};

    const Closure ca(fa.a), cb(fa.b);
    const auto img_a = extend_homomorphism(ca, cert.a_images, cert.degree);
    const auto img_b = extend_homomorphism(cb, cert.b_images, cert.degree);
    if (!img_a)
        problems.push_back("A-images do not define a homomorphism");
    if (!img_b)
        problems.push_back("B-images do not define a homomorphism");
    if (!problems.empty())
        return problems;
    for (std::size_t j = 0; j < fa.c_in_a.size(); ++j)
        if ((*img_a)[ca.find(fa.c_in_a[j])] != (*img_b)[cb.find(fa.c_in_b[j])])
            problems.push_back("assignments disagree on C generator " + std::to_string(j + 1));
    if (cert.injective_on_factors && !(injective_images(*img_a) && injective_images(*img_b)))
        problems.push_back("a factor image is not faithful");
    const long order = group_order({cert.degree, concat_perms(cert.a_images, cert.b_images)});
    if (order == 1)
        problems.push_back("image is trivial");
    if (order != cert.image_order)
        problems.push_back("image order is " + std::to_string(order) + ", certificate says " +
                           std::to_string(cert.image_order));
    return problems;
}

// ---------------------------------------------------------------------------

namespace {

std::set<Perm> subgroup_elements(int degree, const std::vector<Perm>& gens)
{
    Closure c({degree, gens});
    std::set<Perm> out;
    for (long i = 0; i < c.size(); ++i)
        out.insert(c.element(i));
    return out;
}

} // namespace

FreeKernelData free_kernel_data(const FiniteAmalgam& fa, const FiniteQuotientCertificate& cert)
{
    if (!cert.injective_on_factors)
        throw PreconditionError("free_kernel_data needs a certificate that is faithful on both factors");
    const auto problems = verify_finite_quotient(fa, cert);
    if (!problems.empty())
        throw PreconditionError("invalid certificate: " + problems.front());

    const int d = cert.degree;
    const Closure f({d, concat_perms(cert.a_images, cert.b_images)});
    const Closure ca(fa.a);
    const auto img_a = *extend_homomorphism(ca, cert.a_images, d);
    std::vector<Perm> c_images;
    for (const Perm& p : fa.c_in_a)
        c_images.push_back(img_a[ca.find(p)]);

    const std::set<Perm> pa = subgroup_elements(d, cert.a_images);
    const std::set<Perm> pb = subgroup_elements(d, cert.b_images);
    const std::set<Perm> pc = subgroup_elements(d, c_images);

    // Left cosets fS, keyed by their least element, numbered by first appearance.
    auto coset_ids = [&](const std::set<Perm>& s) {
        std::map<Perm, long> id;
        std::vector<long> of(f.size());
        for (long i = 0; i < f.size(); ++i) {
            Perm least;
            for (const Perm& x : s) {
                Perm y = compose(f.element(i), x);
                if (least.empty() || y < least)
                    least = std::move(y);
            }
            of[i] = id.emplace(least, static_cast<long>(id.size())).first->second;
        }
        return std::make_pair(of, static_cast<long>(id.size()));
    };
    const auto [of_a, na] = coset_ids(pa);
    const auto [of_b, nb] = coset_ids(pb);
    const auto [of_c, nc] = coset_ids(pc);

    Graph::Builder builder("J");
    for (long i = 0; i < na; ++i)
        builder.add_vertex(numbered_id("A", i, na));
    for (long i = 0; i < nb; ++i)
        builder.add_vertex(numbered_id("B", i, nb));
    std::vector<char> placed(nc, 0);
    for (long i = 0; i < f.size(); ++i) {
        if (placed[of_c[i]])
            continue;
        placed[of_c[i]] = 1;
        builder.add_edge(numbered_id("C", of_c[i], nc), numbered_id("A", of_a[i], na), numbered_id("B", of_b[i], nb));
    }

    FreeKernelData data;
    data.quotient = builder.build_shared();
    data.kernel_rank = free_rank(*data.quotient);
    const Rational order(f.size());
    data.formula = Rational(1) - order * (Rational(1, static_cast<long>(pa.size())) +
                                          Rational(1, static_cast<long>(pb.size())) -
                                          Rational(1, static_cast<long>(pc.size())));
    data.formula.canonicalize();
    if (data.formula != Rational(data.kernel_rank))
        throw std::logic_error("free kernel rank disagrees with the Euler characteristic formula");
    return data;
}

// ---------------------------------------------------------------------------

std::string to_string(ObstructionVerdict v)
{
    switch (v) {
    case ObstructionVerdict::Invalid:
        return "invalid commensuration";
    case ObstructionVerdict::ExtensionInconclusive:
        return "normal extension search inconclusive";
    case ObstructionVerdict::NoQuotientWithinBound:
        return "finite quotient search inconclusive";
    case ObstructionVerdict::NecessaryConditionsHold:
        return "no obstruction found (necessary conditions hold)";
    }
    return "?";
}

ObstructionReport obstruction_report(const Commensuration& c, const ObstructionBounds& bounds,
                                     const SearchOptions& options)
{
    ObstructionReport r;
    r.validation = validate_commensuration(c);
    if (!r.validation.valid) {
        r.verdict = ObstructionVerdict::Invalid;
        r.message = r.validation.problems.front();
        return r;
    }
    r.extension = find_normal_extension(c, bounds.max_index);
    if (!r.extension) {
        r.verdict = ObstructionVerdict::ExtensionInconclusive;
        r.message = "no simultaneously normal subgroup of index <= " + std::to_string(bounds.max_index) +
                    " in H; increase --max-index";
        return r;
    }
    r.amalgam = quotient_amalgam(*r.extension);
    if (r.amalgam->order_a == 1 && r.amalgam->order_b == 1) {
        r.verdict = ObstructionVerdict::NecessaryConditionsHold;
        r.message = "quotient amalgam is trivial; conditions hold vacuously";
        return r;
    }
    r.quotient = find_finite_quotient(*r.amalgam, bounds.max_degree, false, options);
    if (!r.quotient) {
        r.verdict = ObstructionVerdict::NoQuotientWithinBound;
        r.message = "no nontrivial quotient of degree <= " + std::to_string(bounds.max_degree) +
                    "; increase --max-degree";
        return r;
    }
    r.verdict = ObstructionVerdict::NecessaryConditionsHold;
    r.message = "normal extension of index " + std::to_string(r.extension->index_in_h()) +
                ", finite quotient of order " + std::to_string(r.quotient->image_order) + " in degree " +
                std::to_string(r.quotient->degree);
    return r;
}

} // namespace covercomm
