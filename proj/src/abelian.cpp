#include "covercomm/abelian.hpp"

#include "covercomm/error.hpp"

#include <algorithm>
#include <map>

namespace covercomm {

namespace {

bool is_unit(const Integer& x) { return x == 1 || x == -1; }

IntMatrix product(const std::vector<IntMatrix>& gens, const std::vector<int>& word, int dim)
{
    IntMatrix m = IntMatrix::identity(dim);
    for (int s : word)
        m = m * gens.at(s);
    return m;
}

bool is_zero(const IntMatrix& m)
{
    return std::all_of(m.entries().begin(), m.entries().end(), [](const Integer& x) { return x == 0; });
}

/// Why h = g^e has infinite order, or empty if this power proves nothing.
std::string infinite_reason(const IntMatrix& h, long e)
{
    const int d = h.rows();
    const IntMatrix id = IntMatrix::identity(d);
    const std::string name = e == 1 ? "g" : "g^" + std::to_string(e);
    const Integer t = trace(h);
    if (abs(t) > d)
        return "|tr(" + name + ")| = " + to_string(Integer(abs(t))) + " > " + std::to_string(d);
    if (h != id && is_zero(power(h - id, d)))
        return name + " is unipotent and not the identity";
    return {};
}

} // namespace

std::optional<InfiniteOrderWitness> infinite_order_certificate(const IntMatrix& g, long max_exponent)
{
    const IntMatrix id = IntMatrix::identity(g.rows());
    IntMatrix h = id;
    for (long e = 1; e <= max_exponent; ++e) {
        h = h * g;
        if (h == id)
            return std::nullopt;
        std::string reason = infinite_reason(h, e);
        if (!reason.empty())
            return InfiniteOrderWitness{{}, g, e, std::move(reason)};
    }
    return std::nullopt;
}

bool check_witness(const InfiniteOrderWitness& w, const std::vector<IntMatrix>& generators)
{
    if (generators.empty() || w.exponent < 1)
        return false;
    for (int s : w.word)
        if (s < 0 || s >= static_cast<int>(generators.size()))
            return false;
    const int d = generators[0].rows();
    if (product(generators, w.word, d) != w.matrix)
        return false;
    return !infinite_reason(power(w.matrix, w.exponent), w.exponent).empty();
}

std::string generator_word_text(const std::vector<int>& word)
{
    if (word.empty())
        return "1";
    std::string out;
    for (int s : word)
        out += (out.empty() ? "g" : " g") + std::to_string(s + 1);
    return out;
}

MatrixGroupClosure closure(const std::vector<IntMatrix>& generators, std::optional<long> cap, int dim)
{
    const int d = generators.empty() ? dim : generators[0].rows();
    if (d < 1)
        throw PreconditionError("closure needs a dimension");
    for (std::size_t s = 0; s < generators.size(); ++s) {
        const IntMatrix& g = generators[s];
        if (g.rows() != d || g.cols() != d)
            throw PreconditionError("generator " + std::to_string(s + 1) + " is not " + std::to_string(d) + "x" +
                                    std::to_string(d));
        const Integer det = determinant(g);
        if (!is_unit(det))
            throw PreconditionError("generator " + std::to_string(s + 1) + " " + matrix_text(g) + " has determinant " +
                                    to_string(det));
    }
    if (!cap) {
        if (d > 2)
            throw PreconditionError("an order cap is required in dimension " + std::to_string(d));
        cap = kGL2Cap;
    }

    MatrixGroupClosure c;
    c.generators = generators;
    c.cap = *cap;
    std::map<IntMatrix, long> seen;
    c.elements.push_back(IntMatrix::identity(d));
    c.words.emplace_back();
    seen.emplace(c.elements[0], 0);

    std::size_t head = 0;
    auto expand = [&] {
        for (std::size_t s = 0; s < generators.size(); ++s) {
            IntMatrix next = c.elements[head] * generators[s];
            if (seen.emplace(next, static_cast<long>(c.elements.size())).second) {
                std::vector<int> w = c.words[head];
                w.push_back(static_cast<int>(s));
                c.elements.push_back(std::move(next));
                c.words.push_back(std::move(w));
            }
        }
        ++head;
    };

    while (head < c.elements.size() && static_cast<long>(c.elements.size()) <= *cap)
        expand();
    if (static_cast<long>(c.elements.size()) <= *cap) {
        c.verdict = ClosureVerdict::Finite;
        return c;
    }

    // Too many elements: look for an infinite-order element in shortlex order.
    const long limit = std::max<long>(64 * *cap, 4096);
    for (std::size_t j = 0;; ++j) {
        while (j >= c.elements.size() && head < c.elements.size() && static_cast<long>(c.elements.size()) < limit)
            expand();
        if (j >= c.elements.size())
            break;
        if (auto w = infinite_order_certificate(c.elements[j], *cap)) {
            w->word = c.words[j];
            c.witness = std::move(w);
            c.verdict = ClosureVerdict::Infinite;
            return c;
        }
        if (static_cast<long>(j) >= limit)
            break;
    }
    c.verdict = ClosureVerdict::Inconclusive;
    return c;
}

// ---------------------------------------------------------------------------

std::vector<std::string> validate_abelian(const AbelianCommensuration& c, std::optional<long> cap)
{
    std::vector<std::string> problems;
    if (c.d < 1)
        return {"dimension must be positive"};
    for (int side : {1, 2}) {
        const std::string mi = "m" + std::to_string(side), pi = "p" + std::to_string(side);
        const IntMatrix& m = c.m(side);
        if (m.rows() != c.d || m.cols() != c.d) {
            problems.push_back(mi + " is not " + std::to_string(c.d) + "x" + std::to_string(c.d));
            continue;
        }
        if (determinant(m) == 0) {
            problems.push_back(mi + " is singular");
            continue;
        }
        const RatMatrix minv = inverse(to_rational(m));
        bool shapes_ok = true;
        for (std::size_t k = 0; k < c.p(side).size(); ++k) {
            const IntMatrix& a = c.p(side)[k];
            const std::string tag = pi + " generator " + std::to_string(k + 1) + " " + matrix_text(a);
            if (a.rows() != c.d || a.cols() != c.d) {
                problems.push_back(tag + " has the wrong size");
                shapes_ok = false;
                continue;
            }
            if (!is_unit(determinant(a))) {
                problems.push_back(tag + " is not in GL_" + std::to_string(c.d) + "(Z)");
                shapes_ok = false;
                continue;
            }
            if (!is_integral(minv * to_rational(a) * to_rational(m)))
                problems.push_back(tag + " does not preserve the lattice " + mi + " Z^" + std::to_string(c.d));
        }
        if (shapes_ok && closure(c.p(side), cap, c.d).verdict != ClosureVerdict::Finite)
            problems.push_back(pi + " does not generate a finite group within the cap");
    }
    return problems;
}

std::vector<IntMatrix> transported_holonomy(const AbelianCommensuration& c, int side)
{
    const RatMatrix m = to_rational(c.m(side));
    const RatMatrix minv = inverse(m);
    std::vector<IntMatrix> out;
    for (const IntMatrix& a : c.p(side))
        out.push_back(to_integer(minv * to_rational(a) * m));
    return out;
}

std::string to_string(OutFiniteVerdict v)
{
    switch (v) {
    case OutFiniteVerdict::OutFinite:
        return "out-finite";
    case OutFiniteVerdict::NotOutFinite:
        return "not out-finite";
    case OutFiniteVerdict::Inconclusive:
        return "inconclusive";
    }
    return "?";
}

OutFiniteResult is_out_finite(const AbelianCommensuration& c, std::optional<long> cap)
{
    const auto problems = validate_abelian(c, cap);
    if (!problems.empty())
        throw PreconditionError("invalid abelian commensuration: " + problems.front());
    std::vector<IntMatrix> gens = transported_holonomy(c, 1);
    for (IntMatrix& a : transported_holonomy(c, 2))
        gens.push_back(std::move(a));
    OutFiniteResult r;
    r.gamma = closure(gens, cap, c.d);
    switch (r.gamma.verdict) {
    case ClosureVerdict::Finite:
        r.verdict = OutFiniteVerdict::OutFinite;
        break;
    case ClosureVerdict::Infinite:
        r.verdict = OutFiniteVerdict::NotOutFinite;
        break;
    case ClosureVerdict::Inconclusive:
        r.verdict = OutFiniteVerdict::Inconclusive;
        break;
    }
    return r;
}

// ---------------------------------------------------------------------------

namespace {

RatVector to_rational(const IntVector& v)
{
    return RatVector(v.begin(), v.end());
}

Lattice column_lattice(const RatMatrix& m)
{
    std::vector<RatVector> cols;
    for (int j = 0; j < m.cols(); ++j)
        cols.push_back(m.column(j));
    return Lattice::from_generators(m.rows(), cols);
}

} // namespace

CompletionResult complete_abelian(const AbelianCommensuration& c, std::optional<long> cap)
{
    CompletionResult result;
    result.out = is_out_finite(c, cap);
    if (result.out.verdict != OutFiniteVerdict::OutFinite)
        return result;

    AbelianCompletion comp;
    comp.gamma = result.out.gamma.elements;
    comp.c1 = inverse(to_rational(c.m1));
    comp.c2 = inverse(to_rational(c.m2));
    std::vector<RatVector> gens;
    for (const RatMatrix* ci : {&comp.c1, &comp.c2})
        for (const IntMatrix& g : comp.gamma) {
            const RatMatrix image = to_rational(g) * *ci;
            for (int j = 0; j < c.d; ++j)
                gens.push_back(image.column(j));
        }
    comp.l = Lattice::from_generators(c.d, gens);

    const Integer gamma_order = static_cast<long>(comp.gamma.size());
    for (int side : {1, 2}) {
        const RatMatrix& ci = side == 1 ? comp.c1 : comp.c2;
        const long p_order = static_cast<long>(closure(c.p(side), cap, c.d).elements.size());
        const Integer index = comp.l.index_of(column_lattice(ci)) * gamma_order / p_order;
        (side == 1 ? comp.index1 : comp.index2) = index;
    }
    result.completion = std::move(comp);
    return result;
}

std::vector<std::string> verify_completion(const AbelianCommensuration& c, const AbelianCompletion& comp)
{
    // A valid completion embeds both holonomy groups in Gamma, so |Gamma| caps them.
    std::vector<std::string> problems =
        validate_abelian(c, std::max<long>(1, static_cast<long>(comp.gamma.size())));
    if (!problems.empty())
        return problems;
    const int d = c.d;
    if (comp.l.dim() != d || comp.c1.rows() != d || comp.c2.rows() != d || comp.c1.cols() != d ||
        comp.c2.cols() != d)
        return {"completion has the wrong dimension"};

    // Gamma is a finite subgroup of GL_d(Z).
    std::map<IntMatrix, int> in_gamma;
    for (const IntMatrix& g : comp.gamma) {
        if (g.rows() != d || g.cols() != d || !is_unit(determinant(g)))
            return {"Gamma element " + matrix_text(g) + " is not in GL_" + std::to_string(d) + "(Z)"};
        in_gamma.emplace(g, 0);
    }
    if (!in_gamma.count(IntMatrix::identity(d)))
        problems.push_back("Gamma does not contain the identity");
    [&] {
        for (const IntMatrix& g : comp.gamma)
            for (const IntMatrix& h : comp.gamma)
                if (!in_gamma.count(g * h)) {
                    problems.push_back("Gamma is not closed: " + matrix_text(g) + " * " + matrix_text(h));
                    return;
                }
    }();
    [&] {
        for (const IntMatrix& g : comp.gamma)
            for (const RatVector& b : comp.l.basis()) {
                const RatVector image = to_rational(g).apply(b);
                if (!comp.l.contains(image)) {
                    problems.push_back("L is not invariant under " + matrix_text(g) + ": " + vector_text(b) +
                                       " maps to " + vector_text(image));
                    return;
                }
            }
    }();

    if (comp.c1 * to_rational(c.m1) != comp.c2 * to_rational(c.m2))
        problems.push_back("j1 h1 and j2 h2 differ on N");

    for (int side : {1, 2}) {
        const RatMatrix& ci = side == 1 ? comp.c1 : comp.c2;
        const std::string tag = "j" + std::to_string(side);
        if (determinant(ci) == 0) {
            problems.push_back(tag + " conjugator is singular");
            continue;
        }
        const RatMatrix ci_inv = inverse(ci);
        for (int k = 0; k < d; ++k) {
            IntVector e(d, 0);
            e[k] = 1;
            const RatVector t = ci.apply(to_rational(e));
            if (!comp.l.contains(t))
                problems.push_back(tag + " sends translation e" + std::to_string(k + 1) + " to " + vector_text(t) +
                                   ", outside L");
        }
        std::vector<IntMatrix> holonomy;
        for (std::size_t k = 0; k < c.p(side).size(); ++k) {
            const RatMatrix a = ci * to_rational(c.p(side)[k]) * ci_inv;
            if (!is_integral(a) || !in_gamma.count(to_integer(a)))
                problems.push_back(tag + " sends holonomy generator " + std::to_string(k + 1) + " outside Gamma");
            else
                holonomy.push_back(to_integer(a));
        }
        if (!problems.empty())
            continue;
        const Lattice image = column_lattice(ci);
        const long p_order =
            static_cast<long>(closure(holonomy, static_cast<long>(comp.gamma.size()), d).elements.size());
        const Integer numerator = comp.l.index_of(image) * static_cast<long>(comp.gamma.size());
        const Integer recorded = side == 1 ? comp.index1 : comp.index2;
        if (numerator % p_order != 0 || numerator / p_order != recorded || recorded <= 0)
            problems.push_back("[K:G" + std::to_string(side) + "] is " + to_string(Integer(numerator / p_order)) +
                               ", completion records " + to_string(recorded));
    }
    return problems;
}

// ---------------------------------------------------------------------------

namespace {

void check_shape(const FGAbelian& m, const IntMatrix& a, const std::string& what)
{
    if (a.rows() != m.size() || a.cols() != m.size())
        throw PreconditionError(what + " is not " + std::to_string(m.size()) + "x" + std::to_string(m.size()));
    if (!m.is_endomorphism(a))
        throw PreconditionError(what + " does not respect the torsion relations");
}

IntVector times(const Integer& k, IntVector v)
{
    for (Integer& x : v)
        x *= k;
    return v;
}

IntVector minus(IntVector a, const IntVector& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] -= b[i];
    return a;
}

} // namespace

AveragingResult equivariant_average(const AveragingInstance& inst, long max_order)
{
    const FGAbelian& m = inst.m;
    const int n = m.size();
    for (std::size_t k = 0; k < inst.gamma.size(); ++k)
        check_shape(m, inst.gamma[k], "gamma generator " + std::to_string(k + 1));
    check_shape(m, inst.rho0, "rho0");
    for (const IntVector& z : inst.z)
        if (static_cast<int>(z.size()) != n)
            throw PreconditionError("Z generator of the wrong length");

    // Gamma as reduced matrices.
    const IntMatrix id = IntMatrix::identity(n);
    AveragingResult r;
    std::map<IntMatrix, long> seen;
    r.gamma_elements.push_back(m.reduce(id));
    seen.emplace(r.gamma_elements[0], 0);
    for (std::size_t i = 0; i < r.gamma_elements.size(); ++i)
        for (const IntMatrix& g : inst.gamma) {
            IntMatrix next = m.reduce(r.gamma_elements[i] * g);
            if (seen.emplace(next, static_cast<long>(r.gamma_elements.size())).second) {
                if (static_cast<long>(r.gamma_elements.size()) >= max_order)
                    throw PreconditionError("Gamma has more than " + std::to_string(max_order) + " elements");
                r.gamma_elements.push_back(std::move(next));
            }
        }
    std::vector<long> inverse_of(r.gamma_elements.size(), -1);
    for (std::size_t i = 0; i < r.gamma_elements.size(); ++i)
        for (std::size_t j = 0; j < r.gamma_elements.size() && inverse_of[i] < 0; ++j)
            if (m.reduce(r.gamma_elements[i] * r.gamma_elements[j]) == r.gamma_elements[0])
                inverse_of[i] = static_cast<long>(j);
    for (std::size_t i = 0; i < r.gamma_elements.size(); ++i)
        if (inverse_of[i] < 0)
            throw PreconditionError("Gamma generators are not automorphisms of M");

    const Subgroup zs(m, inst.z);
    for (std::size_t k = 0; k < inst.gamma.size(); ++k)
        for (const IntVector& z : inst.z)
            if (!zs.contains(inst.gamma[k].apply(z)))
                throw PreconditionError("Z is not invariant under gamma generator " + std::to_string(k + 1) + ": " +
                                        vector_text(z) + " leaves Z");
    for (int j = 0; j < n; ++j)
        if (!zs.contains(inst.rho0.column(j)))
            throw PreconditionError("rho0 does not map into Z");
    for (const IntVector& z : inst.z)
        if (!m.is_zero(minus(inst.rho0.apply(z), z)))
            throw PreconditionError("rho0 is not the identity on Z: " + vector_text(z));

    IntMatrix rho(n, n);
    for (std::size_t i = 0; i < r.gamma_elements.size(); ++i)
        rho = rho + r.gamma_elements[i] * inst.rho0 * r.gamma_elements[inverse_of[i]];
    r.rho = m.reduce(rho);

    // ker rho: v with rho v in the relation lattice.
    const auto rel = m.relations();
    IntMatrix system(n, n + static_cast<int>(rel.size()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            system(i, j) = r.rho(i, j);
    for (std::size_t k = 0; k < rel.size(); ++k)
        system.set_column(n + static_cast<int>(k), rel[k]);
    const IntMatrix kernel = integer_kernel(system);
    IntMatrix rows(kernel.cols(), n);
    for (int j = 0; j < kernel.cols(); ++j)
        for (int i = 0; i < n; ++i)
            rows(j, i) = kernel(i, j);
    const IntMatrix h = hermite_rows(rows);
    for (int i = 0; i < h.rows(); ++i) {
        IntVector v = m.reduce(h.row(i));
        if (!m.is_zero(v))
            r.kernel.push_back(std::move(v));
    }
    return r;
}

std::vector<std::string> check_averaging(const AveragingInstance& inst, const AveragingResult& result)
{
    std::vector<std::string> problems;
    const FGAbelian& m = inst.m;
    const int n = m.size();
    const Integer order = result.gamma_order();
    const IntMatrix& rho = result.rho;
    for (std::size_t k = 0; k < inst.gamma.size(); ++k)
        if (m.reduce(inst.gamma[k] * rho) != m.reduce(rho * inst.gamma[k]))
            problems.push_back("rho is not equivariant under gamma generator " + std::to_string(k + 1));
    const Subgroup zs(m, inst.z);
    for (int j = 0; j < n; ++j)
        if (!zs.contains(rho.column(j)))
            problems.push_back("rho does not map into Z");
    for (const IntVector& z : inst.z)
        if (!m.is_zero(minus(rho.apply(z), times(order, z))))
            problems.push_back("rho is not |Gamma| times the identity on " + vector_text(z));
    for (const IntVector& k : result.kernel) {
        if (!m.is_zero(rho.apply(k)))
            problems.push_back("kernel generator " + vector_text(k) + " is not in ker rho");
        for (std::size_t g = 0; g < inst.gamma.size(); ++g)
            if (!m.is_zero(rho.apply(inst.gamma[g].apply(k))))
                problems.push_back("ker rho is not invariant under gamma generator " + std::to_string(g + 1));
    }
    std::vector<IntVector> sum = inst.z;
    sum.insert(sum.end(), result.kernel.begin(), result.kernel.end());
    const Subgroup zk(m, sum);
    for (int j = 0; j < n; ++j) {
        IntVector e(n, 0);
        e[j] = order;
        if (!zk.contains(e))
            problems.push_back("|Gamma| e" + std::to_string(j + 1) + " is not in Z + ker rho");
    }
    return problems;
}

} // namespace covercomm
