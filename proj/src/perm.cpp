#include "covercomm/perm.hpp"

#include "covercomm/error.hpp"

#include <cctype>
#include <cstdlib>
#include <deque>
#include <numeric>

namespace covercomm {

Perm identity_perm(int n)
{
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Perm compose(const Perm& p, const Perm& q)
{
    Perm r(p.size());
    for (std::size_t v = 0; v < p.size(); ++v)
        r[v] = q[p[v]];
    return r;
}

Perm perm_inverse(const Perm& p)
{
    Perm r(p.size());
    for (std::size_t v = 0; v < p.size(); ++v)
        r[p[v]] = static_cast<int>(v);
    return r;
}

bool is_identity(const Perm& p)
{
    for (std::size_t v = 0; v < p.size(); ++v)
        if (p[v] != static_cast<int>(v))
            return false;
    return true;
}

bool is_permutation(const Perm& p)
{
    std::vector<char> seen(p.size(), 0);
    for (int x : p) {
        if (x < 0 || x >= static_cast<int>(p.size()) || seen[x])
            return false;
        seen[x] = 1;
    }
    return true;
}

long perm_order(const Perm& p)
{
    long order = 1;
    std::vector<char> seen(p.size(), 0);
    for (std::size_t v = 0; v < p.size(); ++v) {
        if (seen[v])
            continue;
        long len = 0;
        for (std::size_t w = v; !seen[w]; w = p[w]) {
            seen[w] = 1;
            ++len;
        }
        order = std::lcm(order, len);
    }
    return order;
}

std::string perm_text(const Perm& p)
{
    std::string out;
    std::vector<char> seen(p.size(), 0);
    for (std::size_t v = 0; v < p.size(); ++v) {
        if (seen[v] || p[v] == static_cast<int>(v))
            continue;
        out += '(';
        for (std::size_t w = v; !seen[w]; w = p[w]) {
            seen[w] = 1;
            if (w != v)
                out += ' ';
            out += std::to_string(w + 1);
        }
        out += ')';
    }
    return out.empty() ? "()" : out;
}

Perm parse_perm(std::string_view text, int degree)
{
    Perm p = identity_perm(degree);
    std::vector<char> used(degree, 0);
    std::size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw InputError("bad permutation '" + std::string(text) + "': " + why, 0, static_cast<int>(i) + 1);
    };
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
    };
    skip();
    if (i == text.size())
        fail("empty");
    while (i < text.size()) {
        if (text[i] != '(')
            fail("expected '('");
        ++i;
        std::vector<int> cycle;
        for (;;) {
            skip();
            if (i < text.size() && text[i] == ')') {
                ++i;
                break;
            }
            if (i == text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                fail("expected a point or ')'");
            long x = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])) && x <= degree)
                x = 10 * x + (text[i++] - '0');
            if (x < 1 || x > degree)
                fail("point out of range 1.." + std::to_string(degree));
            if (used[x - 1])
                fail("point " + std::to_string(x) + " repeated");
            used[x - 1] = 1;
            cycle.push_back(static_cast<int>(x - 1));
        }
        for (std::size_t k = 0; k < cycle.size(); ++k)
            p[cycle[k]] = cycle[(k + 1) % cycle.size()];
        skip();
    }
    return p;
}

Closure::Closure(const PermGroup& g, long limit) : gens_(static_cast<int>(g.gens.size()))
{
    for (const Perm& s : g.gens)
        if (static_cast<int>(s.size()) != g.degree || !is_permutation(s))
            throw PreconditionError("generator is not a permutation of degree " + std::to_string(g.degree));
    elements_.push_back(identity_perm(g.degree));
    index_.emplace(elements_[0], 0);
    parent_.push_back(-1);
    via_.push_back(-1);
    for (long i = 0; i < static_cast<long>(elements_.size()); ++i) {
        for (int s = 0; s < gens_; ++s) {
            Perm next = compose(elements_[i], g.gens[s]);
            auto [it, fresh] = index_.emplace(next, static_cast<long>(elements_.size()));
            if (fresh) {
                if (static_cast<long>(elements_.size()) >= limit)
                    throw PreconditionError("group closure exceeds " + std::to_string(limit) + " elements");
                elements_.push_back(std::move(next));
                parent_.push_back(i);
                via_.push_back(s);
            }
            cayley_.push_back(it->second);
        }
    }
}

long Closure::find(const Perm& p) const
{
    auto it = index_.find(p);
    return it == index_.end() ? -1 : it->second;
}

long group_order(const PermGroup& g)
{
    return Closure(g).size();
}

std::optional<std::vector<Perm>> extend_homomorphism(const Closure& c, const std::vector<Perm>& images, int degree)
{
    if (static_cast<int>(images.size()) != c.num_gens())
        throw PreconditionError("one image per generator required");
    const int d = images.empty() ? degree : static_cast<int>(images[0].size());
    std::vector<Perm> img(c.size());
    img[0] = identity_perm(d);
    for (long i = 1; i < c.size(); ++i)
        img[i] = compose(img[c.parent(i)], images[c.via(i)]);
    for (long i = 0; i < c.size(); ++i)
        for (int s = 0; s < c.num_gens(); ++s)
            if (compose(img[i], images[s]) != img[c.times_gen(i, s)])
                return std::nullopt;
    return img;
}

Perm evaluate(const std::vector<Perm>& gens, const std::vector<int>& word)
{
    if (gens.empty())
        throw PreconditionError("evaluate needs at least one generator");
    Perm p = identity_perm(static_cast<int>(gens[0].size()));
    for (int x : word) {
        if (x == 0 || std::abs(x) > static_cast<int>(gens.size()))
            throw PreconditionError("letter outside the generator range");
        p = compose(p, x > 0 ? gens[x - 1] : perm_inverse(gens[-x - 1]));
    }
    return p;
}

} // namespace covercomm
