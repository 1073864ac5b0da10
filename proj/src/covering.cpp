#include "covercomm/covering.hpp"

#include "covercomm/union_find.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace covercomm {

namespace {

std::string join_violations(const MorphismReport& report)
{
    std::string text = "invalid morphism";
    for (const auto& v : report.violations)
        text += "; " + v;
    return text;
}

void require_connected(const Graph& g, const char* what)
{
    if (!is_connected(g))
        throw PreconditionError(std::string(what) + ": graph '" + g.name() + "' must be non-empty and connected");
}

} // namespace

InvalidMorphismError::InvalidMorphismError(MorphismReport report)
    : PreconditionError(join_violations(report)), report_(std::move(report))
{
}

std::string to_string(CoveringViolation::Reason reason)
{
    return reason == CoveringViolation::Reason::NotLocallyInjective ? "not locally injective"
                                                                    : "not locally surjective";
}

std::vector<std::string> CoveringReport::describe(const Graph& source) const
{
    std::vector<std::string> lines;
    for (const auto& v : violations)
        lines.push_back("vertex " + source.vertex_name(v.vertex) + ": " + to_string(v.reason));
    return lines;
}

CoveringReport analyze_covering(const GraphMorphism& m)
{
    MorphismReport valid = validate_morphism(m);
    if (!valid.valid())
        throw InvalidMorphismError(std::move(valid));
    const Graph& s = *m.source;
    const Graph& t = *m.target;
    require_connected(t, "analyze_covering");

    CoveringReport report;
    std::vector<int> seen(t.num_darts(), -1);
    for (int v = 0; v < static_cast<int>(s.num_vertices()); ++v) {
        bool injective = true;
        int hit = 0;
        for (int d : s.darts_at(v)) {
            const int e = m.dmap[d];
            if (seen[e] == v)
                injective = false;
            else
                ++hit;
            seen[e] = v;
        }
        if (!injective)
            report.violations.push_back({v, CoveringViolation::Reason::NotLocallyInjective});
        if (hit != t.degree(m.vmap[v]))
            report.violations.push_back({v, CoveringViolation::Reason::NotLocallySurjective});
    }
    report.is_covering = report.violations.empty();
    if (report.is_covering && s.num_vertices() > 0) {
        std::vector<long> fiber(t.num_vertices(), 0);
        for (int v : m.vmap)
            ++fiber[v];
        if (std::all_of(fiber.begin(), fiber.end(), [&](long n) { return n == fiber[0]; }))
            report.degree = fiber[0];
    }
    return report;
}

FoldResult fold(const GraphMorphism& m)
{
    MorphismReport valid = validate_morphism(m);
    if (!valid.valid())
        throw InvalidMorphismError(std::move(valid));
    const Graph& s = *m.source;
    const int nv = static_cast<int>(s.num_vertices());
    const int nd = static_cast<int>(s.num_darts());

    UnionFind vertices(nv), darts(nd);
    for (bool changed = true; changed;) {
        changed = false;
        std::map<std::pair<int, int>, int> first;
        for (int d = 0; d < nd; ++d) {
            auto [it, fresh] = first.emplace(std::make_pair(vertices.find(s.origin(d)), m.dmap[d]), d);
            if (fresh || darts.same(it->second, d))
                continue;
            const int r = it->second;
            darts.unite(r, d);
            darts.unite(s.inv(r), s.inv(d));
            vertices.unite(s.terminus(r), s.terminus(d));
            changed = true;
        }
    }

    // Each class is named after its least member, which is also its least index.
    std::vector<int> vrep(nv, -1), drep(nd, -1);
    for (int v = 0; v < nv; ++v) {
        int& r = vrep[vertices.find(v)];
        if (r < 0)
            r = v;
    }
    for (int d = 0; d < nd; ++d) {
        int& r = drep[darts.find(d)];
        if (r < 0)
            r = d;
    }
    auto vclass = [&](int v) { return vrep[vertices.find(v)]; };
    auto dclass = [&](int d) { return drep[darts.find(d)]; };

    Graph::Builder b(s.name());
    if (s.labeled())
        b.alphabet(s.alphabet());
    for (int v = 0; v < nv; ++v)
        if (vclass(v) == v)
            b.add_vertex(s.vertex_name(v));
    for (int d = 0; d < nd; ++d) {
        if (dclass(d) != d)
            continue;
        const int r = dclass(s.inv(d));
        if (d < r)
            b.add_darts(s.dart_name(d), s.dart_name(r), s.vertex_name(vclass(s.origin(d))),
                        s.vertex_name(vclass(s.terminus(d))), s.label_text(d));
    }

    FoldResult result;
    result.folded = b.build_shared();
    const Graph& f = *result.folded;
    result.quotient = {m.name + "/fold", m.source, result.folded, std::vector<int>(nv), std::vector<int>(nd)};
    for (int v = 0; v < nv; ++v)
        result.quotient.vmap[v] = *f.find_vertex(s.vertex_name(vclass(v)));
    for (int d = 0; d < nd; ++d)
        result.quotient.dmap[d] = *f.find_dart(s.dart_name(dclass(d)));

    result.induced = {m.name, result.folded, m.target, std::vector<int>(f.num_vertices()),
                      std::vector<int>(f.num_darts())};
    for (int v = 0; v < nv; ++v)
        result.induced.vmap[result.quotient.vmap[v]] = m.vmap[v];
    for (int d = 0; d < nd; ++d)
        result.induced.dmap[result.quotient.dmap[d]] = m.dmap[d];
    result.folds = static_cast<long>(s.num_edges()) - static_cast<long>(f.num_edges());
    result.vertex_folds = static_cast<long>(s.num_vertices()) - static_cast<long>(f.num_vertices());
    return result;
}

DegreeRefinement degree_refinement(const Graph& g)
{
    require_connected(g, "degree_refinement");
    const int n = static_cast<int>(g.num_vertices());
    std::vector<int> color(n, 0);
    int count = 1;
    while (true) {
        std::vector<std::vector<int>> signature(n);
        for (int v = 0; v < n; ++v) {
            auto& sig = signature[v];
            sig.push_back(color[v]);
            for (int d : g.darts_at(v))
                sig.push_back(color[g.terminus(d)]);
            std::sort(sig.begin() + 1, sig.end());
        }
        std::vector<std::vector<int>> distinct = signature;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (int v = 0; v < n; ++v)
            color[v] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), signature[v]) -
                                        distinct.begin());
        const int next = static_cast<int>(distinct.size());
        if (next == count)
            break;
        count = next;
    }

    DegreeRefinement r;
    r.class_of = color;
    r.classes.resize(count);
    for (int v = 0; v < n; ++v)
        r.classes[color[v]].push_back(v);
    r.matrix.assign(count, std::vector<long>(count, 0));
    for (int c = 0; c < count; ++c)
        for (int d : g.darts_at(r.classes[c].front()))
            ++r.matrix[c][color[g.terminus(d)]];
    return r;
}

bool same_universal_cover(const Graph& g1, const Graph& g2)
{
    return degree_refinement(g1).matrix == degree_refinement(g2).matrix;
}

// ---------------------------------------------------------------------------
// Common covers

namespace {

/// Integer-only graph used inside the search loops.
struct Flat {
    int nv = 0;
    std::vector<int> origin, inv, offsets, incident, position;

    int terminus(int d) const { return origin[inv[d]]; }
    int degree(int v) const { return offsets[v + 1] - offsets[v]; }

    void finish()
    {
        const int nd = static_cast<int>(origin.size());
        offsets.assign(nv + 1, 0);
        for (int d = 0; d < nd; ++d)
            ++offsets[origin[d] + 1];
        std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
        incident.resize(nd);
        position.resize(nd);
        std::vector<int> fill(offsets.begin(), offsets.end() - 1);
        for (int d = 0; d < nd; ++d) {
            position[d] = fill[origin[d]] - offsets[origin[d]];
            incident[fill[origin[d]]++] = d;
        }
    }
};

Flat flatten(const Graph& g)
{
    Flat f;
    f.nv = static_cast<int>(g.num_vertices());
    for (int d = 0; d < static_cast<int>(g.num_darts()); ++d) {
        f.origin.push_back(g.origin(d));
        f.inv.push_back(g.inv(d));
    }
    f.finish();
    return f;
}

bool bipartite(const Flat& g)
{
    std::vector<int> side(g.nv, -1);
    for (int s = 0; s < g.nv; ++s) {
        if (side[s] >= 0)
            continue;
        side[s] = 0;
        std::vector<int> queue{s};
        for (std::size_t h = 0; h < queue.size(); ++h) {
            const int v = queue[h];
            for (int i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
                const int w = g.terminus(g.incident[i]);
                if (side[w] < 0) {
                    side[w] = 1 - side[v];
                    queue.push_back(w);
                } else if (side[w] == side[v]) {
                    return false;
                }
            }
        }
    }
    return true;
}

/// Backtracking for a locally bijective map z -> o, vertices in BFS order of z
/// and dart bijections in lexicographic order.
class MapSearch {
public:
    MapSearch(const Flat& z, const Flat& o) : z_(z), o_(o)
    {
        std::vector<char> seen(z.nv, 0);
        if (z.nv == 0)
            return;
        order_.push_back(0);
        seen[0] = 1;
        for (std::size_t h = 0; h < order_.size(); ++h)
            for (int i = z.offsets[order_[h]]; i < z.offsets[order_[h] + 1]; ++i) {
                const int w = z.terminus(z.incident[i]);
                if (!seen[w]) {
                    seen[w] = 1;
                    order_.push_back(w);
                }
            }
    }

    bool run()
    {
        if (order_.size() != static_cast<std::size_t>(z_.nv) || z_.nv == 0)
            return false;
        for (int w = 0; w < o_.nv; ++w) {
            vmap_.assign(z_.nv, -1);
            dmap_.assign(z_.origin.size(), -1);
            vmap_[order_[0]] = w;
            if (visit(0))
                return true;
        }
        return false;
    }

    const std::vector<int>& vmap() const { return vmap_; }
    const std::vector<int>& dmap() const { return dmap_; }

private:
    bool visit(std::size_t idx)
    {
        if (idx == order_.size())
            return true;
        const int v = order_[idx];
        const int w = vmap_[v];
        if (z_.degree(v) != o_.degree(w))
            return false;
        std::vector<char> used(o_.degree(w), 0);
        std::vector<int> open;
        for (int i = z_.offsets[v]; i < z_.offsets[v + 1]; ++i) {
            const int d = z_.incident[i];
            const int t = dmap_[d];
            if (t < 0) {
                open.push_back(d);
                continue;
            }
            if (o_.origin[t] != w || used[o_.position[t]])
                return false;
            used[o_.position[t]] = 1;
        }
        return assign(idx, v, w, open, 0, used);
    }

    bool assign(std::size_t idx, int v, int w, const std::vector<int>& open, std::size_t k, std::vector<char>& used)
    {
        while (k < open.size() && dmap_[open[k]] >= 0)
            ++k;
        if (k == open.size())
            return visit(idx + 1);
        const int d = open[k];
        const int id = z_.inv[d];
        const int x = z_.terminus(d);
        for (int i = o_.offsets[w]; i < o_.offsets[w + 1]; ++i) {
            const int t = o_.incident[i];
            if (used[o_.position[t]])
                continue;
            const int it = o_.inv[t];
            const int y = o_.terminus(t);
            const bool loop = x == v;
            if (loop && (y != w || used[o_.position[it]]))
                continue;
            const bool fresh = vmap_[x] < 0;
            if (!fresh && vmap_[x] != y)
                continue;
            if (fresh)
                vmap_[x] = y;
            dmap_[d] = t;
            dmap_[id] = it;
            used[o_.position[t]] = 1;
            if (loop)
                used[o_.position[it]] = 1;
            if (assign(idx, v, w, open, k + 1, used))
                return true;
            used[o_.position[t]] = 0;
            if (loop)
                used[o_.position[it]] = 0;
            dmap_[d] = -1;
            dmap_[id] = -1;
            if (fresh)
                vmap_[x] = -1;
        }
        return false;
    }

    const Flat& z_;
    const Flat& o_;
    std::vector<int> order_;
    std::vector<int> vmap_, dmap_;
};

struct BaseData {
    std::vector<int> generator_edges;
    std::vector<int> generator_of_edge; // -1 for tree edges
};

BaseData spanning_complement(const Graph& g)
{
    BaseData data;
    data.generator_of_edge.assign(g.num_edges(), -1);
    std::vector<char> tree(g.num_edges(), 0), seen(g.num_vertices(), 0);
    if (g.num_vertices() > 0) {
        std::vector<int> queue{0};
        seen[0] = 1;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (int d : g.darts_at(queue[h])) {
                const int w = g.terminus(d);
                if (!seen[w]) {
                    seen[w] = 1;
                    tree[g.edge_of(d)] = 1;
                    queue.push_back(w);
                }
            }
    }
    for (int e = 0; e < static_cast<int>(g.num_edges()); ++e)
        if (!tree[e]) {
            data.generator_of_edge[e] = static_cast<int>(data.generator_edges.size());
            data.generator_edges.push_back(e);
        }
    return data;
}

/// Permutation applied by Z-dart (delta, i) to the fiber index.
int move(const Graph& base, const BaseData& data, int degree, const std::vector<int>& table, int dart, int i)
{
    const int e = base.edge_of(dart);
    const int j = data.generator_of_edge[e];
    if (j < 0)
        return i;
    const int column = 2 * j + (base.edge_dart(e) == dart ? 0 : 1);
    (void)degree;
    return table[i * 2 * static_cast<int>(data.generator_edges.size()) + column];
}

Flat flat_cover(const Graph& base, const BaseData& data, int degree, const std::vector<int>& table)
{
    Flat z;
    const int nd = static_cast<int>(base.num_darts());
    z.nv = static_cast<int>(base.num_vertices()) * degree;
    z.origin.resize(static_cast<std::size_t>(nd) * degree);
    z.inv.resize(z.origin.size());
    for (int d = 0; d < nd; ++d)
        for (int i = 0; i < degree; ++i) {
            const int zd = d * degree + i;
            z.origin[zd] = base.origin(d) * degree + i;
            z.inv[zd] = base.inv(d) * degree + move(base, data, degree, table, d, i);
        }
    z.finish();
    return z;
}

/// Low-index enumeration of transitive actions of the free group on the
/// non-tree edges, in standard form, keeping one table per conjugacy class.
class CoverEnumerator {
public:
    CoverEnumerator(int degree, int generators) : d_(degree), cols_(2 * generators), table_(degree * 2 * generators, -1)
    {
    }

    /// Calls emit(table) for each canonical table in lexicographic order; stops
    /// when emit returns false.
    template <class Emit>
    void run(Emit&& emit)
    {
        if (d_ <= 0)
            return;
        used_ = 1;
        stop_ = false;
        descend(0, emit);
    }

private:
    template <class Emit>
    void descend(int pos, Emit& emit)
    {
        const int total = d_ * cols_;
        while (pos < total && table_[pos] >= 0)
            ++pos;
        if (pos == total) {
            if (used_ == d_ && canonical())
                stop_ = !emit(table_);
            return;
        }
        const int p = pos / cols_;
        const int c = pos % cols_;
        if (p >= used_)
            return;
        const int ic = c ^ 1;
        for (int q = 0; q <= used_ && q < d_ && !stop_; ++q) {
            const bool fresh = q == used_;
            if (!fresh && table_[q * cols_ + ic] >= 0)
                continue;
            table_[pos] = q;
            table_[q * cols_ + ic] = p;
            if (fresh)
                ++used_;
            descend(pos + 1, emit);
            if (fresh)
                --used_;
            table_[q * cols_ + ic] = -1;
            table_[pos] = -1;
        }
    }

    /// True unless restandardizing from another start gives a smaller table.
    bool canonical()
    {
        std::vector<int> label(d_), point(d_);
        for (int s = 1; s < d_; ++s) {
            std::fill(label.begin(), label.end(), -1);
            label[s] = 0;
            point[0] = s;
            int next = 1;
            int verdict = 0;
            for (int p = 0; p < d_ && verdict == 0; ++p)
                for (int c = 0; c < cols_ && verdict == 0; ++c) {
                    const int target = table_[point[p] * cols_ + c];
                    if (label[target] < 0) {
                        label[target] = next;
                        point[next++] = target;
                    }
                    verdict = (label[target] > table_[p * cols_ + c]) - (label[target] < table_[p * cols_ + c]);
                }
            if (verdict < 0)
                return false;
        }
        return true;
    }

    int d_, cols_;
    std::vector<int> table_;
    int used_ = 0;
    bool stop_ = false;
};

} // namespace

CoverEnumeration enumerate_covers(const Graph& base, int degree)
{
    require_connected(base, "enumerate_covers");
    const BaseData data = spanning_complement(base);
    CoverEnumeration out;
    out.generator_edges = data.generator_edges;
    CoverEnumerator(degree, static_cast<int>(data.generator_edges.size())).run([&](const std::vector<int>& t) {
        out.tables.push_back(t);
        return true;
    });
    return out;
}

GraphMorphism cover_from_table(const GraphPtr& base, const std::vector<int>& generator_edges, int degree,
                               const std::vector<int>& table)
{
    const Graph& b = *base;
    BaseData data;
    data.generator_edges = generator_edges;
    data.generator_of_edge.assign(b.num_edges(), -1);
    for (std::size_t j = 0; j < generator_edges.size(); ++j)
        data.generator_of_edge[generator_edges[j]] = static_cast<int>(j);
    if (table.size() != static_cast<std::size_t>(degree) * 2 * generator_edges.size())
        throw PreconditionError("cover table has the wrong size");

    auto fiber = [&](int i) { return "." + numbered_id("", static_cast<std::size_t>(i), static_cast<std::size_t>(degree)); };
    Graph::Builder z(b.name() + "~" + std::to_string(degree));
    if (b.labeled())
        z.alphabet(b.alphabet());
    for (int v = 0; v < static_cast<int>(b.num_vertices()); ++v)
        for (int i = 0; i < degree; ++i)
            z.add_vertex(b.vertex_name(v) + fiber(i));
    for (int e = 0; e < static_cast<int>(b.num_edges()); ++e) {
        const int d = b.edge_dart(e);
        for (int i = 0; i < degree; ++i) {
            const int j = move(b, data, degree, table, d, i);
            z.add_darts(b.dart_name(d) + fiber(i), b.dart_name(b.inv(d)) + fiber(j), b.vertex_name(b.origin(d)) + fiber(i),
                        b.vertex_name(b.terminus(d)) + fiber(j), b.label_text(d));
        }
    }
    GraphPtr zg = z.build_shared();
    GraphMorphism p{"p", zg, base, std::vector<int>(zg->num_vertices()), std::vector<int>(zg->num_darts())};
    for (int v = 0; v < static_cast<int>(b.num_vertices()); ++v)
        for (int i = 0; i < degree; ++i)
            p.vmap[*zg->find_vertex(b.vertex_name(v) + fiber(i))] = v;
    for (int d = 0; d < static_cast<int>(b.num_darts()); ++d)
        for (int i = 0; i < degree; ++i)
            p.dmap[*zg->find_dart(b.dart_name(d) + fiber(i))] = d;
    return p;
}

std::optional<GraphMorphism> find_covering_map(const GraphPtr& z, const GraphPtr& target)
{
    const Flat fz = flatten(*z);
    const Flat ft = flatten(*target);
    MapSearch search(fz, ft);
    if (!search.run())
        return std::nullopt;
    return GraphMorphism{"p", z, target, search.vmap(), search.dmap()};
}

CommonCoverResult find_common_cover(const GraphPtr& g1, const GraphPtr& g2, long max_vertices,
                                    const SearchOptions& options)
{
    require_connected(*g1, "find_common_cover");
    require_connected(*g2, "find_common_cover");
    CommonCoverResult result;
    const bool swap = g2->num_vertices() < g1->num_vertices() ||
                      (g2->num_vertices() == g1->num_vertices() && g2->name() < g1->name());
    const GraphPtr& base = swap ? g2 : g1;
    const GraphPtr& other = swap ? g1 : g2;
    result.base = base->name();
    if (!same_universal_cover(*g1, *g2)) {
        result.status = SearchStatus::NoneExists;
        return result;
    }

    const Graph& b = *base;
    const BaseData data = spanning_complement(b);
    const int k = static_cast<int>(data.generator_edges.size());
    const Flat target = flatten(*other);
    const bool need_bipartite = bipartite(target);
    const long vb = static_cast<long>(b.num_vertices()), eb = static_cast<long>(b.num_edges());
    const long vo = static_cast<long>(other->num_vertices()), eo = static_cast<long>(other->num_edges());
    constexpr std::size_t batch_size = 4096;

    for (long d = 1; d * vb <= max_vertices; ++d) {
        if ((d * vb) % vo != 0 || (d * eb) % eo != 0 || (d * vb) / vo != (d * eb) / eo)
            continue;
        const int degree = static_cast<int>(d);
        std::vector<std::vector<int>> batch;
        std::optional<std::vector<int>> winner;
        auto test = [&](std::size_t i) {
            const Flat z = flat_cover(b, data, degree, batch[i]);
            if (need_bipartite && !bipartite(z))
                return false;
            return MapSearch(z, target).run();
        };
        auto flush = [&]() {
            if (batch.empty())
                return;
            if (auto hit = first_match(batch.size(), test, options)) {
                result.candidates += static_cast<long>(*hit) + 1;
                winner = batch[*hit];
            } else {
                result.candidates += static_cast<long>(batch.size());
            }
            batch.clear();
        };
        CoverEnumerator(degree, k).run([&](const std::vector<int>& table) {
            batch.push_back(table);
            if (batch.size() == batch_size)
                flush();
            return !winner.has_value();
        });
        if (!winner)
            flush();
        if (!winner)
            continue;

        GraphMorphism pb = cover_from_table(base, data.generator_edges, degree, *winner);
        std::optional<GraphMorphism> po = find_covering_map(pb.source, other);
        if (!po)
            throw std::logic_error("common cover lost between search and reconstruction");
        CommonCover cover;
        cover.z = pb.source;
        pb.name = swap ? "p2" : "p1";
        po->name = swap ? "p1" : "p2";
        const long dother = (d * vb) / vo;
        cover.p1 = swap ? *po : pb;
        cover.p2 = swap ? pb : *po;
        cover.degree1 = swap ? dother : d;
        cover.degree2 = swap ? d : dother;
        result.cover = std::move(cover);
        result.status = SearchStatus::Found;
        return result;
    }
    result.status = SearchStatus::Exhausted;
    return result;
}

FiberProduct fiber_product(const GraphMorphism& p1, const GraphMorphism& p2)
{
    if (!p1.target || !p2.target || (p1.target != p2.target && !identical(*p1.target, *p2.target)))
        throw PreconditionError("fiber_product requires a common target");
    for (const auto* m : {&p1, &p2}) {
        MorphismReport r = validate_morphism(*m);
        if (!r.valid())
            throw InvalidMorphismError(std::move(r));
    }
    const Graph& a = *p1.source;
    const Graph& c = *p2.source;
    auto pair_name = [](const std::string& x, const std::string& y) { return x + "|" + y; };

    Graph::Builder b(a.name() + "x" + c.name());
    if (a.labeled())
        b.alphabet(a.alphabet());
    std::vector<std::pair<int, int>> vertices;
    for (int u = 0; u < static_cast<int>(a.num_vertices()); ++u)
        for (int v = 0; v < static_cast<int>(c.num_vertices()); ++v)
            if (p1.vmap[u] == p2.vmap[v]) {
                vertices.emplace_back(u, v);
                b.add_vertex(pair_name(a.vertex_name(u), c.vertex_name(v)));
            }
    std::vector<std::pair<int, int>> darts;
    for (int x = 0; x < static_cast<int>(a.num_darts()); ++x)
        for (int y = 0; y < static_cast<int>(c.num_darts()); ++y) {
            if (p1.dmap[x] != p2.dmap[y])
                continue;
            darts.emplace_back(x, y);
            const std::pair<int, int> rev{a.inv(x), c.inv(y)};
            if (std::make_pair(x, y) < rev)
                b.add_darts(pair_name(a.dart_name(x), c.dart_name(y)), pair_name(a.dart_name(rev.first), c.dart_name(rev.second)),
                            pair_name(a.vertex_name(a.origin(x)), c.vertex_name(c.origin(y))),
                            pair_name(a.vertex_name(a.terminus(x)), c.vertex_name(c.terminus(y))), a.label_text(x));
        }

    FiberProduct fp;
    fp.graph = b.build_shared();
    const Graph& g = *fp.graph;
    fp.q1 = {"q1", fp.graph, p1.source, std::vector<int>(g.num_vertices()), std::vector<int>(g.num_darts())};
    fp.q2 = {"q2", fp.graph, p2.source, std::vector<int>(g.num_vertices()), std::vector<int>(g.num_darts())};
    for (auto [u, v] : vertices) {
        const int i = *g.find_vertex(pair_name(a.vertex_name(u), c.vertex_name(v)));
        fp.q1.vmap[i] = u;
        fp.q2.vmap[i] = v;
    }
    for (auto [x, y] : darts) {
        const int i = *g.find_dart(pair_name(a.dart_name(x), c.dart_name(y)));
        fp.q1.dmap[i] = x;
        fp.q2.dmap[i] = y;
    }
    return fp;
}

} // namespace covercomm
