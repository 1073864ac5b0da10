#include "covercomm/vh_complex.hpp"

#include "covercomm/error.hpp"
#include "covercomm/word.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>

namespace covercomm {

namespace {

std::string square_text(const Graph& g, const Square& s)
{
    std::string out;
    for (int d : s)
        out += (out.empty() ? "" : " ") + g.dart_name(d);
    return out;
}

std::vector<std::string> relator_tokens(std::string_view word)
{
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < word.size();) {
        if (!std::isalpha(static_cast<unsigned char>(word[i])))
            throw InputError("relator '" + std::string(word) + "': unexpected character '" + word[i] + "'", 0,
                             static_cast<int>(i + 1));
        std::size_t j = i + 1;
        while (j < word.size() && std::isdigit(static_cast<unsigned char>(word[j])))
            ++j;
        tokens.emplace_back(word.substr(i, j - i));
        i = j;
    }
    if (tokens.size() != 4)
        throw InputError("relator '" + std::string(word) + "' has length " + std::to_string(tokens.size()) +
                         ", not 4");
    return tokens;
}

void check_square(const Graph& g, const Square& s, std::size_t k)
{
    for (int d : s)
        if (d < 0 || d >= static_cast<int>(g.num_darts()))
            throw InputError("square " + std::to_string(k + 1) + " references a missing dart");
    for (int i = 0; i < 4; ++i)
        if (g.terminus(s[i]) != g.origin(s[(i + 1) % 4]))
            throw InputError("square " + std::to_string(k + 1) + " (" + square_text(g, s) +
                             ") does not close up after dart " + g.dart_name(s[i]));
}

Square rotate(const Square& s, int k) { return {s[k % 4], s[(k + 1) % 4], s[(k + 2) % 4], s[(k + 3) % 4]}; }

// Every reading of the boundary: 4 rotations in each direction.
std::vector<Square> readings(const Graph& g, const Square& s)
{
    Square rev{g.inv(s[3]), g.inv(s[2]), g.inv(s[1]), g.inv(s[0])};
    std::vector<Square> out;
    for (int k = 0; k < 4; ++k) {
        out.push_back(rotate(s, k));
        out.push_back(rotate(rev, k));
    }
    return out;
}

} // namespace

SquareComplex build_complex(GraphPtr skeleton, std::vector<Square> squares)
{
    for (std::size_t k = 0; k < squares.size(); ++k)
        check_square(*skeleton, squares[k], k);
    return {std::move(skeleton), std::move(squares)};
}

Square square_from_darts(const Graph& skeleton, const std::array<std::string, 4>& tokens)
{
    Square s;
    for (int i = 0; i < 4; ++i) {
        auto d = skeleton.find_dart(tokens[i]);
        if (!d)
            throw InputError("unknown dart '" + tokens[i] + "'");
        s[i] = *d;
    }
    return s;
}

std::vector<Square> relator_squares(const Graph& g, std::string_view relator)
{
    const std::vector<std::string> tokens = relator_tokens(relator);
    auto lower = [](std::string t) {
        t[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(t[0])));
        return t;
    };
    if (!g.labeled()) {
        Square s;
        for (int i = 0; i < 4; ++i) {
            const bool reversed = std::isupper(static_cast<unsigned char>(tokens[i][0]));
            const std::string id = lower(tokens[i]);
            auto d = g.find_dart(id);
            if (!d || g.edge_dart(g.edge_of(*d)) != *d)
                throw InputError("relator '" + std::string(relator) + "': unknown edge '" + id + "'");
            s[i] = reversed ? g.inv(*d) : *d;
        }
        check_square(g, s, 0);
        return {s};
    }

    std::vector<Letter> letters;
    for (const std::string& t : tokens) {
        const std::string id = lower(t);
        auto it = std::find(g.alphabet().begin(), g.alphabet().end(), id);
        if (it == g.alphabet().end())
            throw InputError("relator '" + std::string(relator) + "': unknown edge label '" + id + "'");
        const Letter x = static_cast<Letter>(it - g.alphabet().begin()) + 1;
        letters.push_back(t == id ? x : -x);
    }
    std::vector<Square> out;
    std::set<Square> seen;
    for (int v = 0; v < static_cast<int>(g.num_vertices()); ++v) {
        Square s;
        int at = v;
        for (int i = 0; i < 4; ++i) {
            int found = -1, count = 0;
            for (int d : g.darts_at(at))
                if (g.label(d) == letters[i]) {
                    found = d;
                    ++count;
                }
            if (count != 1)
                throw InputError("relator '" + std::string(relator) + "': " + std::to_string(count) +
                                 " darts labeled " + tokens[i] + " at vertex " + g.vertex_name(at));
            s[i] = found;
            at = g.terminus(found);
        }
        if (at != v)
            throw InputError("relator '" + std::string(relator) + "' does not close up from vertex " +
                             g.vertex_name(v));
        if (seen.count(s))
            continue;
        for (int k = 0; k < 4; ++k)
            seen.insert(rotate(s, k));
        out.push_back(s);
    }
    return out;
}

std::vector<int> VHPartition::vertical_edges() const
{
    std::vector<int> out;
    for (std::size_t e = 0; e < vertical.size(); ++e)
        if (vertical[e])
            out.push_back(static_cast<int>(e));
    return out;
}

std::vector<int> VHPartition::horizontal_edges() const
{
    std::vector<int> out;
    for (std::size_t e = 0; e < vertical.size(); ++e)
        if (!vertical[e])
            out.push_back(static_cast<int>(e));
    return out;
}

std::string VHResult::describe(const SquareComplex& sc) const
{
    if (partition)
        return "VH partition";
    const Graph& g = *sc.skeleton;
    std::string out = "not VH:";
    for (const VHLink& l : witness)
        out += " " + g.edge_name(l.from) + (l.adjacent ? " adjacent to " : " opposite ") + g.edge_name(l.to) +
               " (square " + std::to_string(l.square + 1) + ");";
    out.pop_back();
    return out;
}

VHResult vh_partition(const SquareComplex& sc, bool least_is_vertical)
{
    const Graph& g = *sc.skeleton;
    const int n = static_cast<int>(g.num_edges());
    std::vector<std::vector<VHLink>> links(n);
    for (int k = 0; k < static_cast<int>(sc.squares.size()); ++k) {
        const Square& s = sc.squares[k];
        for (int i = 0; i < 4; ++i) {
            const int a = g.edge_of(s[i]);
            for (int j = i + 1; j < 4; ++j) {
                const int b = g.edge_of(s[j]);
                const bool adjacent = j - i != 2;
                links[a].push_back({k, a, b, adjacent});
                links[b].push_back({k, b, a, adjacent});
            }
        }
    }

    // Parity breadth-first search: color 0 holds the least edge of each block.
    std::vector<int> color(n, -1);
    std::vector<VHLink> via(n);
    auto path_to_root = [&](int e) {
        std::vector<VHLink> path;
        while (via[e].square >= 0) {
            path.push_back(via[e]);
            e = via[e].from;
        }
        return path;
    };
    for (int root = 0; root < n; ++root) {
        if (color[root] >= 0)
            continue;
        color[root] = 0;
        std::deque<int> queue{root};
        while (!queue.empty()) {
            const int e = queue.front();
            queue.pop_front();
            for (const VHLink& l : links[e]) {
                const int want = color[e] ^ static_cast<int>(l.adjacent);
                if (color[l.to] < 0) {
                    color[l.to] = want;
                    via[l.to] = l;
                    queue.push_back(l.to);
                } else if (color[l.to] != want) {
                    // root -> e, the offending link, then to -> root.
                    VHResult bad;
                    std::vector<VHLink> up = path_to_root(e);
                    std::vector<VHLink> down = path_to_root(l.to);
                    for (auto it = up.rbegin(); it != up.rend(); ++it)
                        bad.witness.push_back(*it);
                    bad.witness.push_back(l);
                    for (const VHLink& step : down)
                        bad.witness.push_back({step.square, step.to, step.from, step.adjacent});
                    return bad;
                }
            }
        }
    }
    VHPartition p;
    p.vertical.resize(n);
    for (int e = 0; e < n; ++e)
        p.vertical[e] = (color[e] == 0) == least_is_vertical;
    return {p, {}};
}

HorizontalGraph horizontal_subgraph(const SquareComplex& sc, const VHPartition& part)
{
    const Graph& g = *sc.skeleton;
    HorizontalGraph h;
    const std::vector<int> edges = part.horizontal_edges();
    std::vector<char> used(g.num_vertices(), 0);
    for (int e : edges) {
        const int d = g.edge_dart(e);
        used[g.origin(d)] = used[g.terminus(d)] = 1;
    }
    std::vector<int> vertices;
    for (int v = 0; v < static_cast<int>(g.num_vertices()); ++v)
        if (used[v])
            vertices.push_back(v);
    h.graph = subgraph(g, vertices, edges, g.name() + "-horizontal");

    h.component_of.assign(g.num_vertices(), -1);
    const auto comps = connected_components(*h.graph);
    for (std::size_t c = 0; c < comps.size(); ++c) {
        std::vector<int> verts;
        for (int v : comps[c]) {
            const int sv = *g.find_vertex(h.graph->vertex_name(v));
            verts.push_back(sv);
            h.component_of[sv] = static_cast<int>(c);
        }
        std::sort(verts.begin(), verts.end());
        h.components.push_back(verts);
    }
    for (std::size_t c = 0; c < h.components.size(); ++c) {
        std::vector<int> ce;
        for (int e : edges)
            if (h.component_of[g.origin(g.edge_dart(e))] == static_cast<int>(c))
                ce.push_back(e);
        h.component_graphs.push_back(subgraph(g, h.components[c], ce, "X" + std::to_string(c + 1)));
    }
    return h;
}

CrossSection cross_section(const SquareComplex& sc, const VHPartition& part)
{
    const Graph& g = *sc.skeleton;
    if (part.vertical.size() != g.num_edges())
        throw PreconditionError("partition does not match the skeleton");
    auto vertical = [&](int d) { return part.vertical[g.edge_of(d)] != 0; };
    for (std::size_t k = 0; k < sc.squares.size(); ++k) {
        const Square& s = sc.squares[k];
        for (int i = 0; i < 4; ++i)
            if (vertical(s[i]) == vertical(s[(i + 1) % 4]))
                throw PreconditionError("square " + std::to_string(k + 1) + " does not alternate vertical and horizontal sides");
    }
    const HorizontalGraph h = horizontal_subgraph(sc, part);
    auto comp = [&](int d) { return h.component_of[g.origin(d)]; };

    // Candidate readings per square, vertical dart first, in increasing order.
    std::vector<std::vector<Square>> cands(sc.squares.size());
    for (std::size_t k = 0; k < sc.squares.size(); ++k) {
        for (const Square& r : readings(g, sc.squares[k]))
            if (vertical(r[0]))
                cands[k].push_back(r);
        std::sort(cands[k].begin(), cands[k].end());
    }
    CrossSection cs;
    if (!sc.squares.empty()) {
        Square least = cands[0].front();
        for (const auto& c : cands)
            least = std::min(least, c.front());
        cs.component1 = comp(least[1]);
        cs.component2 = comp(least[3]);
    } else if (!h.components.empty()) {
        cs.component1 = cs.component2 = 0;
    } else {
        throw PreconditionError("the complex has no squares and no horizontal edges");
    }
    for (std::size_t k = 0; k < sc.squares.size(); ++k) {
        auto it = std::find_if(cands[k].begin(), cands[k].end(), [&](const Square& r) {
            return comp(r[1]) == cs.component1 && comp(r[3]) == cs.component2;
        });
        if (it == cands[k].end())
            throw PreconditionError("squares mix components: square " + std::to_string(k + 1) + " (" +
                                    square_text(g, sc.squares[k]) + ") does not join X" +
                                    std::to_string(cs.component1 + 1) + " to X" +
                                    std::to_string(cs.component2 + 1));
        cs.readings.push_back(*it);
    }

    // Top (X1 side) and bottom (X2 side) endpoint of every vertical edge.
    const std::vector<int> vedges = part.vertical_edges();
    std::map<int, std::pair<int, int>> ends;
    auto record = [&](int e, int top, int bottom, std::size_t k) {
        auto [it, fresh] = ends.emplace(e, std::make_pair(top, bottom));
        if (!fresh && it->second != std::make_pair(top, bottom))
            throw PreconditionError("vertical edge " + g.edge_name(e) + " is read in both directions (square " +
                                    std::to_string(k + 1) + ")");
    };
    for (std::size_t k = 0; k < cs.readings.size(); ++k) {
        const Square& r = cs.readings[k];
        record(g.edge_of(r[0]), g.terminus(r[0]), g.origin(r[0]), k);
        record(g.edge_of(r[2]), g.origin(r[2]), g.terminus(r[2]), k);
    }
    for (int e : vedges)
        if (!ends.count(e))
            throw PreconditionError("vertical edge " + g.edge_name(e) + " lies in no square");

    Graph::Builder zb("z");
    for (int e : vedges)
        zb.add_vertex(g.edge_name(e));
    const std::size_t m = cs.readings.size();
    for (std::size_t k = 0; k < m; ++k)
        zb.add_edge(numbered_id("s", k, m), g.edge_name(g.edge_of(cs.readings[k][0])),
                    g.edge_name(g.edge_of(cs.readings[k][2])));
    cs.z = zb.build_shared();
    cs.x1 = h.component_graphs[cs.component1];
    cs.x2 = h.component_graphs[cs.component2];

    auto leg = [&](const GraphPtr& x, bool top, std::string name) {
        GraphMorphism p{std::move(name), cs.z, x, std::vector<int>(cs.z->num_vertices(), -1),
                        std::vector<int>(cs.z->num_darts(), -1)};
        for (int v = 0; v < static_cast<int>(cs.z->num_vertices()); ++v) {
            const auto& [t, b] = ends.at(g.edge_of(*g.find_dart(cs.z->vertex_name(v))));
            p.vmap[v] = *x->find_vertex(g.vertex_name(top ? t : b));
        }
        for (std::size_t k = 0; k < m; ++k) {
            const int side = top ? cs.readings[k][1] : g.inv(cs.readings[k][3]);
            const int zd = *cs.z->find_dart(numbered_id("s", k, m));
            const int xd = *x->find_dart(g.dart_name(side));
            p.dmap[zd] = xd;
            p.dmap[cs.z->inv(zd)] = x->inv(xd);
        }
        return p;
    };
    cs.p1 = leg(cs.x1, true, "p1");
    cs.p2 = leg(cs.x2, false, "p2");
    return cs;
}

CrossSectionAnalysis analyze_cross_section(const SquareComplex& sc, bool least_is_vertical)
{
    CrossSectionAnalysis a;
    a.vh = vh_partition(sc, least_is_vertical);
    if (!a.vh.partition)
        return a;
    a.cross = cross_section(sc, *a.vh.partition);
    const CrossSection& cs = *a.cross;
    a.cover1 = analyze_covering(cs.p1);
    a.cover2 = analyze_covering(cs.p2);
    a.folds1 = fold(cs.p1).folds;
    a.folds2 = fold(cs.p2).folds;
    a.euler = euler_characteristic(*cs.z);
    if (is_connected(*cs.z))
        a.rank = free_rank(*cs.z);
    a.euler1 = euler_characteristic(*cs.x1);
    a.euler2 = euler_characteristic(*cs.x2);
    return a;
}

namespace {

// Breadth-first spanning tree from `root`; parent dart into each vertex.
std::vector<int> spanning_tree(const Graph& g, int root)
{
    std::vector<int> parent(g.num_vertices(), -2);
    parent[root] = -1;
    std::deque<int> queue{root};
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int d : g.darts_at(v))
            if (parent[g.terminus(d)] == -2) {
                parent[g.terminus(d)] = d;
                queue.push_back(g.terminus(d));
            }
    }
    return parent;
}

// Letters of the non-tree edges, indexed by dart; 0 on tree darts.
std::vector<Letter> basis_letters(const Graph& g, const std::vector<int>& parent)
{
    std::vector<char> tree(g.num_edges(), 0);
    for (int d : parent)
        if (d >= 0)
            tree[g.edge_of(d)] = 1;
    std::vector<Letter> letter(g.num_darts(), 0);
    Letter next = 1;
    for (int e = 0; e < static_cast<int>(g.num_edges()); ++e)
        if (!tree[e]) {
            const int d = g.edge_dart(e);
            letter[d] = next;
            letter[g.inv(d)] = -next;
            ++next;
        }
    return letter;
}

std::vector<int> tree_path(const Graph& g, const std::vector<int>& parent, int v)
{
    std::vector<int> path;
    while (parent[v] >= 0) {
        path.push_back(parent[v]);
        v = g.origin(parent[v]);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace

Commensuration commensuration_from_cross_section(const CrossSection& cs, std::string name)
{
    const Graph& z = *cs.z;
    if (!is_connected(z))
        throw PreconditionError("the cross-section graph is not connected");
    if (!analyze_covering(cs.p1).is_covering || !analyze_covering(cs.p2).is_covering)
        throw PreconditionError("the projections are not both coverings");

    const std::vector<int> zparent = spanning_tree(z, 0);
    const std::vector<Letter> zletter = basis_letters(z, zparent);
    // Loop per non-tree edge of z, as a dart sequence.
    std::vector<std::vector<int>> loops;
    for (int e = 0; e < static_cast<int>(z.num_edges()); ++e) {
        const int d = z.edge_dart(e);
        if (zletter[d] == 0)
            continue;
        std::vector<int> loop = tree_path(z, zparent, z.origin(d));
        loop.push_back(d);
        std::vector<int> back = tree_path(z, zparent, z.terminus(d));
        for (auto it = back.rbegin(); it != back.rend(); ++it)
            loop.push_back(z.inv(*it));
        loops.push_back(loop);
    }

    Commensuration c;
    c.name = std::move(name);
    c.h_rank = static_cast<int>(loops.size());
    for (int side = 1; side <= 2; ++side) {
        const GraphMorphism& p = side == 1 ? cs.p1 : cs.p2;
        const Graph& x = *p.target;
        const std::vector<int> xparent = spanning_tree(x, p.vmap[0]);
        const std::vector<Letter> xletter = basis_letters(x, xparent);
        std::vector<Word>& images = side == 1 ? c.i1 : c.i2;
        for (const auto& loop : loops) {
            Word w;
            for (int d : loop)
                if (Letter l = xletter[p.dmap[d]])
                    w.push_back(l);
            images.push_back(reduce(w));
        }
        (side == 1 ? c.g1_rank : c.g2_rank) = static_cast<int>(free_rank(x));
    }
    return c;
}

SquareComplex cylinder_complex(const GraphMorphism& p1, const GraphMorphism& p2)
{
    const Graph& z = *p1.source;
    const Graph& x1 = *p1.target;
    const Graph& x2 = *p2.target;
    if (p2.source.get() != p1.source.get() && !identical(*p2.source, z))
        throw PreconditionError("the two maps have different sources");
    Graph::Builder b("cylinder");
    for (int v = 0; v < static_cast<int>(x1.num_vertices()); ++v)
        b.add_vertex("t:" + x1.vertex_name(v));
    for (int v = 0; v < static_cast<int>(x2.num_vertices()); ++v)
        b.add_vertex("u:" + x2.vertex_name(v));
    for (int e = 0; e < static_cast<int>(x1.num_edges()); ++e) {
        const int d = x1.edge_dart(e);
        b.add_edge("b:" + x1.edge_name(e), "t:" + x1.vertex_name(x1.origin(d)), "t:" + x1.vertex_name(x1.terminus(d)));
    }
    for (int e = 0; e < static_cast<int>(x2.num_edges()); ++e) {
        const int d = x2.edge_dart(e);
        b.add_edge("c:" + x2.edge_name(e), "u:" + x2.vertex_name(x2.origin(d)), "u:" + x2.vertex_name(x2.terminus(d)));
    }
    for (int v = 0; v < static_cast<int>(z.num_vertices()); ++v)
        b.add_edge("a:" + z.vertex_name(v), "u:" + x2.vertex_name(p2.vmap[v]), "t:" + x1.vertex_name(p1.vmap[v]));
    GraphPtr sk = b.build_shared();

    auto dart = [&](const Graph& x, const std::string& prefix, int d) {
        const int e = x.edge_of(d);
        const std::string id = prefix + x.edge_name(e);
        return *sk->find_dart(x.edge_dart(e) == d ? id : id + "'");
    };
    auto vert = [&](int v) { return *sk->find_dart("a:" + z.vertex_name(v)); };
    std::vector<Square> squares;
    for (int e = 0; e < static_cast<int>(z.num_edges()); ++e) {
        const int d = z.edge_dart(e);
        squares.push_back({vert(z.origin(d)), dart(x1, "b:", p1.dmap[d]), sk->inv(vert(z.terminus(d))),
                           sk->inv(dart(x2, "c:", p2.dmap[d]))});
    }
    return build_complex(sk, std::move(squares));
}

} // namespace covercomm
