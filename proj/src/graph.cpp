#include "covercomm/graph.hpp"

#include "covercomm/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

namespace covercomm {

bool is_letter_token(std::string_view token)
{
    if (token.empty() || !std::islower(static_cast<unsigned char>(token[0])))
        return false;
    return std::all_of(token.begin() + 1, token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::vector<std::string> standard_alphabet(int rank)
{
    if (rank < 0 || rank > 26)
        throw PreconditionError("alphabet rank must lie in [0, 26]");
    std::vector<std::string> letters;
    for (int k = 0; k < rank; ++k)
        letters.emplace_back(1, static_cast<char>('a' + k));
    return letters;
}

std::string letter_text(const std::vector<std::string>& alphabet, Letter x)
{
    if (x == 0)
        return {};
    std::string text = alphabet.at(static_cast<std::size_t>(std::abs(x) - 1));
    if (x < 0)
        text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    return text;
}

std::string numbered_id(std::string_view prefix, std::size_t index, std::size_t count)
{
    std::size_t width = 1;
    for (std::size_t m = count > 0 ? count - 1 : 0; m >= 10; m /= 10)
        ++width;
    std::string digits = std::to_string(index);
    if (digits.size() < width)
        digits.insert(0, width - digits.size(), '0');
    return std::string(prefix) + digits;
}

std::optional<int> Graph::find_vertex(std::string_view id) const
{
    auto it = std::lower_bound(vertex_names_.begin(), vertex_names_.end(), id);
    if (it == vertex_names_.end() || *it != id)
        return std::nullopt;
    return static_cast<int>(it - vertex_names_.begin());
}

std::optional<int> Graph::find_dart(std::string_view id) const
{
    auto it = std::lower_bound(dart_names_.begin(), dart_names_.end(), id);
    if (it == dart_names_.end() || *it != id)
        return std::nullopt;
    return static_cast<int>(it - dart_names_.begin());
}

Graph::Builder::Builder(std::string name) : name_(std::move(name)) {}

Graph::Builder& Graph::Builder::alphabet(std::vector<std::string> letters)
{
    alphabet_ = std::move(letters);
    return *this;
}

Graph::Builder& Graph::Builder::add_vertex(std::string id)
{
    vertices_.push_back(std::move(id));
    return *this;
}

Graph::Builder& Graph::Builder::add_edge(const std::string& id, std::string src, std::string dst, std::string label)
{
    return add_darts(id, id + "'", std::move(src), std::move(dst), std::move(label));
}

Graph::Builder& Graph::Builder::add_darts(std::string forward, std::string reverse, std::string src, std::string dst,
                                          std::string label)
{
    edges_.push_back({std::move(forward), std::move(reverse), std::move(src), std::move(dst), std::move(label)});
    return *this;
}

Graph Graph::Builder::build() const
{
    Graph g;
    g.name_ = name_;

    g.vertex_names_ = vertices_;
    std::sort(g.vertex_names_.begin(), g.vertex_names_.end());
    for (std::size_t i = 0; i < g.vertex_names_.size(); ++i) {
        if (g.vertex_names_[i].empty())
            throw InputError("empty vertex identifier");
        if (i > 0 && g.vertex_names_[i] == g.vertex_names_[i - 1])
            throw InputError("duplicate vertex identifier '" + g.vertex_names_[i] + "'");
    }

    // Resolve labels to (base token, inverted?) and fix the alphabet.
    bool any_label = false;
    bool any_unlabeled = false;
    std::vector<std::pair<std::string, bool>> resolved(edges_.size());
    std::set<std::string> used;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const std::string& label = edges_[i].label;
        if (label.empty()) {
            any_unlabeled = true;
            continue;
        }
        any_label = true;
        std::string base = label;
        bool inverted = std::isupper(static_cast<unsigned char>(base[0])) != 0;
        if (inverted)
            base[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(base[0])));
        if (!is_letter_token(base))
            throw InputError("label '" + label + "' on edge '" + edges_[i].forward + "' is not a letter");
        used.insert(base);
        resolved[i] = {base, inverted};
    }
    if (any_label && any_unlabeled)
        throw InputError("graph '" + name_ + "' mixes labeled and unlabeled edges");
    if (alphabet_) {
        g.alphabet_ = *alphabet_;
        for (const auto& token : used)
            if (std::find(g.alphabet_.begin(), g.alphabet_.end(), token) == g.alphabet_.end())
                throw InputError("label '" + token + "' is outside the alphabet of graph '" + name_ + "'");
    } else {
        g.alphabet_.assign(used.begin(), used.end());
    }
    const bool labeled = any_label || alphabet_.has_value();
    g.labeled_ = labeled;

    // Darts, sorted by identifier.
    std::vector<std::string> names;
    names.reserve(edges_.size() * 2);
    for (const auto& e : edges_) {
        names.push_back(e.forward);
        names.push_back(e.reverse);
    }
    std::vector<int> order(names.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return names[a] < names[b]; });
    std::vector<int> position(names.size());
    g.dart_names_.resize(names.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        position[order[k]] = static_cast<int>(k);
        g.dart_names_[k] = names[order[k]];
        if (g.dart_names_[k].empty())
            throw InputError("empty dart identifier");
        if (k > 0 && g.dart_names_[k] == g.dart_names_[k - 1])
            throw InputError("duplicate dart identifier '" + g.dart_names_[k] + "'");
    }

    const std::size_t n_darts = names.size();
    g.inv_.resize(n_darts);
    g.origin_.resize(n_darts);
    if (labeled)
        g.labels_.assign(n_darts, 0);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        auto src = g.find_vertex(e.src);
        auto dst = g.find_vertex(e.dst);
        if (!src)
            throw InputError("edge '" + e.forward + "' has unknown endpoint '" + e.src + "'");
        if (!dst)
            throw InputError("edge '" + e.forward + "' has unknown endpoint '" + e.dst + "'");
        const int fwd = position[2 * i];
        const int rev = position[2 * i + 1];
        g.inv_[fwd] = rev;
        g.inv_[rev] = fwd;
        g.origin_[fwd] = *src;
        g.origin_[rev] = *dst;
        if (labeled && !edges_[i].label.empty()) {
            const auto& alpha = g.alphabet_;
            const int k = static_cast<int>(std::find(alpha.begin(), alpha.end(), resolved[i].first) - alpha.begin()) + 1;
            g.labels_[fwd] = resolved[i].second ? -k : k;
            g.labels_[rev] = -g.labels_[fwd];
        }
    }

    // Incidence lists in dart order.
    const std::size_t nv = g.vertex_names_.size();
    g.offsets_.assign(nv + 1, 0);
    for (std::size_t d = 0; d < n_darts; ++d)
        ++g.offsets_[g.origin_[d] + 1];
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.incident_.resize(n_darts);
    std::vector<int> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (std::size_t d = 0; d < n_darts; ++d)
        g.incident_[fill[g.origin_[d]]++] = static_cast<int>(d);

    g.dart_edge_.assign(n_darts, -1);
    for (std::size_t d = 0; d < n_darts; ++d) {
        if (static_cast<int>(d) < g.inv_[d]) {
            g.dart_edge_[d] = g.dart_edge_[g.inv_[d]] = static_cast<int>(g.edge_darts_.size());
            g.edge_darts_.push_back(static_cast<int>(d));
        }
    }
    return g;
}

GraphMorphism identity_morphism(GraphPtr g)
{
    GraphMorphism m;
    m.name = "id";
    m.vmap.resize(g->num_vertices());
    m.dmap.resize(g->num_darts());
    std::iota(m.vmap.begin(), m.vmap.end(), 0);
    std::iota(m.dmap.begin(), m.dmap.end(), 0);
    m.source = g;
    m.target = std::move(g);
    return m;
}

MorphismReport validate_morphism(const GraphMorphism& m)
{
    MorphismReport report;
    auto& out = report.violations;
    if (!m.source || !m.target) {
        out.push_back("morphism has no source or target graph");
        return report;
    }
    const Graph& s = *m.source;
    const Graph& t = *m.target;
    if (m.vmap.size() != s.num_vertices() || m.dmap.size() != s.num_darts()) {
        out.push_back("vertex or dart map has the wrong size");
        return report;
    }
    for (std::size_t v = 0; v < s.num_vertices(); ++v)
        if (m.vmap[v] < 0 || m.vmap[v] >= static_cast<int>(t.num_vertices()))
            out.push_back("vertex " + s.vertex_name(static_cast<int>(v)) + " is unmapped");
    for (std::size_t d = 0; d < s.num_darts(); ++d)
        if (m.dmap[d] < 0 || m.dmap[d] >= static_cast<int>(t.num_darts()))
            out.push_back("dart " + s.dart_name(static_cast<int>(d)) + " is unmapped");
    if (!out.empty())
        return report;

    const bool check_labels = s.labeled() && t.labeled();
    for (std::size_t i = 0; i < s.num_darts(); ++i) {
        const int d = static_cast<int>(i);
        const int e = m.dmap[d];
        if (t.origin(e) != m.vmap[s.origin(d)])
            out.push_back("dart " + s.dart_name(d) + ": origin maps to " + t.vertex_name(m.vmap[s.origin(d)]) +
                          " but image dart " + t.dart_name(e) + " starts at " + t.vertex_name(t.origin(e)));
        if (m.dmap[s.inv(d)] != t.inv(e))
            out.push_back("dart " + s.dart_name(d) + ": involution not preserved (reverse maps to " +
                          t.dart_name(m.dmap[s.inv(d)]) + ", expected " + t.dart_name(t.inv(e)) + ")");
        if (check_labels && s.label_text(d) != t.label_text(e))
            out.push_back("dart " + s.dart_name(d) + ": label " + s.label_text(d) + " maps to label " + t.label_text(e));
    }
    return report;
}

bool identical(const Graph& a, const Graph& b)
{
    if (a.num_vertices() != b.num_vertices() || a.num_darts() != b.num_darts() || a.labeled() != b.labeled())
        return false;
    for (int v = 0; v < static_cast<int>(a.num_vertices()); ++v)
        if (a.vertex_name(v) != b.vertex_name(v))
            return false;
    for (int d = 0; d < static_cast<int>(a.num_darts()); ++d)
        if (a.dart_name(d) != b.dart_name(d) || a.origin(d) != b.origin(d) || a.inv(d) != b.inv(d) ||
            a.label_text(d) != b.label_text(d))
            return false;
    return true;
}

long euler_characteristic(const Graph& g)
{
    return static_cast<long>(g.num_vertices()) - static_cast<long>(g.num_edges());
}

std::vector<std::vector<int>> connected_components(const Graph& g)
{
    const int n = static_cast<int>(g.num_vertices());
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> result;
    for (int start = 0; start < n; ++start) {
        if (comp[start] >= 0)
            continue;
        const int id = static_cast<int>(result.size());
        std::vector<int> members{start};
        comp[start] = id;
        for (std::size_t head = 0; head < members.size(); ++head)
            for (int d : g.darts_at(members[head])) {
                const int w = g.terminus(d);
                if (comp[w] < 0) {
                    comp[w] = id;
                    members.push_back(w);
                }
            }
        std::sort(members.begin(), members.end());
        result.push_back(std::move(members));
    }
    return result;
}

bool is_connected(const Graph& g)
{
    return g.num_vertices() > 0 && connected_components(g).size() == 1;
}

long free_rank(const Graph& g)
{
    if (!is_connected(g))
        throw PreconditionError("free_rank requires a non-empty connected graph");
    return 1 - euler_characteristic(g);
}

Rational average_degree_after_folds(long vertices, long edges, long folds)
{
    if (folds < 0 || folds >= vertices)
        throw PreconditionError("fold count must satisfy 0 <= f < |V|");
    Rational value(2 * edges - 2 * folds, vertices - folds);
    value.canonicalize();
    return value;
}

Rational average_degree_after_folds(const Graph& g, long folds)
{
    return average_degree_after_folds(static_cast<long>(g.num_vertices()), static_cast<long>(g.num_edges()), folds);
}

GraphPtr subgraph(const Graph& g, std::span<const int> vertices, std::span<const int> edges, std::string name)
{
    Graph::Builder b(std::move(name));
    if (g.labeled())
        b.alphabet(g.alphabet());
    for (int v : vertices)
        b.add_vertex(g.vertex_name(v));
    for (int e : edges) {
        const int d = g.edge_dart(e);
        b.add_darts(g.dart_name(d), g.dart_name(g.inv(d)), g.vertex_name(g.origin(d)), g.vertex_name(g.terminus(d)),
                    g.label_text(d));
    }
    return b.build_shared();
}

} // namespace covercomm
