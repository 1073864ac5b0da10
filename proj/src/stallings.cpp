#include "covercomm/stallings.hpp"

#include "covercomm/error.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace covercomm {

/// Incremental folding of a labeled graph held as a table; merges are queued
/// and resolved with a union-find so each fold is amortized constant work.
class Folder {
public:
    explicit Folder(int rank) : rank_(rank), cols_(2 * rank) {}

    int add_vertex()
    {
        parent_.push_back(static_cast<int>(parent_.size()));
        table_.resize(table_.size() + cols_, -1);
        return parent_.back();
    }

    int find(int x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void add_edge(int u, int c, int v)
    {
        link(u, c, v);
        drain();
    }

    /// Path spelling w from u; ends at `end` if given, else at a fresh vertex.
    int add_path(int u, const Word& w, int end = -1)
    {
        int cur = find(u);
        for (std::size_t i = 0; i < w.size(); ++i) {
            const int c = letter_column(w[i]);
            const bool last = i + 1 == w.size();
            if (!(last && end >= 0)) {
                const int next = table_[cur * cols_ + c];
                if (next >= 0) {
                    cur = find(next);
                    continue;
                }
            }
            const int next = last && end >= 0 ? end : add_vertex();
            add_edge(cur, c, next);
            cur = find(next);
        }
        if (w.empty() && end >= 0) {
            queue_.emplace_back(u, end);
            drain();
        }
        return find(cur);
    }

    SubgroupGraph finish(int base)
    {
        base = find(base);
        const int n = static_cast<int>(parent_.size());
        std::vector<char> alive(n, 0);
        std::vector<int> degree(n, 0);
        for (int v = 0; v < n; ++v) {
            if (find(v) != v)
                continue;
            alive[v] = 1;
            for (int c = 0; c < cols_; ++c)
                degree[v] += table_[v * cols_ + c] >= 0;
        }
        std::vector<int> stack;
        for (int v = 0; v < n; ++v)
            if (alive[v] && v != base && degree[v] <= 1)
                stack.push_back(v);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            if (!alive[v])
                continue;
            alive[v] = 0;
            for (int c = 0; c < cols_; ++c) {
                const int t = table_[v * cols_ + c];
                if (t < 0)
                    continue;
                table_[v * cols_ + c] = -1;
                table_[t * cols_ + (c ^ 1)] = -1;
                if (--degree[t] <= 1 && t != base && alive[t])
                    stack.push_back(t);
            }
        }
        return canonical(rank_, table_, base);
    }

    /// Breadth-first relabeling from `base` (a, A, b, B, ... order), keeping
    /// the reachable part only.
    static SubgroupGraph canonical(int rank, const std::vector<int>& table, int base)
    {
        const int cols = 2 * rank;
        std::map<int, int> label;
        std::vector<int> order{base};
        label[base] = 0;
        for (std::size_t h = 0; h < order.size(); ++h)
            for (int c = 0; c < cols; ++c) {
                const int t = table[static_cast<std::size_t>(order[h]) * cols + c];
                if (t >= 0 && label.emplace(t, static_cast<int>(order.size())).second)
                    order.push_back(t);
            }
        SubgroupGraph s;
        s.rank_ = rank;
        s.vertices_ = static_cast<int>(order.size());
        s.table_.assign(order.size() * cols, -1);
        for (std::size_t i = 0; i < order.size(); ++i)
            for (int c = 0; c < cols; ++c) {
                const int t = table[static_cast<std::size_t>(order[i]) * cols + c];
                if (t >= 0)
                    s.table_[i * cols + c] = label.at(t);
            }
        return s;
    }

private:
    void link(int u, int c, int v)
    {
        u = find(u);
        v = find(v);
        const int x = table_[u * cols_ + c];
        if (x >= 0) {
            queue_.emplace_back(x, v);
            return;
        }
        const int y = table_[v * cols_ + (c ^ 1)];
        if (y >= 0) {
            queue_.emplace_back(y, u);
            return;
        }
        table_[u * cols_ + c] = v;
        table_[v * cols_ + (c ^ 1)] = u;
    }

    void drain()
    {
        while (!queue_.empty()) {
            auto [a, b] = queue_.front();
            queue_.pop_front();
            a = find(a);
            b = find(b);
            if (a == b)
                continue;
            if (b < a)
                std::swap(a, b);
            std::vector<std::pair<int, int>> moved;
            for (int c = 0; c < cols_; ++c) {
                const int t = table_[b * cols_ + c];
                if (t < 0)
                    continue;
                moved.emplace_back(c, t);
                table_[b * cols_ + c] = -1;
                if (t != b)
                    table_[t * cols_ + (c ^ 1)] = -1;
            }
            parent_[b] = a;
            for (auto [c, t] : moved)
                link(a, c, t);
        }
    }

    int rank_, cols_;
    std::vector<int> parent_;
    std::vector<int> table_;
    std::deque<std::pair<int, int>> queue_;
};

SubgroupGraph SubgroupGraph::from_generators(int rank, const std::vector<Word>& generators)
{
    if (rank < 0)
        throw PreconditionError("negative ambient rank");
    Folder f(rank);
    const int base = f.add_vertex();
    for (const Word& g : generators) {
        check_word(g, rank);
        const Word w = reduce(g);
        if (!w.empty())
            f.add_path(base, w, base);
    }
    return f.finish(base);
}

SubgroupGraph SubgroupGraph::from_table(int rank, std::vector<int> table, int basepoint)
{
    const int cols = 2 * rank;
    if (cols == 0 || table.size() % cols != 0)
        throw PreconditionError("table size is not a multiple of 2 * rank");
    const int n = static_cast<int>(table.size()) / cols;
    if (basepoint < 0 || basepoint >= n)
        throw PreconditionError("basepoint outside the table");
    Folder f(rank);
    for (int v = 0; v < n; ++v)
        f.add_vertex();
    for (int v = 0; v < n; ++v)
        for (int c = 0; c < cols; ++c) {
            const int t = table[v * cols + c];
            if (t >= n)
                throw PreconditionError("table entry out of range");
            if (t >= 0)
                f.add_edge(v, c, t);
        }
    return f.finish(basepoint);
}

SubgroupGraph SubgroupGraph::from_action(const std::vector<Perm>& perms, int base)
{
    const int rank = static_cast<int>(perms.size());
    if (rank == 0)
        return whole(0);
    const int n = static_cast<int>(perms[0].size());
    std::vector<int> table(static_cast<std::size_t>(n) * 2 * rank, -1);
    for (int i = 0; i < rank; ++i) {
        if (static_cast<int>(perms[i].size()) != n)
            throw PreconditionError("permutations of different degrees");
        for (int v = 0; v < n; ++v) {
            const int t = perms[i][v];
            if (t < 0 || t >= n || table[t * 2 * rank + 2 * i + 1] >= 0)
                throw PreconditionError("not a permutation");
            table[v * 2 * rank + 2 * i] = t;
            table[t * 2 * rank + 2 * i + 1] = v;
        }
    }
    return Folder::canonical(rank, table, base);
}

SubgroupGraph SubgroupGraph::whole(int rank)
{
    SubgroupGraph s;
    s.rank_ = rank;
    s.vertices_ = 1;
    s.table_.assign(2 * rank, 0);
    return s;
}

long SubgroupGraph::num_edges() const
{
    long count = 0;
    for (std::size_t i = 0; i < table_.size(); i += 2)
        count += table_[i] >= 0;
    return count;
}

bool SubgroupGraph::complete() const
{
    return std::none_of(table_.begin(), table_.end(), [](int t) { return t < 0; });
}

int SubgroupGraph::trace(int v, const Word& w) const
{
    for (Letter x : w) {
        if (v < 0)
            return -1;
        if (x == 0 || std::abs(x) > rank_)
            throw PreconditionError("letter outside the ambient alphabet");
        v = target(v, x);
    }
    return v;
}

GraphPtr SubgroupGraph::graph(const std::string& name) const
{
    Graph::Builder b(name);
    b.alphabet(standard_alphabet(rank_));
    const std::size_t nv = static_cast<std::size_t>(vertices_);
    for (std::size_t v = 0; v < nv; ++v)
        b.add_vertex(numbered_id("v", v, nv));
    const std::size_t ne = static_cast<std::size_t>(num_edges());
    std::size_t e = 0;
    for (int v = 0; v < vertices_; ++v)
        for (int i = 1; i <= rank_; ++i) {
            const int t = target(v, i);
            if (t >= 0)
                b.add_edge(numbered_id("e", e++, ne), numbered_id("v", v, nv), numbered_id("v", t, nv),
                           letter_text(standard_alphabet(rank_), i));
        }
    return b.build_shared();
}

bool membership(const SubgroupGraph& s, const Word& w)
{
    return s.trace(0, reduce(w)) == 0;
}

std::optional<long> index(const SubgroupGraph& s)
{
    if (!s.complete())
        return std::nullopt;
    return s.num_vertices();
}

SubgroupGraph conjugate(const SubgroupGraph& s, const Word& w)
{
    check_word(w, s.rank());
    const Word r = reduce(w);
    if (s.complete()) {
        // w S w^-1 is the stabilizer of 0.w^-1.
        return Folder::canonical(s.rank(), s.table(), s.trace(0, inverse(r)));
    }
    Folder f(s.rank());
    const int n = s.num_vertices();
    const int cols = 2 * s.rank();
    for (int v = 0; v < n; ++v)
        f.add_vertex();
    for (int v = 0; v < n; ++v)
        for (int c = 0; c < cols; c += 2) {
            const int t = s.table()[v * cols + c];
            if (t >= 0)
                f.add_edge(v, c, t);
        }
    const int base = f.add_vertex();
    f.add_path(base, r, 0);
    return f.finish(base);
}

SubgroupGraph intersect(const SubgroupGraph& s, const SubgroupGraph& t)
{
    if (s.rank() != t.rank())
        throw PreconditionError("intersect: ambient ranks differ (" + std::to_string(s.rank()) + " vs " +
                                std::to_string(t.rank()) + ")");
    const int cols = 2 * s.rank();
    std::map<std::pair<int, int>, int> id;
    std::vector<std::pair<int, int>> pairs{{0, 0}};
    id[{0, 0}] = 0;
    std::vector<int> table;
    for (std::size_t h = 0; h < pairs.size(); ++h) {
        const auto [u, v] = pairs[h];
        table.resize((h + 1) * cols, -1);
        for (int c = 0; c < cols; ++c) {
            const int a = s.table()[u * cols + c];
            const int b = t.table()[v * cols + c];
            if (a < 0 || b < 0)
                continue;
            auto [it, fresh] = id.emplace(std::make_pair(a, b), static_cast<int>(pairs.size()));
            if (fresh)
                pairs.emplace_back(a, b);
            table[h * cols + c] = it->second;
        }
    }
    if (cols == 0)
        return SubgroupGraph::whole(0);
    return SubgroupGraph::from_table(s.rank(), std::move(table), 0);
}

bool is_normal(const SubgroupGraph& s)
{
    for (int x = 1; x <= s.rank(); ++x)
        if (conjugate(s, Word{x}) != s)
            return false;
    return true;
}

SubgroupGraph normal_core(const SubgroupGraph& s)
{
    if (!s.complete())
        throw PreconditionError("normal_core requires a finite-index subgroup");
    SubgroupGraph core = s;
    for (int v = 1; v < s.num_vertices(); ++v) {
        if (is_normal(core))
            break;
        core = intersect(core, Folder::canonical(s.rank(), s.table(), v));
    }
    return core;
}

std::vector<Word> schreier_representatives(const SubgroupGraph& s)
{
    const int cols = 2 * s.rank();
    std::vector<Word> prefix(s.num_vertices());
    std::vector<char> seen(s.num_vertices(), 0);
    std::vector<int> order{0};
    seen[0] = 1;
    for (std::size_t h = 0; h < order.size(); ++h)
        for (int c = 0; c < cols; ++c) {
            const int t = s.table()[order[h] * cols + c];
            if (t >= 0 && !seen[t]) {
                seen[t] = 1;
                prefix[t] = prefix[order[h]];
                prefix[t].push_back(column_letter(c));
                order.push_back(t);
            }
        }
    return prefix;
}

std::vector<Word> basis(const SubgroupGraph& s)
{
    const int cols = 2 * s.rank();
    const int n = s.num_vertices();
    // Tree edges as (vertex, positive column) pairs.
    std::vector<char> seen(n, 0);
    std::vector<char> tree(static_cast<std::size_t>(n) * cols, 0);
    std::vector<int> order{0};
    seen[0] = 1;
    for (std::size_t h = 0; h < order.size(); ++h)
        for (int c = 0; c < cols; ++c) {
            const int u = order[h];
            const int t = s.table()[u * cols + c];
            if (t >= 0 && !seen[t]) {
                seen[t] = 1;
                order.push_back(t);
                if (c % 2 == 0)
                    tree[u * cols + c] = 1;
                else
                    tree[t * cols + (c - 1)] = 1;
            }
        }
    const std::vector<Word> prefix = schreier_representatives(s);
    std::vector<Word> out;
    for (int v = 0; v < n; ++v)
        for (int c = 0; c < cols; c += 2) {
            const int t = s.table()[v * cols + c];
            if (t < 0 || tree[v * cols + c])
                continue;
            Word w = prefix[v];
            w.push_back(column_letter(c));
            out.push_back(concat(w, inverse(prefix[t])));
        }
    return out;
}

std::vector<Perm> coset_action(const SubgroupGraph& s)
{
    if (!s.complete())
        throw PreconditionError("coset_action requires a finite-index subgroup");
    std::vector<Perm> perms(s.rank(), Perm(s.num_vertices()));
    for (int i = 0; i < s.rank(); ++i)
        for (int v = 0; v < s.num_vertices(); ++v)
            perms[i][v] = s.target(v, i + 1);
    return perms;
}

SubgroupGraph preimage(const SubgroupGraph& k, const std::vector<Word>& images)
{
    if (!k.complete())
        throw PreconditionError("preimage requires a finite-index subgroup");
    std::vector<Perm> perms;
    for (const Word& w : images) {
        check_word(w, k.rank());
        Perm p(k.num_vertices());
        for (int v = 0; v < k.num_vertices(); ++v)
            p[v] = k.trace(v, w);
        perms.push_back(std::move(p));
    }
    return SubgroupGraph::from_action(perms, 0);
}

// ---------------------------------------------------------------------------

Embedding::Embedding(int source_rank, int target_rank, std::vector<Word> images)
    : m_(source_rank), n_(target_rank), images_(std::move(images))
{
    if (static_cast<int>(images_.size()) != m_)
        throw InputError("expected " + std::to_string(m_) + " image words, got " + std::to_string(images_.size()));
    for (Word& w : images_) {
        check_word(w, n_);
        w = reduce(w);
    }

    // Wedge of weighted paths at vertex 0; the first edge of path j carries
    // the j-th source generator.
    int vertices = 1;
    for (int j = 0; j < m_; ++j) {
        const Word& w = images_[j];
        int cur = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const int next = i + 1 == w.size() ? 0 : vertices++;
            edges_.push_back({cur, next, w[i], i == 0 ? Word{j + 1} : Word{}});
            cur = next;
        }
    }

    // Weighted folding. Before two vertices are identified the non-basepoint
    // one is re-gauged so that the two folded edges carry the same weight.
    const int cols = 2 * n_;
    while (true) {
        std::map<std::pair<int, int>, std::pair<int, bool>> seen;
        int e1 = -1, e2 = -1;
        bool r1 = false, r2 = false;
        for (int e = 0; e < static_cast<int>(edges_.size()) && e1 < 0; ++e) {
            const Edge& edge = edges_[e];
            for (int side = 0; side < 2 && e1 < 0; ++side) {
                const int at = side == 0 ? edge.from : edge.to;
                const int c = side == 0 ? letter_column(edge.x) : letter_column(-edge.x);
                auto [it, fresh] = seen.emplace(std::make_pair(at, c), std::make_pair(e, side == 1));
                if (!fresh && it->second.first != e) {
                    e1 = it->second.first;
                    r1 = it->second.second;
                    e2 = e;
                    r2 = side == 1;
                }
            }
        }
        if (e1 < 0)
            break;
        // Both read from the common vertex: far end and weight along that reading.
        auto far = [&](int e, bool rev) { return rev ? edges_[e].from : edges_[e].to; };
        auto weight = [&](int e, bool rev) { return rev ? inverse(edges_[e].weight) : edges_[e].weight; };
        int v1 = far(e1, r1), v2 = far(e2, r2);
        Word w1 = weight(e1, r1), w2 = weight(e2, r2);
        if (v1 != v2) {
            if (v2 == 0) {
                std::swap(v1, v2);
                std::swap(w1, w2);
            }
            const Word g = concat(inverse(w2), w1);
            const Word gi = inverse(g);
            for (Edge& edge : edges_) {
                if (edge.to == v2)
                    edge.weight = concat(edge.weight, g);
                if (edge.from == v2)
                    edge.weight = concat(gi, edge.weight);
            }
            for (Edge& edge : edges_) {
                if (edge.from == v2)
                    edge.from = v1;
                if (edge.to == v2)
                    edge.to = v1;
            }
        }
        edges_.erase(edges_.begin() + e2);
    }

    // Compact vertex ids and index the edges by (vertex, column).
    std::map<int, int> id{{0, 0}};
    for (const Edge& e : edges_)
        for (int v : {e.from, e.to})
            id.emplace(v, static_cast<int>(id.size()));
    for (Edge& e : edges_) {
        e.from = id.at(e.from);
        e.to = id.at(e.to);
    }
    const int nv = static_cast<int>(id.size());
    slots_.assign(static_cast<std::size_t>(nv) * cols, -1);
    std::vector<int> table(static_cast<std::size_t>(nv) * cols, -1);
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        const Edge& edge = edges_[e];
        slots_[edge.from * cols + letter_column(edge.x)] = 2 * e;
        slots_[edge.to * cols + letter_column(-edge.x)] = 2 * e + 1;
        table[edge.from * cols + letter_column(edge.x)] = edge.to;
        table[edge.to * cols + letter_column(-edge.x)] = edge.from;
    }
    image_ = n_ == 0 ? SubgroupGraph::whole(0) : SubgroupGraph::from_table(n_, std::move(table), 0);
}

std::optional<Word> Embedding::pull_back(const Word& g) const
{
    check_word(g, n_);
    const int cols = 2 * n_;
    int v = 0;
    Word h;
    for (Letter x : reduce(g)) {
        const int slot = slots_[v * cols + letter_column(x)];
        if (slot < 0)
            return std::nullopt;
        const Edge& e = edges_[slot / 2];
        const bool backwards = slot % 2 == 1;
        const Word w = backwards ? inverse(e.weight) : e.weight;
        h.insert(h.end(), w.begin(), w.end());
        v = backwards ? e.from : e.to;
    }
    if (v != 0)
        return std::nullopt;
    return reduce(std::move(h));
}

} // namespace covercomm
