#include "covercomm/text_format.hpp"

#include "covercomm/error.hpp"
#include "covercomm/perm.hpp"
#include "covercomm/word.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace covercomm::text {

namespace {

const std::set<std::string, std::less<>> kHeaders = {
    "graph",    "map",       "subgroup", "commensuration", "abelian-commensuration", "averaging", "completion",
    "quotient", "witness",   "matrix-group", "certificate"};

// Runs f, re-throwing input errors at the position of the given token.
template <class F>
auto at(const Line& line, std::size_t token, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const InputError& e) {
        const int base = token < line.columns.size() ? line.columns[token] : 1;
        throw InputError(e.message(), line.number, base + std::max(e.column(), 1) - 1);
    } catch (const PreconditionError& e) {
        line.fail(token, e.what());
    }
}

void unknown(const Line& line, const Section& s)
{
    line.fail(0, "unexpected '" + line.tokens[0] + "' in " + s.kind() + " section");
}

// Nested bracket lists: "[[1,2],[3,4]]" -> depth-2 lists of entry strings.
struct Nested {
    std::vector<Nested> items;
    std::string atom;
    bool is_list = false;
};

class BracketParser {
public:
    explicit BracketParser(std::string_view s) : s_(s) {}

    std::vector<Nested> all()
    {
        std::vector<Nested> out;
        skip();
        while (pos_ < s_.size()) {
            out.push_back(item());
            skip();
            if (pos_ < s_.size() && s_[pos_] == ',') {
                ++pos_;
                skip();
            }
        }
        return out;
    }

private:
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    [[noreturn]] void fail(const std::string& what) const
    {
        throw InputError(what, 0, static_cast<int>(pos_) + 1);
    }
    Nested item()
    {
        skip();
        Nested n;
        if (pos_ < s_.size() && s_[pos_] == '[') {
            n.is_list = true;
            ++pos_;
            skip();
            if (pos_ < s_.size() && s_[pos_] == ']') {
                ++pos_;
                return n;
            }
            for (;;) {
                n.items.push_back(item());
                skip();
                if (pos_ >= s_.size())
                    fail("unclosed '['");
                if (s_[pos_] == ']') {
                    ++pos_;
                    return n;
                }
                if (s_[pos_] != ',')
                    fail("expected ',' or ']'");
                ++pos_;
            }
        }
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' ||
                                    s_[pos_] == '/' || s_[pos_] == '+'))
            ++pos_;
        if (pos_ == start)
            fail(pos_ < s_.size() ? "unexpected '" + std::string(1, s_[pos_]) + "'" : "missing entry");
        n.atom = std::string(s_.substr(start, pos_ - start));
        return n;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

template <class T>
T parse_entry(const std::string& atom);

template <>
Integer parse_entry<Integer>(const std::string& atom)
{
    Rational q = parse_rational(atom);
    if (q.get_den() != 1)
        throw InputError("'" + atom + "' is not an integer");
    return q.get_num();
}

template <>
Rational parse_entry<Rational>(const std::string& atom)
{
    return parse_rational(atom);
}

template <class T>
std::vector<Mat<T>> parse_matrices(const Line& line, std::size_t token, int dim)
{
    return at(line, token, [&] {
        const std::string text = line.rest(token);
        std::vector<Nested> items = BracketParser(text).all();
        std::vector<Mat<T>> out;
        if (items.empty())
            throw InputError("missing matrix");
        if (!items[0].is_list) {
            if (static_cast<int>(items.size()) != dim * dim)
                throw InputError("expected " + std::to_string(dim * dim) + " entries, found " +
                                 std::to_string(items.size()));
            Mat<T> m(dim, dim);
            for (int i = 0; i < dim * dim; ++i) {
                if (items[i].is_list)
                    throw InputError("mixed bracketed and plain entries");
                m(i / dim, i % dim) = parse_entry<T>(items[i].atom);
            }
            out.push_back(m);
            return out;
        }
        for (const Nested& mat : items) {
            if (!mat.is_list || static_cast<int>(mat.items.size()) != dim)
                throw InputError("matrix must have " + std::to_string(dim) + " rows");
            Mat<T> m(dim, dim);
            for (int i = 0; i < dim; ++i) {
                const Nested& row = mat.items[i];
                if (!row.is_list || static_cast<int>(row.items.size()) != dim)
                    throw InputError("row " + std::to_string(i + 1) + " must have " + std::to_string(dim) + " entries");
                for (int j = 0; j < dim; ++j) {
                    if (row.items[j].is_list)
                        throw InputError("nested too deeply");
                    m(i, j) = parse_entry<T>(row.items[j].atom);
                }
            }
            out.push_back(m);
        }
        return out;
    });
}

template <class T>
std::vector<T> parse_vector(const Line& line, std::size_t token, int dim)
{
    return at(line, token, [&] {
        // Vectors print as "(1/2,0)"; accept brackets too.
        std::string text = line.rest(token);
        std::replace(text.begin(), text.end(), '(', '[');
        std::replace(text.begin(), text.end(), ')', ']');
        std::vector<Nested> items = BracketParser(text).all();
        if (items.size() == 1 && items[0].is_list)
            items = items[0].items;
        if (static_cast<int>(items.size()) != dim)
            throw InputError("expected a vector of length " + std::to_string(dim));
        std::vector<T> v;
        for (const Nested& n : items) {
            if (n.is_list)
                throw InputError("nested too deeply");
            v.push_back(parse_entry<T>(n.atom));
        }
        return v;
    });
}

int positive(const Line& line, std::size_t token)
{
    const long v = line.integer(token);
    if (v < 0 || v > 1000000)
        line.fail(token, "expected a non-negative count");
    return static_cast<int>(v);
}

std::vector<Word> words(const Line& line, int rank)
{
    std::vector<Word> out;
    for (std::size_t i = 1; i < line.tokens.size(); ++i)
        out.push_back(at(line, i, [&] { return parse_word(line.tokens[i], rank); }));
    return out;
}

const Line& single(const Section& s, const std::string& key)
{
    const Line* found = nullptr;
    for (const Line& l : s.body)
        if (l.tokens[0] == key) {
            if (found)
                l.fail(0, "duplicate '" + key + "'");
            found = &l;
        }
    if (!found)
        s.header.fail(0, s.kind() + " section is missing '" + key + "'");
    return *found;
}

std::string dart_ref(const Graph& g, int d)
{
    const int e = g.edge_of(d);
    return g.edge_dart(e) == d ? g.edge_name(e) : g.edge_name(e) + "'";
}

} // namespace

std::string Line::rest(std::size_t i) const
{
    if (i >= tokens.size())
        return {};
    return raw.substr(columns[i] - 1);
}

void Line::fail(std::size_t token, const std::string& message) const
{
    const int column = token < columns.size() ? columns[token] : static_cast<int>(raw.size()) + 1;
    throw InputError(message, number, column);
}

void Line::expect_tokens(std::size_t lo, std::size_t hi) const
{
    if (tokens.size() < lo)
        fail(tokens.size(), "'" + tokens[0] + "' needs " + std::to_string(lo - 1) + " argument(s)");
    if (tokens.size() > hi)
        fail(hi, "too many arguments to '" + tokens[0] + "'");
}

long Line::integer(std::size_t token) const
{
    if (token >= tokens.size())
        fail(token, "missing integer");
    const std::string& t = tokens[token];
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != t.size() || t.empty())
        fail(token, "'" + t + "' is not an integer");
    return v;
}

std::vector<Section> parse_document(std::string_view text)
{
    std::vector<Section> doc;
    int number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string raw(text.substr(start, end - start));
        start = end + 1;
        ++number;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        Line line;
        line.number = number;
        line.raw = raw;
        for (std::size_t i = 0; i < raw.size();) {
            if (std::isspace(static_cast<unsigned char>(raw[i]))) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j])))
                ++j;
            line.tokens.push_back(raw.substr(i, j - i));
            line.columns.push_back(static_cast<int>(i) + 1);
            i = j;
        }
        if (line.tokens.empty()) {
            if (end == text.size())
                break;
            continue;
        }
        if (kHeaders.count(line.tokens[0])) {
            doc.push_back({line, {}});
        } else if (doc.empty()) {
            line.fail(0, "expected a section header, found '" + line.tokens[0] + "'");
        } else {
            doc.back().body.push_back(line);
        }
        if (end == text.size())
            break;
    }
    return doc;
}

std::vector<const Section*> sections_of(const std::vector<Section>& doc, std::string_view kind)
{
    std::vector<const Section*> out;
    for (const Section& s : doc)
        if (s.kind() == kind)
            out.push_back(&s);
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GraphPtr read_graph(const Section& s)
{
    s.header.expect_tokens(2, 2);
    Graph::Builder b(s.name());
    for (const Line& l : s.body) {
        const std::string& key = l.tokens[0];
        if (key == "vertex") {
            l.expect_tokens(2, 2);
            b.add_vertex(l.tokens[1]);
        } else if (key == "edge") {
            l.expect_tokens(4, 5);
            b.add_edge(l.tokens[1], l.tokens[2], l.tokens[3], l.tokens.size() == 5 ? l.tokens[4] : std::string());
        } else if (key != "square" && key != "relator") {
            unknown(l, s);
        }
    }
    // Point at the offending token before the builder reports it without a position.
    std::set<std::string, std::less<>> vertices, ids;
    for (const Line& l : s.body)
        if (l.tokens[0] == "vertex" && !vertices.insert(l.tokens[1]).second)
            l.fail(1, "duplicate vertex '" + l.tokens[1] + "'");
    for (const Line& l : s.body) {
        if (l.tokens[0] != "edge")
            continue;
        if (!ids.insert(l.tokens[1]).second || !ids.insert(l.tokens[1] + "'").second)
            l.fail(1, "duplicate edge '" + l.tokens[1] + "'");
        for (std::size_t i : {2, 3})
            if (!vertices.count(l.tokens[i]))
                l.fail(i, "edge '" + l.tokens[1] + "' has unknown endpoint '" + l.tokens[i] + "'");
    }
    return at(s.header, 0, [&] { return b.build_shared(); });
}

void write_graph(std::ostream& os, const Graph& g)
{
    os << "graph " << (g.name().empty() ? "G" : g.name()) << "\n";
    for (int v = 0; v < static_cast<int>(g.num_vertices()); ++v)
        os << "vertex " << g.vertex_name(v) << "\n";
    for (int e = 0; e < static_cast<int>(g.num_edges()); ++e) {
        const int d = g.edge_dart(e);
        os << "edge " << g.edge_name(e) << " " << g.vertex_name(g.origin(d)) << " " << g.vertex_name(g.terminus(d));
        if (g.labeled())
            os << " " << g.label_text(d);
        os << "\n";
    }
}

std::map<std::string, GraphPtr> read_graphs(const std::vector<Section>& doc)
{
    std::map<std::string, GraphPtr> out;
    for (const Section* s : sections_of(doc, "graph")) {
        if (out.count(s->name()))
            s->header.fail(1, "duplicate graph '" + s->name() + "'");
        out[s->name()] = read_graph(*s);
    }
    return out;
}

GraphMorphism read_map(const Section& s, const std::map<std::string, GraphPtr>& graphs)
{
    s.header.expect_tokens(4, 4);
    auto graph = [&](std::size_t i) {
        auto it = graphs.find(s.header.tokens[i]);
        if (it == graphs.end())
            s.header.fail(i, "unknown graph '" + s.header.tokens[i] + "'");
        return it->second;
    };
    GraphMorphism m{s.name(), graph(2), graph(3), {}, {}};
    const Graph& src = *m.source;
    const Graph& dst = *m.target;
    m.vmap.assign(src.num_vertices(), -1);
    m.dmap.assign(src.num_darts(), -1);
    std::vector<char> explicit_(src.num_darts(), 0);
    for (const Line& l : s.body) {
        const std::string& key = l.tokens[0];
        if (key == "vmap") {
            l.expect_tokens(3, 3);
            auto u = src.find_vertex(l.tokens[1]);
            auto v = dst.find_vertex(l.tokens[2]);
            if (!u)
                l.fail(1, "unknown vertex '" + l.tokens[1] + "' of " + src.name());
            if (!v)
                l.fail(2, "unknown vertex '" + l.tokens[2] + "' of " + dst.name());
            m.vmap[*u] = *v;
        } else if (key == "dmap") {
            l.expect_tokens(3, 3);
            auto d = src.find_dart(l.tokens[1]);
            auto e = dst.find_dart(l.tokens[2]);
            if (!d)
                l.fail(1, "unknown dart '" + l.tokens[1] + "' of " + src.name());
            if (!e)
                l.fail(2, "unknown dart '" + l.tokens[2] + "' of " + dst.name());
            m.dmap[*d] = *e;
            explicit_[*d] = 1;
            if (!explicit_[src.inv(*d)])
                m.dmap[src.inv(*d)] = dst.inv(*e);
        } else {
            unknown(l, s);
        }
    }
    return m;
}

void write_map(std::ostream& os, const GraphMorphism& m)
{
    const Graph& src = *m.source;
    const Graph& dst = *m.target;
    os << "map " << (m.name.empty() ? "p" : m.name) << " " << src.name() << " " << dst.name() << "\n";
    for (int v = 0; v < static_cast<int>(src.num_vertices()); ++v)
        if (m.vmap[v] >= 0)
            os << "vmap " << src.vertex_name(v) << " " << dst.vertex_name(m.vmap[v]) << "\n";
    for (int e = 0; e < static_cast<int>(src.num_edges()); ++e) {
        const int d = src.edge_dart(e);
        if (m.dmap[d] >= 0)
            os << "dmap " << src.edge_name(e) << " " << dart_ref(dst, m.dmap[d]) << "\n";
    }
}

SquareComplex read_complex(const Section& s)
{
    GraphPtr g = read_graph(s);
    std::vector<Square> squares;
    for (const Line& l : s.body) {
        if (l.tokens[0] == "square") {
            l.expect_tokens(5, 5);
            squares.push_back(at(l, 1, [&] {
                return square_from_darts(*g, {l.tokens[1], l.tokens[2], l.tokens[3], l.tokens[4]});
            }));
        } else if (l.tokens[0] == "relator") {
            l.expect_tokens(2, 2);
            for (const Square& q : at(l, 1, [&] { return relator_squares(*g, l.tokens[1]); }))
                squares.push_back(q);
        }
    }
    return at(s.header, 0, [&] { return build_complex(g, squares); });
}

void write_complex(std::ostream& os, const SquareComplex& sc)
{
    const Graph& g = *sc.skeleton;
    write_graph(os, g);
    for (const Square& q : sc.squares) {
        os << "square";
        for (int d : q)
            os << " " << dart_ref(g, d);
        os << "\n";
    }
}

SubgroupSpec read_subgroup(const Section& s)
{
    s.header.expect_tokens(1, 2);
    SubgroupSpec out;
    if (!s.name().empty())
        out.name = s.name();
    out.rank = positive(single(s, "ambient"), 1);
    for (const Line& l : s.body) {
        if (l.tokens[0] == "ambient") {
            l.expect_tokens(2, 2);
        } else if (l.tokens[0] == "gen") {
            l.expect_tokens(2, 1 << 20);
            for (Word& w : words(l, out.rank))
                out.generators.push_back(std::move(w));
        } else {
            unknown(l, s);
        }
    }
    return out;
}

void write_subgroup(std::ostream& os, const SubgroupSpec& s)
{
    os << "subgroup " << s.name << "\nambient " << s.rank << "\n";
    for (const Word& w : s.generators)
        os << "gen " << word_text(w) << "\n";
}

Commensuration read_commensuration(const Section& s)
{
    s.header.expect_tokens(1, 2);
    Commensuration c;
    if (!s.name().empty())
        c.name = s.name();
    c.h_rank = positive(single(s, "h-rank"), 1);
    c.g1_rank = positive(single(s, "g1-rank"), 1);
    c.g2_rank = positive(single(s, "g2-rank"), 1);
    for (const Line& l : s.body) {
        const std::string& key = l.tokens[0];
        if (key == "h-rank" || key == "g1-rank" || key == "g2-rank") {
            l.expect_tokens(2, 2);
        } else if (key == "i1" || key == "i2") {
            std::vector<Word>& target = key == "i1" ? c.i1 : c.i2;
            for (Word& w : words(l, key == "i1" ? c.g1_rank : c.g2_rank))
                target.push_back(std::move(w));
        } else {
            unknown(l, s);
        }
    }
    for (int side = 1; side <= 2; ++side)
        if (static_cast<int>(c.images(side).size()) != c.h_rank)
            s.header.fail(0, "i" + std::to_string(side) + " has " + std::to_string(c.images(side).size()) +
                                 " words, h-rank is " + std::to_string(c.h_rank));
    return c;
}

void write_commensuration(std::ostream& os, const Commensuration& c)
{
    os << "commensuration " << c.name << "\nh-rank " << c.h_rank << "\ng1-rank " << c.g1_rank << "\ng2-rank "
       << c.g2_rank << "\n";
    for (int side = 1; side <= 2; ++side) {
        os << "i" << side;
        for (const Word& w : c.images(side))
            os << " " << word_text(w);
        os << "\n";
    }
}

std::vector<IntMatrix> parse_int_matrices(const Line& line, std::size_t token, int dim)
{
    return parse_matrices<Integer>(line, token, dim);
}

std::vector<RatMatrix> parse_rat_matrices(const Line& line, std::size_t token, int dim)
{
    return parse_matrices<Rational>(line, token, dim);
}

RatVector parse_rat_vector(const Line& line, std::size_t token, int dim)
{
    return parse_vector<Rational>(line, token, dim);
}

IntVector parse_int_vector(const Line& line, std::size_t token, int dim)
{
    return parse_vector<Integer>(line, token, dim);
}

AbelianCommensuration read_abelian(const Section& s)
{
    s.header.expect_tokens(1, 2);
    AbelianCommensuration c;
    if (!s.name().empty())
        c.name = s.name();
    const Line& dim = single(s, "dim");
    dim.expect_tokens(2, 2);
    c.d = positive(dim, 1);
    if (c.d < 1 || c.d > 8)
        dim.fail(1, "dimension must be between 1 and 8");
    auto one = [&](const std::string& key) {
        const Line& l = single(s, key);
        std::vector<IntMatrix> ms = parse_int_matrices(l, 1, c.d);
        if (ms.size() != 1)
            l.fail(1, "'" + key + "' takes one matrix");
        return ms[0];
    };
    c.m1 = one("m1");
    c.m2 = one("m2");
    for (const Line& l : s.body) {
        const std::string& key = l.tokens[0];
        if (key == "p1" || key == "p2") {
            for (IntMatrix& m : parse_int_matrices(l, 1, c.d))
                (key == "p1" ? c.p1 : c.p2).push_back(std::move(m));
        } else if (key != "dim" && key != "m1" && key != "m2") {
            unknown(l, s);
        }
    }
    return c;
}

void write_abelian(std::ostream& os, const AbelianCommensuration& c)
{
    os << "abelian-commensuration " << c.name << "\ndim " << c.d << "\nm1 " << matrix_text(c.m1) << "\nm2 "
       << matrix_text(c.m2) << "\n";
    for (int side = 1; side <= 2; ++side)
        for (const IntMatrix& a : c.p(side))
            os << "p" << side << " " << matrix_text(a) << "\n";
}

AveragingInstance read_averaging(const Section& s)
{
    s.header.expect_tokens(1, 2);
    AveragingInstance a;
    a.m.free_rank = positive(single(s, "free-rank"), 1);
    for (const Line& l : s.body)
        if (l.tokens[0] == "torsion")
            for (std::size_t i = 1; i < l.tokens.size(); ++i) {
                const long t = l.integer(i);
                if (t < 2)
                    l.fail(i, "torsion orders must be at least 2");
                a.m.torsion.push_back(Integer(t));
            }
    const int n = a.m.size();
    if (n == 0)
        s.header.fail(0, "the module is zero");
    bool have_rho = false;
    for (const Line& l : s.body) {
        const std::string& key = l.tokens[0];
        if (key == "gamma") {
            for (IntMatrix& m : parse_int_matrices(l, 1, n))
                a.gamma.push_back(a.m.reduce(std::move(m)));
        } else if (key == "z") {
            a.z.push_back(a.m.reduce(parse_int_vector(l, 1, n)));
        } else if (key == "rho0") {
            if (have_rho)
                l.fail(0, "duplicate 'rho0'");
            std::vector<IntMatrix> ms = parse_int_matrices(l, 1, n);
            if (ms.size() != 1)
                l.fail(1, "'rho0' takes one matrix");
            a.rho0 = a.m.reduce(ms[0]);
            have_rho = true;
        } else if (key != "free-rank" && key != "torsion") {
            unknown(l, s);
        }
    }
    if (!have_rho)
        s.header.fail(0, "averaging section is missing 'rho0'");
    return a;
}

void write_averaging(std::ostream& os, const AveragingInstance& a, const std::string& name)
{
    os << "averaging " << name << "\nfree-rank " << a.m.free_rank << "\n";
    if (!a.m.torsion.empty()) {
        os << "torsion";
        for (const Integer& t : a.m.torsion)
            os << " " << t;
        os << "\n";
    }
    for (const IntMatrix& g : a.gamma)
        os << "gamma " << matrix_text(g) << "\n";
    for (const IntVector& z : a.z)
        os << "z " << vector_text(z) << "\n";
    os << "rho0 " << matrix_text(a.rho0) << "\n";
}

AbelianCompletion read_completion(const Section& s, int dim)
{
    AbelianCompletion k;
    std::vector<RatVector> basis;
    for (const Line& l : s.body) {
        const std::string& key = l.tokens[0];
        if (key == "lattice") {
            basis.push_back(parse_rat_vector(l, 1, dim));
        } else if (key == "gamma") {
            for (IntMatrix& m : parse_int_matrices(l, 1, dim))
                k.gamma.push_back(std::move(m));
        } else if (key == "c1" || key == "c2") {
            std::vector<RatMatrix> ms = parse_rat_matrices(l, 1, dim);
            if (ms.size() != 1)
                l.fail(1, "'" + key + "' takes one matrix");
            (key == "c1" ? k.c1 : k.c2) = ms[0];
        } else if (key == "index1" || key == "index2") {
            l.expect_tokens(2, 2);
            (key == "index1" ? k.index1 : k.index2) = Integer(l.integer(1));
        } else {
            unknown(l, s);
        }
    }
    single(s, "c1");
    single(s, "c2");
    single(s, "index1");
    single(s, "index2");
    if (static_cast<int>(basis.size()) != dim)
        s.header.fail(0, "the lattice needs " + std::to_string(dim) + " basis vectors");
    k.l = at(s.header, 0, [&] { return Lattice::from_generators(dim, basis); });
    if (k.l.covolume() == 0)
        s.header.fail(0, "the lattice basis is singular");
    return k;
}

void write_completion(std::ostream& os, const AbelianCompletion& k)
{
    os << "completion K\n";
    for (const RatVector& b : k.l.basis())
        os << "lattice " << vector_text(b) << "\n";
    for (const IntMatrix& g : k.gamma)
        os << "gamma " << matrix_text(g) << "\n";
    os << "c1 " << matrix_text(k.c1) << "\nc2 " << matrix_text(k.c2) << "\nindex1 " << k.index1 << "\nindex2 "
       << k.index2 << "\n";
}

FiniteQuotientCertificate read_quotient(const Section& s)
{
    FiniteQuotientCertificate q;
    const Line& deg = single(s, "degree");
    deg.expect_tokens(2, 2);
    q.degree = positive(deg, 1);
    if (q.degree < 1)
        deg.fail(1, "degree must be positive");
    for (const Line& l : s.body) {
        const std::string& key = l.tokens[0];
        if (key == "a" || key == "b") {
            Perm p = at(l, 1, [&] { return parse_perm(l.rest(1), q.degree); });
            (key == "a" ? q.a_images : q.b_images).push_back(std::move(p));
        } else if (key == "image-order") {
            l.expect_tokens(2, 2);
            q.image_order = l.integer(1);
        } else if (key == "injective") {
            l.expect_tokens(2, 2);
            if (l.tokens[1] != "yes" && l.tokens[1] != "no")
                l.fail(1, "expected yes or no");
            q.injective_on_factors = l.tokens[1] == "yes";
        } else if (key != "degree") {
            unknown(l, s);
        }
    }
    return q;
}

void write_quotient(std::ostream& os, const FiniteQuotientCertificate& q)
{
    os << "quotient F\ndegree " << q.degree << "\nimage-order " << q.image_order << "\ninjective "
       << (q.injective_on_factors ? "yes" : "no") << "\n";
    for (const Perm& p : q.a_images)
        os << "a " << perm_text(p) << "\n";
    for (const Perm& p : q.b_images)
        os << "b " << perm_text(p) << "\n";
}

InfiniteOrderWitness read_witness(const Section& s, int dim)
{
    InfiniteOrderWitness w;
    const Line& word = single(s, "word");
    for (std::size_t i = 1; i < word.tokens.size(); ++i) {
        const long g = word.integer(i);
        if (g < 1)
            word.fail(i, "generator indices are 1-based");
        w.word.push_back(static_cast<int>(g - 1));
    }
    const Line& m = single(s, "matrix");
    std::vector<IntMatrix> ms = parse_int_matrices(m, 1, dim);
    if (ms.size() != 1)
        m.fail(1, "'matrix' takes one matrix");
    w.matrix = ms[0];
    const Line& e = single(s, "exponent");
    e.expect_tokens(2, 2);
    w.exponent = e.integer(1);
    for (const Line& l : s.body)
        if (l.tokens[0] != "word" && l.tokens[0] != "matrix" && l.tokens[0] != "exponent")
            unknown(l, s);
    return w;
}

void write_witness(std::ostream& os, const InfiniteOrderWitness& w)
{
    os << "witness W\nword";
    for (int g : w.word)
        os << " " << g + 1;
    os << "\nmatrix " << matrix_text(w.matrix) << "\nexponent " << w.exponent << "\n";
}

std::vector<IntMatrix> read_matrix_group(const Section& s, int dim)
{
    std::vector<IntMatrix> out;
    for (const Line& l : s.body) {
        if (l.tokens[0] != "element")
            unknown(l, s);
        for (IntMatrix& m : parse_int_matrices(l, 1, dim))
            out.push_back(std::move(m));
    }
    return out;
}

void write_matrix_group(std::ostream& os, const std::vector<IntMatrix>& elements, const std::string& name)
{
    os << "matrix-group " << name << "\n";
    for (const IntMatrix& g : elements)
        os << "element " << matrix_text(g) << "\n";
}

} // namespace covercomm::text
