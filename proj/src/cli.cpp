#include "covercomm/cli.hpp"

#include "covercomm/abelian.hpp"
#include "covercomm/amalgam.hpp"
#include "covercomm/certificate.hpp"
#include "covercomm/covering.hpp"
#include "covercomm/stallings.hpp"
#include "covercomm/text_format.hpp"
#include "covercomm/vh_complex.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#ifndef COVERCOMM_VERSION
#define COVERCOMM_VERSION "0.0.0"
#endif

namespace covercomm::cli {

const char* version() { return COVERCOMM_VERSION; }

namespace {

using text::Section;

struct Options {
    std::string out_dir;
    long max_vertices = 96;
    long max_index = 1000;
    int max_degree = 6;
    long cap = 0;
    bool injective = false;
    bool horizontal_first = false;
    std::vector<std::string> files;

    std::optional<long> cap_opt() const { return cap > 0 ? std::optional<long>(cap) : std::nullopt; }
    SearchOptions search() const { return {Kernel::Parallel, threads_from_environment()}; }
};

class FileError : public InputError {
public:
    FileError(std::string path, const InputError& e) : InputError(e.message(), e.line(), e.column()), path(std::move(path))
    {
    }
    std::string path;
};

struct Input {
    std::string path;
    std::string contents;
    std::vector<Section> doc;

    template <class F>
    auto parse(F&& f) const -> decltype(f())
    {
        try {
            return f();
        } catch (const FileError&) {
            throw;
        } catch (const DigestMismatch&) {
            throw;
        } catch (const InputError& e) {
            throw FileError(path, e);
        }
    }
    [[noreturn]] void fail(const std::string& message) const { throw FileError(path, InputError(message)); }

    const Section& one(std::string_view kind) const
    {
        auto s = text::sections_of(doc, kind);
        if (s.size() != 1)
            fail("expected one '" + std::string(kind) + "' section, found " + std::to_string(s.size()));
        return *s[0];
    }
    std::vector<const Section*> all(std::string_view kind) const { return text::sections_of(doc, kind); }
};

Input load(const std::string& path)
{
    Input in{path, {}, {}};
    in.contents = in.parse([&] { return text::read_file(path); });
    in.doc = in.parse([&] { return text::parse_document(in.contents); });
    return in;
}

std::vector<Input> load_all(const Options& o, std::size_t lo, std::size_t hi)
{
    if (o.files.size() < lo || o.files.size() > hi)
        throw InputError("expected " + (lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi)) +
                         " input file(s), got " + std::to_string(o.files.size()));
    std::vector<Input> out;
    for (const std::string& f : o.files)
        out.push_back(load(f));
    return out;
}

struct Result {
    int status = Ok;
    std::ostringstream report;
    std::optional<Certificate> cert;
};

Certificate certificate(const std::string& kind, const std::vector<Input>& inputs)
{
    Certificate c;
    c.kind = kind;
    c.tool_version = version();
    for (const Input& in : inputs)
        c.add_input(std::filesystem::path(in.path).filename().string(), in.contents);
    return c;
}

void write_graphs_of(std::ostream& os, const Input& in, const std::map<std::string, GraphPtr>& graphs)
{
    for (const Section* s : in.all("graph"))
        text::write_graph(os, *graphs.at(s->name()));
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// ---------------------------------------------------------------------------
// cover

void cover_verify(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    const Input& f = in[0];
    const auto graphs = f.parse([&] { return text::read_graphs(f.doc); });
    const GraphMorphism m = f.parse([&] { return text::read_map(f.one("map"), graphs); });
    const CoveringReport rep = analyze_covering(m);

    r.cert = certificate("covering", in);
    r.cert->summary.emplace_back("covering", yes_no(rep.is_covering));
    if (rep.is_covering) {
        r.cert->summary.emplace_back("degree", std::to_string(*rep.degree));
        r.report << m.name << ": covering of degree " << *rep.degree << "\n";
    } else {
        r.report << m.name << ": not a covering\n";
        for (const std::string& v : rep.describe(*m.source))
            r.report << v << "\n";
        r.status = Negative;
    }
    std::ostringstream payload;
    write_graphs_of(payload, f, graphs);
    text::write_map(payload, m);
    r.cert->payload = payload.str();
}

void cover_refine(const Options& o, Result& r)
{
    std::vector<GraphPtr> gs;
    for (const Input& f : load_all(o, 1, 2))
        for (const auto& [name, g] : f.parse([&] { return text::read_graphs(f.doc); }))
            gs.push_back(g);
    if (gs.empty())
        throw InputError("no graph section in the input");
    for (const GraphPtr& g : gs) {
        const DegreeRefinement d = degree_refinement(*g);
        r.report << "graph " << g->name() << ": " << d.classes.size() << " class(es)\n";
        for (std::size_t c = 0; c < d.classes.size(); ++c) {
            r.report << "class " << c + 1 << ":";
            for (int v : d.classes[c])
                r.report << " " << g->vertex_name(v);
            r.report << "\n";
        }
        for (const auto& row : d.matrix) {
            r.report << "row";
            for (long x : row)
                r.report << " " << x;
            r.report << "\n";
        }
    }
    if (gs.size() == 2)
        r.report << "same-universal-cover " << yes_no(same_universal_cover(*gs[0], *gs[1])) << "\n";
    if (gs.size() > 2)
        throw InputError("at most two graphs can be compared");
}

void cover_common(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 2);
    std::vector<GraphPtr> gs;
    for (const Input& f : in) {
        const auto graphs = f.parse([&] { return text::read_graphs(f.doc); });
        for (const Section* s : f.all("graph"))
            gs.push_back(graphs.at(s->name()));
    }
    if (gs.size() != 2)
        throw InputError("cover common needs exactly two graphs, found " + std::to_string(gs.size()));
    if (gs[0]->name() == gs[1]->name())
        throw InputError("the two graphs must have different names");
    const CommonCoverResult res = find_common_cover(gs[0], gs[1], o.max_vertices, o.search());

    r.cert = certificate("common-cover", in);
    r.cert->params.emplace_back("max-vertices", std::to_string(o.max_vertices));
    std::ostringstream payload;
    text::write_graph(payload, *gs[0]);
    text::write_graph(payload, *gs[1]);
    switch (res.status) {
    case SearchStatus::Found: {
        const CommonCover& cc = *res.cover;
        r.cert->summary.emplace_back("status", "found");
        r.cert->summary.emplace_back("vertices", std::to_string(cc.z->num_vertices()));
        r.cert->summary.emplace_back("degree1", std::to_string(cc.degree1));
        r.cert->summary.emplace_back("degree2", std::to_string(cc.degree2));
        r.report << "common cover " << cc.z->name() << " with " << cc.z->num_vertices() << " vertices, degrees "
                 << cc.degree1 << " and " << cc.degree2 << "\n";
        text::write_graph(payload, *cc.z);
        text::write_map(payload, cc.p1);
        text::write_map(payload, cc.p2);
        break;
    }
    case SearchStatus::NoneExists:
        r.cert->summary.emplace_back("status", "none");
        r.report << "no common cover: the degree refinements differ\n";
        r.status = Negative;
        break;
    case SearchStatus::Exhausted:
        r.cert->summary.emplace_back("status", "exhausted");
        r.report << "no common cover with at most " << o.max_vertices << " vertices (" << res.candidates
                 << " candidates); increase --max-vertices\n";
        r.status = Inconclusive;
        break;
    }
    r.cert->payload = payload.str();
}

// ---------------------------------------------------------------------------
// stallings

std::vector<std::pair<text::SubgroupSpec, SubgroupGraph>> subgroups(const std::vector<Input>& in)
{
    std::vector<std::pair<text::SubgroupSpec, SubgroupGraph>> out;
    for (const Input& f : in)
        for (const Section* s : f.all("subgroup")) {
            auto spec = f.parse([&] { return text::read_subgroup(*s); });
            out.emplace_back(spec, SubgroupGraph::from_generators(spec.rank, spec.generators));
        }
    if (out.empty())
        throw InputError("no subgroup section in the input");
    return out;
}

std::string index_text(const SubgroupGraph& s)
{
    auto i = index(s);
    return i ? std::to_string(*i) : "infinite";
}

void print_subgroup(std::ostream& os, const std::string& name, const SubgroupGraph& s)
{
    text::write_subgroup(os, {name, s.rank(), basis(s)});
}

void stallings_index(const Options& o, Result& r)
{
    for (const auto& [spec, s] : subgroups(load_all(o, 1, 1)))
        r.report << "index " << spec.name << " " << index_text(s) << "\n";
}

void stallings_core(const Options& o, Result& r)
{
    for (const auto& [spec, s] : subgroups(load_all(o, 1, 1))) {
        if (!index(s))
            throw PreconditionError("subgroup " + spec.name + " has infinite index");
        const SubgroupGraph core = normal_core(s);
        print_subgroup(r.report, spec.name + "-core", core);
        r.report << "# index " << index_text(core) << "\n";
    }
}

void stallings_normal(const Options& o, Result& r)
{
    for (const auto& [spec, s] : subgroups(load_all(o, 1, 1))) {
        const bool n = is_normal(s);
        r.report << "normal " << spec.name << " " << yes_no(n) << "\n";
        if (!n)
            r.status = Negative;
    }
}

void stallings_intersect(const Options& o, Result& r)
{
    auto s = subgroups(load_all(o, 1, 2));
    if (s.size() != 2)
        throw InputError("intersect needs exactly two subgroups, found " + std::to_string(s.size()));
    if (s[0].second.rank() != s[1].second.rank())
        throw PreconditionError("subgroups live in free groups of different rank");
    const SubgroupGraph x = intersect(s[0].second, s[1].second);
    print_subgroup(r.report, s[0].first.name + "-" + s[1].first.name, x);
    r.report << "# rank " << x.free_rank() << ", index " << index_text(x) << "\n";
}

void stallings_basis(const Options& o, Result& r)
{
    for (const auto& [spec, s] : subgroups(load_all(o, 1, 1))) {
        print_subgroup(r.report, spec.name, s);
        r.report << "# rank " << s.free_rank() << ", index " << index_text(s) << "\n";
    }
}

// ---------------------------------------------------------------------------
// comm

Commensuration commensuration(const Input& f)
{
    return f.parse([&] { return text::read_commensuration(f.one("commensuration")); });
}

void write_extension(std::ostream& os, const NormalCommensuration& nc)
{
    text::write_commensuration(os, nc.base);
    text::write_subgroup(os, {"N", nc.base.h_rank, basis(nc.n)});
}

void comm_validate(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    const Commensuration c = commensuration(in[0]);
    const CommensurationReport v = validate_commensuration(c);
    r.report << "valid " << yes_no(v.valid) << "\n";
    for (const std::string& p : v.problems)
        r.report << "problem " << p << "\n";
    if (v.valid) {
        r.report << "trivial " << yes_no(v.trivial) << "\n";
        r.report << "index1 " << (v.index1 ? std::to_string(*v.index1) : "infinite") << "\n";
        r.report << "index2 " << (v.index2 ? std::to_string(*v.index2) : "infinite") << "\n";
    } else {
        r.status = Negative;
    }
}

void comm_normalize(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    const Commensuration c = commensuration(in[0]);
    auto nc = find_normal_extension(c, o.max_index);
    if (!nc) {
        r.report << "no simultaneously normal subgroup of index <= " << o.max_index
                 << " in H; increase --max-index\n";
        r.status = Inconclusive;
        return;
    }
    r.cert = certificate("normal-extension", in);
    r.cert->params.emplace_back("max-index", std::to_string(o.max_index));
    r.cert->summary.emplace_back("index", std::to_string(nc->index_in_h()));
    r.cert->summary.emplace_back("steps", std::to_string(nc->steps));
    r.report << "normal extension: [H:N] = " << nc->index_in_h() << " after " << nc->steps << " step(s); [G1:i1(N)] = "
             << index_text(nc->image1) << ", [G2:i2(N)] = " << index_text(nc->image2) << "\n";
    std::ostringstream payload;
    write_extension(payload, *nc);
    r.cert->payload = payload.str();
}

void print_amalgam(std::ostream& os, const FiniteAmalgam& fa)
{
    os << "amalgam |A| = " << fa.order_a << ", |B| = " << fa.order_b << ", |C| = " << fa.order_c << "\n";
    auto gens = [&](const char* name, const PermGroup& g) {
        os << name << " degree " << g.degree << ":";
        for (const Perm& p : g.gens)
            os << " " << perm_text(p);
        os << "\n";
    };
    gens("A", fa.a);
    gens("B", fa.b);
    gens("C", fa.c);
}

void comm_quotient(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    auto nc = find_normal_extension(commensuration(in[0]), o.max_index);
    if (!nc) {
        r.report << "no simultaneously normal subgroup of index <= " << o.max_index << " in H\n";
        r.status = Inconclusive;
        return;
    }
    print_amalgam(r.report, quotient_amalgam(*nc));
}

void comm_finite_quotient(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    auto nc = find_normal_extension(commensuration(in[0]), o.max_index);
    if (!nc) {
        r.report << "no simultaneously normal subgroup of index <= " << o.max_index << " in H\n";
        r.status = Inconclusive;
        return;
    }
    const FiniteAmalgam fa = quotient_amalgam(*nc);
    print_amalgam(r.report, fa);
    auto q = find_finite_quotient(fa, o.max_degree, o.injective, o.search());
    if (!q) {
        r.report << "no " << (o.injective ? "factor-faithful " : "") << "quotient of degree <= " << o.max_degree
                 << "; increase --max-degree\n";
        r.status = Inconclusive;
        return;
    }
    r.report << "finite quotient of degree " << q->degree << ", image order " << q->image_order << "\n";
    if (q->injective_on_factors) {
        const FreeKernelData k = free_kernel_data(fa, *q);
        r.report << "free kernel rank " << k.kernel_rank << " (formula " << to_string(k.formula) << ")\n";
    }
    r.cert = certificate("finite-quotient", in);
    r.cert->params.emplace_back("max-index", std::to_string(o.max_index));
    r.cert->params.emplace_back("max-degree", std::to_string(o.max_degree));
    r.cert->params.emplace_back("injective", yes_no(o.injective));
    r.cert->summary.emplace_back("degree", std::to_string(q->degree));
    r.cert->summary.emplace_back("image-order", std::to_string(q->image_order));
    std::ostringstream payload;
    write_extension(payload, *nc);
    text::write_quotient(payload, *q);
    r.cert->payload = payload.str();
}

void comm_obstruct(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    const Commensuration c = commensuration(in[0]);
    const ObstructionReport rep = obstruction_report(c, {o.max_index, o.max_degree}, o.search());
    r.report << to_string(rep.verdict) << ": " << rep.message << "\n";
    r.cert = certificate("obstruction", in);
    r.cert->params.emplace_back("max-index", std::to_string(o.max_index));
    r.cert->params.emplace_back("max-degree", std::to_string(o.max_degree));
    r.cert->summary.emplace_back("verdict", verdict_slug(rep.verdict));
    std::ostringstream payload;
    if (rep.extension)
        write_extension(payload, *rep.extension);
    else
        text::write_commensuration(payload, c);
    if (rep.quotient)
        text::write_quotient(payload, *rep.quotient);
    r.cert->payload = payload.str();
    switch (rep.verdict) {
    case ObstructionVerdict::NecessaryConditionsHold:
        r.status = Ok;
        break;
    case ObstructionVerdict::Invalid:
        r.status = Negative;
        break;
    default:
        r.status = Inconclusive;
    }
}

// ---------------------------------------------------------------------------
// vh

SquareComplex complex_of(const Input& f)
{
    return f.parse([&] { return text::read_complex(f.one("graph")); });
}

void print_edges(std::ostream& os, const char* label, const Graph& g, const std::vector<int>& edges)
{
    os << label;
    for (int e : edges)
        os << " " << g.edge_name(e);
    os << "\n";
}

void vh_partition_cmd(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    const SquareComplex sc = complex_of(in[0]);
    const VHResult vh = vh_partition(sc, !o.horizontal_first);
    if (!vh.partition) {
        r.report << "no VH structure: " << vh.describe(sc) << "\n";
        r.status = Negative;
        return;
    }
    print_edges(r.report, "vertical", *sc.skeleton, vh.partition->vertical_edges());
    print_edges(r.report, "horizontal", *sc.skeleton, vh.partition->horizontal_edges());
}

void vh_cross_section(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    const SquareComplex sc = complex_of(in[0]);
    const CrossSectionAnalysis a = analyze_cross_section(sc, !o.horizontal_first);
    if (!a.vh.partition) {
        r.report << "no VH structure: " << a.vh.describe(sc) << "\n";
        r.status = Negative;
        return;
    }
    const CrossSection& cs = *a.cross;
    r.cert = certificate("cross-section", in);
    r.cert->params.emplace_back("horizontal-first", yes_no(o.horizontal_first));
    r.cert->summary.emplace_back("coverings", yes_no(a.coverings()));
    std::ostringstream payload;
    text::write_complex(payload, sc);
    text::write_graph(payload, *cs.z);
    text::write_graph(payload, *cs.x1);
    if (cs.component2 != cs.component1)
        text::write_graph(payload, *cs.x2);
    text::write_map(payload, cs.p1);
    text::write_map(payload, cs.p2);
    r.cert->payload = payload.str();
    r.report << "z: " << cs.z->num_vertices() << " vertices, " << cs.z->num_edges() << " edges\n";
    for (const auto& [name, rep, leg] :
         {std::tuple{"p1", &a.cover1, &cs.p1}, std::tuple{"p2", &a.cover2, &cs.p2}}) {
        if (rep->is_covering) {
            r.report << name << ": covering of degree " << *rep->degree << "\n";
            r.cert->summary.emplace_back(std::string("degree") + name[1], std::to_string(*rep->degree));
        } else {
            r.report << name << ": not a covering\n";
            for (const std::string& v : rep->describe(*leg->source))
                r.report << v << "\n";
        }
    }
    if (!a.coverings())
        r.status = Negative;
}

void vh_analyze(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    const SquareComplex sc = complex_of(in[0]);
    const CrossSectionAnalysis a = analyze_cross_section(sc, !o.horizontal_first);
    if (!a.vh.partition) {
        r.report << "no VH structure: " << a.vh.describe(sc) << "\n";
        r.status = Negative;
        return;
    }
    const CrossSection& cs = *a.cross;
    print_edges(r.report, "vertical", *sc.skeleton, a.vh.partition->vertical_edges());
    print_edges(r.report, "horizontal", *sc.skeleton, a.vh.partition->horizontal_edges());
    r.report << "z vertices " << cs.z->num_vertices() << "\nz edges " << cs.z->num_edges() << "\neuler " << a.euler
             << "\n";
    if (a.rank)
        r.report << "rank " << *a.rank << "\n";
    r.report << "euler1 " << a.euler1 << "\neuler2 " << a.euler2 << "\n";
    r.report << "covering1 " << yes_no(a.cover1.is_covering) << "\ncovering2 " << yes_no(a.cover2.is_covering) << "\n";
    if (a.cover1.degree)
        r.report << "degree1 " << *a.cover1.degree << "\n";
    if (a.cover2.degree)
        r.report << "degree2 " << *a.cover2.degree << "\n";
    r.report << "folds1 " << a.folds1 << "\nfolds2 " << a.folds2 << "\n";
    for (const auto& [rep, leg] : {std::pair{&a.cover1, &cs.p1}, std::pair{&a.cover2, &cs.p2}})
        for (const std::string& v : rep->describe(*leg->source))
            r.report << "violation " << leg->name << " " << v << "\n";
    if (!a.coverings())
        r.status = Negative;
}

void vh_commensuration(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    const SquareComplex sc = complex_of(in[0]);
    const CrossSectionAnalysis a = analyze_cross_section(sc, !o.horizontal_first);
    if (!a.vh.partition) {
        r.report << "no VH structure: " << a.vh.describe(sc) << "\n";
        r.status = Negative;
        return;
    }
    if (!a.coverings()) {
        r.report << "projections are not both coverings\n";
        for (const auto& [rep, leg] : {std::pair{&a.cover1, &a.cross->p1}, std::pair{&a.cover2, &a.cross->p2}})
            for (const std::string& v : rep->describe(*leg->source))
                r.report << leg->name << " " << v << "\n";
        r.status = Negative;
        return;
    }
    text::write_commensuration(r.report, commensuration_from_cross_section(*a.cross));
}

// ---------------------------------------------------------------------------
// abelian

AbelianCommensuration abelian_of(const Input& f)
{
    return f.parse([&] { return text::read_abelian(f.one("abelian-commensuration")); });
}

void abelian_outfinite(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    const AbelianCommensuration c = abelian_of(in[0]);
    const OutFiniteResult res = is_out_finite(c, o.cap_opt());
    r.report << to_string(res.verdict) << "\n";
    r.cert = certificate("out-finite", in);
    if (o.cap > 0)
        r.cert->params.emplace_back("cap", std::to_string(o.cap));
    r.cert->summary.emplace_back("verdict", verdict_slug(res.verdict));
    std::ostringstream payload;
    text::write_abelian(payload, c);
    switch (res.verdict) {
    case OutFiniteVerdict::OutFinite:
        r.report << "holonomy group of order " << res.gamma.elements.size() << "\n";
        r.cert->summary.emplace_back("order", std::to_string(res.gamma.elements.size()));
        text::write_matrix_group(payload, res.gamma.elements);
        break;
    case OutFiniteVerdict::NotOutFinite: {
        const InfiniteOrderWitness& w = *res.gamma.witness;
        r.report << "infinite-order element " << generator_word_text(w.word) << " = " << matrix_text(w.matrix)
                 << "\n";
        r.report << w.reason << "\n";
        text::write_witness(payload, w);
        r.status = Negative;
        break;
    }
    case OutFiniteVerdict::Inconclusive:
        r.report << "no finite-order certificate within cap " << res.gamma.cap << "; increase --cap\n";
        r.status = Inconclusive;
        break;
    }
    r.cert->payload = payload.str();
}

void abelian_complete(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    const AbelianCommensuration c = abelian_of(in[0]);
    const CompletionResult res = complete_abelian(c, o.cap_opt());
    if (!res.completion) {
        r.report << "no completion: " << to_string(res.out.verdict) << "\n";
        if (res.out.gamma.witness)
            r.report << "infinite-order element " << generator_word_text(res.out.gamma.witness->word) << " = "
                     << matrix_text(res.out.gamma.witness->matrix) << "\n";
        r.status = res.out.verdict == OutFiniteVerdict::NotOutFinite ? Negative : Inconclusive;
        return;
    }
    const AbelianCompletion& k = *res.completion;
    r.report << "completion: |Gamma| = " << k.gamma.size() << ", [K:G1] = " << k.index1 << ", [K:G2] = " << k.index2
             << "\n";
    r.cert = certificate("completion", in);
    if (o.cap > 0)
        r.cert->params.emplace_back("cap", std::to_string(o.cap));
    r.cert->summary.emplace_back("index1", to_string(k.index1));
    r.cert->summary.emplace_back("index2", to_string(k.index2));
    std::ostringstream payload;
    text::write_abelian(payload, c);
    text::write_completion(payload, k);
    r.cert->payload = payload.str();
}

void abelian_verify(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    const Input& f = in[0];
    const AbelianCommensuration c = abelian_of(f);
    const AbelianCompletion k = f.parse([&] { return text::read_completion(f.one("completion"), c.d); });
    const auto problems = verify_completion(c, k);
    r.report << "completion " << (problems.empty() ? "verified" : "rejected") << "\n";
    for (const std::string& p : problems)
        r.report << "problem " << p << "\n";
    if (!problems.empty())
        r.status = Negative;
}

void abelian_average(const Options& o, Result& r)
{
    auto in = load_all(o, 1, 1);
    const Input& f = in[0];
    const AveragingInstance inst = f.parse([&] { return text::read_averaging(f.one("averaging")); });
    const AveragingResult res = equivariant_average(inst);
    const auto problems = check_averaging(inst, res);
    r.report << "gamma-order " << res.gamma_order() << "\nrho " << matrix_text(res.rho) << "\n";
    for (const IntVector& v : res.kernel)
        r.report << "kernel " << vector_text(v) << "\n";
    for (const std::string& p : problems)
        r.report << "problem " << p << "\n";
    if (!problems.empty())
        r.status = Negative;
}

// ---------------------------------------------------------------------------

void verify_cmd(const Options& o, Result& r)
{
    if (o.files.empty())
        throw InputError("verify needs a certificate file");
    const Input cert_file = load(o.files[0]);
    const Certificate cert = cert_file.parse([&] { return parse_certificate(cert_file.contents); });
    std::vector<InputFile> inputs;
    for (std::size_t i = 1; i < o.files.size(); ++i)
        inputs.push_back({o.files[i], load(o.files[i]).contents});
    const CertificateCheck check = cert_file.parse([&] { return verify_certificate(cert, inputs); });
    r.report << cert.kind << " certificate " << (check.valid() ? "verified" : "rejected") << "\n";
    for (const std::string& p : check.problems)
        r.report << "problem " << p << "\n";
    if (!check.valid())
        r.status = Negative;
}

struct Command {
    const char* module;
    const char* verb;
    const char* help;
    void (*run)(const Options&, Result&);
};

const std::vector<Command>& commands()
{
    static const std::vector<Command> list = {
        {"cover", "verify", "check that a map is a covering", cover_verify},
        {"cover", "refine", "degree refinement of one or two graphs", cover_refine},
        {"cover", "common", "search for a finite common cover", cover_common},
        {"stallings", "index", "index of a subgroup", stallings_index},
        {"stallings", "core", "normal core of a finite-index subgroup", stallings_core},
        {"stallings", "normal", "normality test", stallings_normal},
        {"stallings", "intersect", "intersection of two subgroups", stallings_intersect},
        {"stallings", "basis", "free basis of a subgroup", stallings_basis},
        {"comm", "validate", "check the commensuration conditions", comm_validate},
        {"comm", "normalize", "largest simultaneously normal subgroup of H", comm_normalize},
        {"comm", "quotient", "finite quotient amalgam", comm_quotient},
        {"comm", "finite-quotient", "finite quotient of the quotient amalgam", comm_finite_quotient},
        {"comm", "obstruct", "run the normal-extension and finite-quotient tests", comm_obstruct},
        {"vh", "partition", "vertical/horizontal edge partition", vh_partition_cmd},
        {"vh", "cross-section", "cross-section graph and projections", vh_cross_section},
        {"vh", "analyze", "counts and covering checks for the cross-section", vh_analyze},
        {"vh", "commensuration", "induced commensuration of free groups", vh_commensuration},
        {"abelian", "outfinite", "finiteness of the combined holonomy", abelian_outfinite},
        {"abelian", "complete", "construct a completion", abelian_complete},
        {"abelian", "verify", "check a completion", abelian_verify},
        {"abelian", "average", "equivariant averaging of a retraction", abelian_average},
    };
    return list;
}

std::string slug(const std::string& s)
{
    std::string out;
    for (char ch : s)
        out += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '-';
    return out;
}

void emit(const Options& o, const std::string& name, const Result& r, std::ostream& out)
{
    std::string text;
    if (r.cert) {
        std::istringstream lines(r.report.str());
        for (std::string line; std::getline(lines, line);)
            text += "# " + line + "\n";
        text += r.cert->render();
    } else {
        text = r.report.str();
    }
    out << text;
    if (o.out_dir.empty())
        return;
    std::filesystem::create_directories(o.out_dir);
    const auto path = std::filesystem::path(o.out_dir) / (r.cert ? r.cert->kind + ".cert" : slug(name) + ".txt");
    std::ofstream f(path);
    f << text;
    if (!f)
        throw InputError("cannot write '" + path.string() + "'");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Coverings, commensurations and completions", "covercomm"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version()));
    app.add_option("--out", o.out_dir, "also write the result (certificate) into this directory");
    app.add_option("--max-vertices", o.max_vertices, "bound for the common cover search")->check(CLI::PositiveNumber);
    app.add_option("--max-index", o.max_index, "bound on [H:N] in the normal extension search")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-degree", o.max_degree, "largest permutation degree for quotient searches")
        ->check(CLI::PositiveNumber);
    app.add_option("--cap", o.cap, "largest holonomy group order to enumerate")->check(CLI::PositiveNumber);
    app.add_flag("--injective", o.injective, "require quotients faithful on both factors");
    app.add_flag("--horizontal-first", o.horizontal_first, "make the block of the least edge horizontal");

    std::vector<std::pair<CLI::App*, const Command*>> leaves;
    std::map<std::string, CLI::App*> modules;
    for (const Command& c : commands()) {
        CLI::App*& m = modules[c.module];
        if (!m) {
            m = app.add_subcommand(c.module, std::string(c.module) + " commands");
            m->require_subcommand(1);
        }
        CLI::App* leaf = m->add_subcommand(c.verb, c.help);
        leaf->add_option("files", o.files, "input files");
        leaves.emplace_back(leaf, &c);
    }
    CLI::App* verify = app.add_subcommand("verify", "re-check a certificate, optionally against its inputs");
    verify->add_option("files", o.files, "certificate, then input files")->required();
    static const Command verify_command{"verify", "", "", verify_cmd};
    leaves.emplace_back(verify, &verify_command);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return BadInput;
    }

    const Command* cmd = nullptr;
    for (const auto& [leaf, c] : leaves)
        if (leaf->parsed())
            cmd = c;
    const std::string name = cmd->verb[0] ? std::string(cmd->module) + "-" + cmd->verb : cmd->module;
    try {
        Result r;
        cmd->run(o, r);
        emit(o, name, r, out);
        return r.status;
    } catch (const FileError& e) {
        err << e.path;
        if (e.line() > 0)
            err << ":" << e.line() << ":" << e.column();
        err << ": error: " << e.message() << "\n";
    } catch (const InputError& e) {
        err << "error: ";
        if (e.line() > 0)
            err << "line " << e.line() << ", column " << e.column() << ": ";
        err << e.message() << "\n";
    } catch (const InvalidMorphismError& e) {
        err << "error: " << e.what() << "\n";
        for (const std::string& v : e.report().violations)
            err << "  " << v << "\n";
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
    }
    return BadInput;
}

} // namespace covercomm::cli
