#include "covercomm/certificate.hpp"

#include "covercomm/abelian.hpp"
#include "covercomm/amalgam.hpp"
#include "covercomm/covering.hpp"
#include "covercomm/text_format.hpp"
#include "covercomm/vh_complex.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace covercomm {

using text::Section;

std::string sha256_hex(std::string_view data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw std::runtime_error("sha256 failed");
    std::string out;
    char buf[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        out += buf;
    }
    return out;
}

namespace {

std::optional<std::string> lookup(const std::vector<std::pair<std::string, std::string>>& kv, std::string_view key)
{
    for (const auto& [k, v] : kv)
        if (k == key)
            return v;
    return std::nullopt;
}

const std::set<std::string, std::less<>> kKinds = {"covering",    "common-cover", "normal-extension",
                                                   "finite-quotient", "completion", "obstruction",
                                                   "cross-section",   "out-finite"};

} // namespace

std::string verdict_slug(ObstructionVerdict v)
{
    switch (v) {
    case ObstructionVerdict::Invalid:
        return "invalid";
    case ObstructionVerdict::ExtensionInconclusive:
        return "extension-inconclusive";
    case ObstructionVerdict::NoQuotientWithinBound:
        return "no-quotient";
    case ObstructionVerdict::NecessaryConditionsHold:
        return "holds";
    }
    return "?";
}

std::string verdict_slug(OutFiniteVerdict v)
{
    switch (v) {
    case OutFiniteVerdict::OutFinite:
        return "out-finite";
    case OutFiniteVerdict::NotOutFinite:
        return "not-out-finite";
    case OutFiniteVerdict::Inconclusive:
        return "inconclusive";
    }
    return "?";
}

std::optional<std::string> Certificate::param(std::string_view key) const { return lookup(params, key); }
std::optional<std::string> Certificate::summary_value(std::string_view key) const { return lookup(summary, key); }

void Certificate::add_input(const std::string& name, std::string_view contents)
{
    inputs.emplace_back(sha256_hex(contents), name);
}

std::string Certificate::render() const
{
    std::ostringstream os;
    os << "certificate " << kind << "\ntool covercomm " << tool_version << "\n";
    for (const auto& [k, v] : params)
        os << "param " << k << " " << v << "\n";
    for (const auto& [digest, name] : inputs)
        os << "input " << digest << " " << name << "\n";
    for (const auto& [k, v] : summary)
        os << "summary " << k << " " << v << "\n";
    os << payload;
    return os.str();
}

Certificate parse_certificate(std::string_view text)
{
    const auto doc = text::parse_document(text);
    if (doc.empty() || doc[0].kind() != "certificate")
        throw InputError("not a certificate: the first section must be 'certificate <kind>'", 1, 1);
    const Section& head = doc[0];
    head.header.expect_tokens(2, 2);
    Certificate c;
    c.kind = head.name();
    if (!kKinds.count(c.kind))
        head.header.fail(1, "unknown certificate kind '" + c.kind + "'");
    for (const text::Line& l : head.body) {
        const std::string& key = l.tokens[0];
        if (key == "tool") {
            l.expect_tokens(3, 3);
            if (l.tokens[1] != "covercomm")
                l.fail(1, "unknown tool '" + l.tokens[1] + "'");
            c.tool_version = l.tokens[2];
        } else if (key == "param" || key == "summary") {
            l.expect_tokens(3, 3);
            (key == "param" ? c.params : c.summary).emplace_back(l.tokens[1], l.tokens[2]);
        } else if (key == "input") {
            l.expect_tokens(3, 1 << 20);
            if (l.tokens[1].size() != 64 ||
                !std::all_of(l.tokens[1].begin(), l.tokens[1].end(), [](char ch) { return std::isxdigit(static_cast<unsigned char>(ch)) != 0; }))
                l.fail(1, "malformed digest");
            c.inputs.emplace_back(l.tokens[1], l.rest(2));
        } else {
            l.fail(0, "unexpected '" + key + "' in certificate header");
        }
    }
    if (c.tool_version.empty())
        head.header.fail(0, "certificate is missing the 'tool' line");
    // Payload: the original text from the second section on.
    if (doc.size() > 1) {
        std::size_t pos = 0;
        for (int line = 1; line < doc[1].header.number; ++line)
            pos = text.find('\n', pos) + 1;
        c.payload = std::string(text.substr(pos));
    }
    return c;
}

namespace {

struct Payload {
    std::vector<Section> doc;
    std::map<std::string, GraphPtr> graphs;

    // Parsed from the rendered certificate so that line numbers match the file.
    explicit Payload(const Certificate& c) : doc(text::parse_document(c.render()))
    {
        doc.erase(doc.begin());
        graphs = text::read_graphs(doc);
    }

    std::vector<const Section*> all(std::string_view kind) const { return text::sections_of(doc, kind); }
    const Section& one(std::string_view kind) const
    {
        auto s = all(kind);
        if (s.size() != 1)
            throw InputError("payload needs exactly one '" + std::string(kind) + "' section, found " +
                             std::to_string(s.size()));
        return *s[0];
    }
    std::vector<GraphMorphism> maps() const
    {
        std::vector<GraphMorphism> out;
        for (const Section* s : all("map"))
            out.push_back(text::read_map(*s, graphs));
        return out;
    }
};

long to_long(const Certificate& c, const std::string& key, bool summary = true)
{
    auto v = summary ? c.summary_value(key) : c.param(key);
    if (!v)
        throw InputError(std::string(summary ? "summary" : "param") + " '" + key + "' is missing");
    try {
        std::size_t used = 0;
        long x = std::stol(*v, &used);
        if (used == v->size())
            return x;
    } catch (const std::exception&) {
    }
    throw InputError("'" + key + "' is not an integer: " + *v);
}

std::string need(const Certificate& c, const std::string& key)
{
    auto v = c.summary_value(key);
    if (!v)
        throw InputError("summary '" + key + "' is missing");
    return *v;
}

void expect_eq(std::vector<std::string>& problems, const std::string& what, long claimed, long actual)
{
    if (claimed != actual)
        problems.push_back(what + " is " + std::to_string(actual) + ", certificate says " + std::to_string(claimed));
}

bool same_map(const GraphMorphism& a, const GraphMorphism& b)
{
    return identical(*a.source, *b.source) && identical(*a.target, *b.target) && a.vmap == b.vmap &&
           a.dmap == b.dmap;
}

void check_covering(const Certificate& c, const Payload& p, std::vector<std::string>& problems)
{
    auto maps = p.maps();
    if (maps.size() != 1)
        throw InputError("covering payload needs exactly one map");
    const CoveringReport r = analyze_covering(maps[0]);
    const bool claimed = need(c, "covering") == "yes";
    if (claimed != r.is_covering) {
        problems.push_back(claimed ? "map is not a covering" : "map is a covering");
        for (const std::string& v : r.describe(*maps[0].source))
            problems.push_back(v);
    }
    if (r.is_covering && r.degree)
        expect_eq(problems, "degree", to_long(c, "degree"), *r.degree);
}

void check_common_cover(const Certificate& c, const Payload& p, std::vector<std::string>& problems)
{
    const std::string status = need(c, "status");
    if (status == "found") {
        auto maps = p.maps();
        if (maps.size() != 2)
            throw InputError("common-cover payload needs two maps");
        if (maps[0].source != maps[1].source)
            problems.push_back("the two maps have different sources");
        if (!is_connected(*maps[0].source))
            problems.push_back("cover is not connected");
        for (int i = 0; i < 2; ++i) {
            const CoveringReport r = analyze_covering(maps[i]);
            if (!r.is_covering) {
                problems.push_back("leg " + std::to_string(i + 1) + " is not a covering");
                for (const std::string& v : r.describe(*maps[i].source))
                    problems.push_back(v);
            } else {
                expect_eq(problems, "degree" + std::to_string(i + 1), to_long(c, "degree" + std::to_string(i + 1)),
                          *r.degree);
            }
        }
        const long n = static_cast<long>(maps[0].source->num_vertices());
        expect_eq(problems, "vertex count", to_long(c, "vertices"), n);
        if (auto bound = c.param("max-vertices"); bound && n > to_long(c, "max-vertices", false))
            problems.push_back("cover exceeds max-vertices");
        return;
    }
    auto graphs = p.all("graph");
    if (graphs.size() != 2)
        throw InputError("common-cover payload needs the two input graphs");
    const GraphPtr g1 = p.graphs.at(graphs[0]->name()), g2 = p.graphs.at(graphs[1]->name());
    const bool same = same_universal_cover(*g1, *g2);
    if (status == "none") {
        if (same)
            problems.push_back("the graphs share a universal cover");
    } else if (status == "exhausted") {
        // No cheap check exists for a negative bounded search; replay it.
        auto r = find_common_cover(g1, g2, to_long(c, "max-vertices", false));
        if (r.status != SearchStatus::Exhausted)
            problems.push_back("bounded search does not exhaust");
    } else {
        throw InputError("unknown common-cover status '" + status + "'");
    }
}

Commensuration commensuration_of(const Payload& p) { return text::read_commensuration(p.one("commensuration")); }

std::optional<NormalCommensuration> extension_of(const Commensuration& comm, const Payload& p,
                                                 std::vector<std::string>& problems)
{
    const text::SubgroupSpec n = text::read_subgroup(p.one("subgroup"));
    if (n.rank != comm.h_rank)
        throw InputError("subgroup N must live in H (ambient " + std::to_string(comm.h_rank) + ")");
    auto nc = check_normal_extension(comm, SubgroupGraph::from_generators(n.rank, n.generators));
    if (!nc)
        problems.push_back("N is not a finite-index subgroup with normal images");
    return nc;
}

void check_quotient(const Certificate& c, const NormalCommensuration& nc, const Payload& p,
                    bool require_injective, std::vector<std::string>& problems)
{
    const FiniteQuotientCertificate q = text::read_quotient(p.one("quotient"));
    if (c.summary_value("degree"))
        expect_eq(problems, "quotient degree", to_long(c, "degree"), q.degree);
    if (c.summary_value("image-order"))
        expect_eq(problems, "image order", to_long(c, "image-order"), q.image_order);
    if (require_injective && !q.injective_on_factors)
        problems.push_back("quotient is not marked faithful on the factors");
    for (const std::string& s : verify_finite_quotient(quotient_amalgam(nc), q))
        problems.push_back(s);
}

void check_normal_extension_cert(const Certificate& c, const Payload& p, std::vector<std::string>& problems)
{
    const Commensuration comm = commensuration_of(p);
    if (auto nc = extension_of(comm, p, problems))
        expect_eq(problems, "index of N in H", to_long(c, "index"), nc->index_in_h());
}

void check_finite_quotient_cert(const Certificate& c, const Payload& p, std::vector<std::string>& problems)
{
    const Commensuration comm = commensuration_of(p);
    auto nc = extension_of(comm, p, problems);
    if (nc)
        check_quotient(c, *nc, p, c.param("injective").value_or("no") == "yes", problems);
}

void check_obstruction(const Certificate& c, const Payload& p, std::vector<std::string>& problems)
{
    const Commensuration comm = commensuration_of(p);
    const std::string verdict = need(c, "verdict");
    if (verdict == verdict_slug(ObstructionVerdict::Invalid)) {
        if (validate_commensuration(comm).valid)
            problems.push_back("commensuration is valid");
        return;
    }
    if (!validate_commensuration(comm).valid) {
        problems.push_back("commensuration is invalid");
        return;
    }
    if (verdict == verdict_slug(ObstructionVerdict::ExtensionInconclusive)) {
        // Negative bounded claim: replay the bounded iteration.
        if (find_normal_extension(comm, to_long(c, "max-index", false)))
            problems.push_back("a normal extension exists within max-index");
        return;
    }
    auto nc = extension_of(comm, p, problems);
    if (!nc)
        return;
    if (verdict == verdict_slug(ObstructionVerdict::NoQuotientWithinBound)) {
        if (find_finite_quotient(quotient_amalgam(*nc), static_cast<int>(to_long(c, "max-degree", false)), false))
            problems.push_back("a finite quotient exists within max-degree");
    } else if (verdict == verdict_slug(ObstructionVerdict::NecessaryConditionsHold)) {
        const FiniteAmalgam fa = quotient_amalgam(*nc);
        if (fa.order_a == 1 && fa.order_b == 1)
            return;
        check_quotient(c, *nc, p, false, problems);
    } else {
        throw InputError("unknown obstruction verdict '" + verdict + "'");
    }
}

void check_completion(const Certificate& c, const Payload& p, std::vector<std::string>& problems)
{
    const AbelianCommensuration ac = text::read_abelian(p.one("abelian-commensuration"));
    const AbelianCompletion k = text::read_completion(p.one("completion"), ac.d);
    for (const std::string& s : verify_completion(ac, k))
        problems.push_back(s);
    if (auto v = c.summary_value("index1"); v && *v != to_string(k.index1))
        problems.push_back("index1 in summary differs from payload");
    if (auto v = c.summary_value("index2"); v && *v != to_string(k.index2))
        problems.push_back("index2 in summary differs from payload");
}

std::optional<long> cap_of(const Certificate& c)
{
    if (!c.param("cap"))
        return std::nullopt;
    return to_long(c, "cap", false);
}

void check_out_finite(const Certificate& c, const Payload& p, std::vector<std::string>& problems)
{
    const AbelianCommensuration ac = text::read_abelian(p.one("abelian-commensuration"));
    for (const std::string& s : validate_abelian(ac, cap_of(c)))
        problems.push_back(s);
    if (!problems.empty())
        return;
    std::vector<IntMatrix> gens = transported_holonomy(ac, 1);
    for (IntMatrix& g : transported_holonomy(ac, 2))
        gens.push_back(std::move(g));
    const std::string verdict = need(c, "verdict");
    if (verdict == verdict_slug(OutFiniteVerdict::OutFinite)) {
        // A finite set containing the identity and the generators, closed under
        // right multiplication by generators, contains the whole group.
        const auto elements = text::read_matrix_group(p.one("matrix-group"), ac.d);
        const std::set<IntMatrix> set(elements.begin(), elements.end());
        if (!set.count(IntMatrix::identity(ac.d)))
            problems.push_back("element list lacks the identity");
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (!set.count(gens[i]))
                problems.push_back("element list lacks generator " + std::to_string(i + 1));
        for (const IntMatrix& x : set)
            for (const IntMatrix& g : gens)
                if (!set.count(x * g)) {
                    problems.push_back("element list is not closed under the generators");
                    return;
                }
        if (auto v = c.summary_value("order"))
            expect_eq(problems, "group order", to_long(c, "order"), static_cast<long>(set.size()));
    } else if (verdict == verdict_slug(OutFiniteVerdict::NotOutFinite)) {
        const InfiniteOrderWitness w = text::read_witness(p.one("witness"), ac.d);
        if (!check_witness(w, gens))
            problems.push_back("witness does not certify an element of infinite order");
    } else if (verdict == verdict_slug(OutFiniteVerdict::Inconclusive)) {
        if (is_out_finite(ac, cap_of(c)).verdict != OutFiniteVerdict::Inconclusive)
            problems.push_back("closure is conclusive under the recorded cap");
    } else {
        throw InputError("unknown out-finite verdict '" + verdict + "'");
    }
}

void check_cross_section(const Certificate& c, const Payload& p, std::vector<std::string>& problems)
{
    const Section* complex = nullptr;
    for (const Section* s : p.all("graph"))
        if (std::any_of(s->body.begin(), s->body.end(), [](const text::Line& l) {
                return l.tokens[0] == "square" || l.tokens[0] == "relator";
            }))
            complex = s;
    if (!complex)
        throw InputError("cross-section payload needs the square complex");
    const SquareComplex sc = text::read_complex(*complex);
    const bool horizontal_first = c.param("horizontal-first").value_or("no") == "yes";
    const CrossSectionAnalysis a = analyze_cross_section(sc, !horizontal_first);
    if (!a.cross) {
        problems.push_back("complex has no cross-section: " + a.vh.describe(sc));
        return;
    }
    auto maps = p.maps();
    if (maps.size() != 2)
        throw InputError("cross-section payload needs maps p1 and p2");
    if (!same_map(maps[0], a.cross->p1))
        problems.push_back("p1 differs from the recomputed projection");
    if (!same_map(maps[1], a.cross->p2))
        problems.push_back("p2 differs from the recomputed projection");
    const bool claimed = need(c, "coverings") == "yes";
    if (claimed != a.coverings())
        problems.push_back(claimed ? "projections are not both coverings" : "projections are coverings");
    int side = 0;
    for (const auto& [report, leg] : {std::pair{&a.cover1, &a.cross->p1}, std::pair{&a.cover2, &a.cross->p2}}) {
        const std::string key = "degree" + std::to_string(++side);
        if (claimed && !report->is_covering)
            for (const std::string& v : report->describe(*leg->source))
                problems.push_back(v);
        if (report->degree && c.summary_value(key))
            expect_eq(problems, key, to_long(c, key), *report->degree);
        else if (report->degree.has_value() != c.summary_value(key).has_value())
            problems.push_back(key + " in summary does not match the projection");
    }
}

// Canonical text of a section, so that reformatted copies compare equal.
std::vector<std::string> normalized(const std::vector<Section>& doc)
{
    const auto graphs = text::read_graphs(doc);
    std::optional<int> dim;
    for (const Section* s : text::sections_of(doc, "abelian-commensuration"))
        dim = text::read_abelian(*s).d;
    std::vector<std::string> out;
    for (const Section& s : doc) {
        std::ostringstream os;
        const std::string& k = s.kind();
        if (k == "graph") {
            const bool squares = std::any_of(s.body.begin(), s.body.end(), [](const text::Line& l) {
                return l.tokens[0] == "square" || l.tokens[0] == "relator";
            });
            if (squares)
                text::write_complex(os, text::read_complex(s));
            else
                text::write_graph(os, *graphs.at(s.name()));
        } else if (k == "map") {
            text::write_map(os, text::read_map(s, graphs));
        } else if (k == "subgroup") {
            text::write_subgroup(os, text::read_subgroup(s));
        } else if (k == "commensuration") {
            text::write_commensuration(os, text::read_commensuration(s));
        } else if (k == "abelian-commensuration") {
            text::write_abelian(os, text::read_abelian(s));
        } else if (k == "averaging") {
            text::write_averaging(os, text::read_averaging(s), s.name());
        } else if (k == "completion" && dim) {
            text::write_completion(os, text::read_completion(s, *dim));
        } else {
            os << s.header.raw << "\n";
            for (const text::Line& l : s.body) {
                for (const std::string& t : l.tokens)
                    os << t << " ";
                os << "\n";
            }
        }
        out.push_back(os.str());
    }
    return out;
}

} // namespace

CertificateCheck verify_certificate(const Certificate& cert, const std::vector<InputFile>& inputs)
{
    for (const InputFile& in : inputs) {
        const std::string digest = sha256_hex(in.contents);
        const bool recorded = std::any_of(cert.inputs.begin(), cert.inputs.end(),
                                          [&](const auto& entry) { return entry.first == digest; });
        if (!recorded)
            throw DigestMismatch("input '" + in.name + "' (sha256 " + digest +
                                 ") does not match any input recorded in the certificate");
    }

    CertificateCheck check;
    const Payload p(cert);
    if (!inputs.empty()) {
        const auto have = normalized(p.doc);
        const std::multiset<std::string> payload(have.begin(), have.end());
        for (const InputFile& in : inputs)
            for (const std::string& s : normalized(text::parse_document(in.contents)))
                if (!payload.count(s))
                    check.problems.push_back("a section of '" + in.name + "' is missing from the payload: " +
                                             s.substr(0, s.find('\n')));
    }

    static const std::map<std::string, std::function<void(const Certificate&, const Payload&,
                                                          std::vector<std::string>&)>>
        checks = {{"covering", check_covering},
                  {"common-cover", check_common_cover},
                  {"normal-extension", check_normal_extension_cert},
                  {"finite-quotient", check_finite_quotient_cert},
                  {"obstruction", check_obstruction},
                  {"completion", check_completion},
                  {"out-finite", check_out_finite},
                  {"cross-section", check_cross_section}};
    auto it = checks.find(cert.kind);
    if (it == checks.end())
        throw InputError("unknown certificate kind '" + cert.kind + "'");
    try {
        it->second(cert, p, check.problems);
    } catch (const PreconditionError& e) {
        check.problems.push_back(e.what());
    }
    return check;
}

} // namespace covercomm
