#pragma once

#include "covercomm/abelian.hpp"
#include "covercomm/amalgam.hpp"
#include "covercomm/graph.hpp"
#include "covercomm/vh_complex.hpp"

#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace covercomm::text {

/// One non-blank line with '#' comments removed.
struct Line {
    int number = 0;
    std::string raw;
    std::vector<std::string> tokens;
    std::vector<int> columns; ///< 1-based column of each token

    /// Raw text from token i to the end of the line.
    std::string rest(std::size_t i) const;
    [[noreturn]] void fail(std::size_t token, const std::string& message) const;
    /// Throws unless the line has between lo and hi tokens.
    void expect_tokens(std::size_t lo, std::size_t hi) const;
    long integer(std::size_t token) const;
};

/// A header line (`graph G`, `map p Z X`, ...) and the lines up to the next header.
struct Section {
    Line header;
    std::vector<Line> body;

    const std::string& kind() const { return header.tokens[0]; }
    std::string name() const { return header.tokens.size() > 1 ? header.tokens[1] : std::string(); }
};

/// Splits a file into sections. Throws InputError for text before the first
/// header or an unknown header keyword.
std::vector<Section> parse_document(std::string_view text);
/// The sections of the given kind, in file order.
std::vector<const Section*> sections_of(const std::vector<Section>& doc, std::string_view kind);
std::string read_file(const std::string& path);

/// `graph <name>` / `vertex <id>` / `edge <id> <src> <dst> [label]`. Square
/// and relator lines are ignored here.
GraphPtr read_graph(const Section& s);
/// Reverse darts are written implicitly as <id>'.
void write_graph(std::ostream& os, const Graph& g);

/// `map <name> <src> <dst>` / `vmap u v` / `dmap d e`; the reverse of a mapped
/// dart is mapped to the reverse of its image unless given explicitly.
GraphMorphism read_map(const Section& s, const std::map<std::string, GraphPtr>& graphs);
void write_map(std::ostream& os, const GraphMorphism& m);
/// Every graph section of the document, by name.
std::map<std::string, GraphPtr> read_graphs(const std::vector<Section>& doc);

/// A graph section with `square d1 d2 d3 d4` and `relator <word>` lines.
SquareComplex read_complex(const Section& s);
void write_complex(std::ostream& os, const SquareComplex& sc);

struct SubgroupSpec {
    std::string name = "S";
    int rank = 0;
    std::vector<Word> generators;
};
/// `subgroup <name>` / `ambient <rank>` / `gen <word>`.
SubgroupSpec read_subgroup(const Section& s);
void write_subgroup(std::ostream& os, const SubgroupSpec& s);

/// `commensuration <name>` / `h-rank m` / `g1-rank n1` / `g2-rank n2` /
/// `i1 <word> ...` / `i2 <word> ...`.
Commensuration read_commensuration(const Section& s);
void write_commensuration(std::ostream& os, const Commensuration& c);

/// Matrices are bracketed ("[[0,-1],[1,0]]", spaces allowed) or, for a single
/// matrix, d*d integers in row-major order.
std::vector<IntMatrix> parse_int_matrices(const Line& line, std::size_t token, int dim);
std::vector<RatMatrix> parse_rat_matrices(const Line& line, std::size_t token, int dim);
/// "(1/2,0)", "[1/2,0]" or whitespace-separated entries.
RatVector parse_rat_vector(const Line& line, std::size_t token, int dim);
IntVector parse_int_vector(const Line& line, std::size_t token, int dim);

/// `abelian-commensuration <name>` / `dim d` / `m1 ...` / `m2 ...` / `p1 <matrix> ...` / `p2 ...`.
AbelianCommensuration read_abelian(const Section& s);
void write_abelian(std::ostream& os, const AbelianCommensuration& c);

/// `averaging <name>` / `free-rank r` / `torsion t1 ...` / `gamma <matrix>` /
/// `z <vector>` / `rho0 <matrix>`.
AveragingInstance read_averaging(const Section& s);
void write_averaging(std::ostream& os, const AveragingInstance& a, const std::string& name = "M");

/// `completion <name>` / `lattice <vector>` (a basis) / `gamma <matrix>` /
/// `c1 <matrix>` / `c2 <matrix>` / `index1 n` / `index2 n`.
AbelianCompletion read_completion(const Section& s, int dim);
void write_completion(std::ostream& os, const AbelianCompletion& k);

/// `quotient <name>` / `degree d` / `image-order n` / `injective yes|no` /
/// `a <perm>` per generator of A / `b <perm>`.
FiniteQuotientCertificate read_quotient(const Section& s);
void write_quotient(std::ostream& os, const FiniteQuotientCertificate& q);

/// `witness <name>` / `word i j ...` (1-based generators) / `matrix <m>` / `exponent e`.
InfiniteOrderWitness read_witness(const Section& s, int dim);
void write_witness(std::ostream& os, const InfiniteOrderWitness& w);

/// `matrix-group <name>` / `element <matrix>`.
std::vector<IntMatrix> read_matrix_group(const Section& s, int dim);
void write_matrix_group(std::ostream& os, const std::vector<IntMatrix>& elements, const std::string& name = "Gamma");

} // namespace covercomm::text
