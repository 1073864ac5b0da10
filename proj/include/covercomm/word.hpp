#pragma once

#include "covercomm/graph.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace covercomm {

/// Element of a free group on letters a, b, c, ... (signed, 1-based).
using Word = std::vector<Letter>;

Word reduce(Word w);
Word inverse(const Word& w);
Word concat(const Word& u, const Word& v);

/// Replaces each letter by its image word (inverse letters by the inverse image).
/// Throws InputError if w uses a letter beyond `rank`.
void check_word(const Word& w, int rank);

Word substitute(const Word& w, const std::vector<Word>& images);

/// Lowercase a..z are generators, uppercase their inverses, "1" the identity.
/// Throws InputError for letters beyond `rank`.
Word parse_word(std::string_view text, int rank);
std::string word_text(const Word& w);

/// Column of a signed letter in a rank-n table: a, A, b, B, ...
inline int letter_column(Letter x) { return x > 0 ? 2 * (x - 1) : 2 * (-x - 1) + 1; }
inline Letter column_letter(int c) { return c % 2 == 0 ? c / 2 + 1 : -(c / 2 + 1); }

} // namespace covercomm
