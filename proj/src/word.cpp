#include "covercomm/word.hpp"

#include "covercomm/error.hpp"

#include <cctype>
#include <cstdlib>

namespace covercomm {

Word reduce(Word w)
{
    std::size_t top = 0;
    for (Letter x : w) {
        if (top > 0 && w[top - 1] == -x)
            --top;
        else
            w[top++] = x;
    }
    w.resize(top);
    return w;
}

Word inverse(const Word& w)
{
    Word r(w.rbegin(), w.rend());
    for (Letter& x : r)
        x = -x;
    return r;
}

Word concat(const Word& u, const Word& v)
{
    Word w = u;
    w.insert(w.end(), v.begin(), v.end());
    return reduce(std::move(w));
}

void check_word(const Word& w, int rank)
{
    for (Letter x : w)
        if (x == 0 || std::abs(x) > rank)
            throw InputError("word '" + word_text(w) + "' uses a letter outside the rank-" + std::to_string(rank) +
                             " alphabet");
}

Word substitute(const Word& w, const std::vector<Word>& images)
{
    Word out;
    for (Letter x : w) {
        const Word& image = images.at(static_cast<std::size_t>(std::abs(x) - 1));
        if (x > 0)
            out.insert(out.end(), image.begin(), image.end());
        else {
            const Word inv = inverse(image);
            out.insert(out.end(), inv.begin(), inv.end());
        }
    }
    return reduce(std::move(out));
}

Word parse_word(std::string_view text, int rank)
{
    Word w;
    if (text == "1")
        return w;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (!std::isalpha(static_cast<unsigned char>(c)))
            throw InputError("invalid character '" + std::string(1, c) + "' in word '" + std::string(text) + "'", 0,
                             static_cast<int>(i) + 1);
        const int k = std::tolower(static_cast<unsigned char>(c)) - 'a' + 1;
        if (k > rank)
            throw InputError("letter '" + std::string(1, c) + "' outside the rank-" + std::to_string(rank) + " alphabet", 0,
                             static_cast<int>(i) + 1);
        w.push_back(std::islower(static_cast<unsigned char>(c)) ? k : -k);
    }
    return reduce(std::move(w));
}

std::string word_text(const Word& w)
{
    if (w.empty())
        return "1";
    std::string s;
    for (Letter x : w)
        s.push_back(static_cast<char>(x > 0 ? 'a' + x - 1 : 'A' - x - 1));
    return s;
}

} // namespace covercomm
