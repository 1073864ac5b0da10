#pragma once

#include <gmpxx.h>

#include <string>

namespace covercomm {

using Integer = mpz_class;
using Rational = mpq_class;

inline std::string to_string(const Integer& z) { return z.get_str(); }

inline std::string to_string(const Rational& q)
{
    Rational c = q;
    c.canonicalize();
    return c.get_str();
}

/// Parses "p" or "p/q"; throws InputError on anything else.
Rational parse_rational(const std::string& text);

} // namespace covercomm
