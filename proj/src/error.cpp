#include "covercomm/error.hpp"
#include "covercomm/numeric.hpp"

#include <regex>

namespace covercomm {

namespace {

std::string located(const std::string& message, int line, int column)
{
    if (line <= 0)
        return message;
    return "line " + std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

} // namespace

InputError::InputError(const std::string& message, int line, int column)
    : std::runtime_error(located(message, line, column)), message_(message), line_(line), column_(column)
{
}

Rational parse_rational(const std::string& text)
{
    static const std::regex pattern(R"(^[+-]?[0-9]+(/[0-9]+)?$)");
    if (!std::regex_match(text, pattern))
        throw InputError("not a rational number: '" + text + "'");
    const std::string digits = text[0] == '+' ? text.substr(1) : text;
    Rational q;
    if (q.set_str(digits, 10) != 0 || q.get_den() == 0)
        throw InputError("not a rational number: '" + text + "'");
    q.canonicalize();
    return q;
}

} // namespace covercomm
