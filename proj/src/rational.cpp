#include "mlr/rational.hpp"

#include <cctype>
#include <sstream>

namespace mlr {

std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

Rational parse_rational(const std::string& text) {
    std::size_t i = 0, n = text.size();
    auto skip_ws = [&] {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    bool neg = false;
    if (i < n && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
    skip_ws();
    auto read_int = [&]() -> Integer {
        std::size_t start = i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) throw ParseError("expected integer in rational: '" + text + "'");
        return Integer(text.substr(start, i - start));
    };
    Integer num = read_int();
    Integer den = 1;
    skip_ws();
    if (i < n && text[i] == '/') {
        ++i;
        skip_ws();
        den = read_int();
        if (den == 0) throw ParseError("zero denominator in rational: '" + text + "'");
    } else if (i < n && text[i] == '.') {
        throw ParseError("decimal notation not allowed, use p/q: '" + text + "'");
    }
    skip_ws();
    if (i != n) throw ParseError("trailing characters in rational: '" + text + "'");
    Rational q(num, den);
    return neg ? Rational(-q) : q;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string piece =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        out.push_back(parse_rational(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace mlr
