#include "mlr/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "mlr/errors.hpp"

namespace mlr {

unsigned total_degree(const Exponents& e) {
    unsigned t = 0;
    for (unsigned v : e) t += v;
    return t;
}

bool GradedLexLess::operator()(const Exponents& a, const Exponents& b) const {
    unsigned ta = total_degree(a), tb = total_degree(b);
    if (ta != tb) return ta < tb;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Polynomial Polynomial::constant(int nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
    if (i < 1 || i > nvars) throw PreconditionError("variable index out of range");
    Exponents e(nvars, 0);
    e[i - 1] = 1;
    return monomial(nvars, e, 1);
}

Polynomial Polynomial::monomial(int nvars, const Exponents& e, const Rational& c) {
    if (static_cast<int>(e.size()) != nvars)
        throw PreconditionError("exponent vector size mismatch");
    Polynomial p(nvars);
    p.add_term(e, c);
    return p;
}

int Polynomial::degree() const {
    if (terms_.empty()) return -1;
    return static_cast<int>(total_degree(terms_.rbegin()->first));
}

Rational Polynomial::constant_term() const {
    auto it = terms_.find(Exponents(nvars_, 0));
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (nvars_ != o.nvars_) throw PreconditionError("polynomial variable count mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (nvars_ != o.nvars_) throw PreconditionError("polynomial variable count mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r = *this;
    r += o;
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial r = *this;
    r -= o;
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw PreconditionError("polynomial variable count mismatch");
    Polynomial r(nvars_);
    Exponents e(nvars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial r(nvars_);
    if (c == 0) return r;
    for (const auto& [e, coef] : terms_) r.terms_.emplace(e, coef * c);
    return r;
}

bool Polynomial::operator==(const Polynomial& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
}

Polynomial Polynomial::partial_derivative(int i) const {
    if (i < 1 || i > nvars_) throw PreconditionError("partial_derivative: index out of range");
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        unsigned p = e[i - 1];
        if (p == 0) continue;
        Exponents d = e;
        d[i - 1] = p - 1;
        r.add_term(d, c * Rational(p));
    }
    return r;
}

Rational Polynomial::evaluate(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != nvars_)
        throw PreconditionError("evaluate: point dimension mismatch");
    Rational sum = 0;
    for (const auto& [e, c] : terms_) {
        Rational term = c;
        for (int i = 0; i < nvars_; ++i)
            for (unsigned p = 0; p < e[i]; ++p) term *= x[i];
        sum += term;
    }
    return sum;
}

double Polynomial::evaluate(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != nvars_)
        throw PreconditionError("evaluate: point dimension mismatch");
    double sum = 0;
    for (const auto& [e, c] : terms_) {
        double term = to_double(c);
        for (int i = 0; i < nvars_; ++i)
            for (unsigned p = 0; p < e[i]; ++p) term *= x[i];
        sum += term;
    }
    return sum;
}

namespace {

void print_monomial(std::ostringstream& os, const Exponents& e, const Rational& c) {
    Rational a = c < 0 ? Rational(-c) : c;
    bool has_vars = total_degree(e) > 0;
    bool coef_printed = false;
    if (a != 1 || !has_vars) {
        os << a;
        coef_printed = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (coef_printed) os << '*';
        os << 'x' << (i + 1);
        if (e[i] > 1) os << '^' << e[i];
        coef_printed = true;
    }
}

}  // namespace

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (first) {
            if (c < 0) os << '-';
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        print_monomial(os, e, c);
    }
    return os.str();
}

// --- parser for the text syntax -------------------------------------------

namespace {

struct PolyParser {
    const std::string& s;
    int nvars;
    std::size_t i = 0;

    explicit PolyParser(const std::string& text, int n) : s(text), nvars(n) {}

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg + " at position " + std::to_string(i) + " in '" + s + "'");
    }

    Integer read_integer() {
        skip_ws();
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) fail("expected number");
        return Integer(s.substr(start, i - start));
    }

    Rational read_coefficient() {
        Integer num = read_integer();
        skip_ws();
        if (i < s.size() && s[i] == '.') fail("decimal notation not allowed, use p/q");
        if (i < s.size() && s[i] == '/') {
            ++i;
            Integer den = read_integer();
            if (den == 0) fail("zero denominator");
            return Rational(num, den);
        }
        return Rational(num);
    }

    // variable: x<digits> or the alias t = x_n
    int read_variable() {
        skip_ws();
        if (i < s.size() && s[i] == 't') {
            ++i;
            return nvars;
        }
        if (i >= s.size() || s[i] != 'x') fail("expected variable");
        ++i;
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) fail("expected variable index after 'x'");
        int idx = std::stoi(s.substr(start, i - start));
        if (idx < 1 || idx > nvars) fail("variable index out of range (n=" + std::to_string(nvars) + ")");
        return idx;
    }

    // term := [coefficient] factor* with '*' optional between factors
    Polynomial read_term() {
        Polynomial term = Polynomial::constant(nvars, 1);
        bool any = false;
        for (;;) {
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                term = term * Polynomial::constant(nvars, read_coefficient());
                any = true;
            } else if (c == 'x' || c == 't') {
                int v = read_variable();
                unsigned e = 1;
                if (peek() == '^') {
                    ++i;
                    Integer p = read_integer();
                    if (p < 0 || p > 64) fail("exponent out of range");
                    e = p.template convert_to<unsigned>();
                }
                Exponents mono(nvars, 0);
                mono[v - 1] = e;
                term = term * Polynomial::monomial(nvars, mono, 1);
                any = true;
            } else if (c == '*') {
                ++i;
                continue;
            } else {
                break;
            }
        }
        if (!any) fail("expected term");
        return term;
    }

    Polynomial parse() {
        Polynomial result(nvars);
        bool first = true;
        while (!done()) {
            int sign = 1;
            char c = peek();
            if (c == '+' || c == '-') {
                sign = c == '-' ? -1 : 1;
                ++i;
            } else if (!first) {
                fail("expected '+' or '-' between terms");
            }
            Polynomial term = read_term();
            if (sign < 0) term = -term;
            result += term;
            first = false;
        }
        if (first) fail("empty polynomial");
        return result;
    }
};

}  // namespace

Polynomial Polynomial::parse(const std::string& text, int nvars) {
    PolyParser p(text, nvars);
    return p.parse();
}

}  // namespace mlr
