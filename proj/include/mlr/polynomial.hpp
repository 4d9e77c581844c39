#ifndef MLR_POLYNOMIAL_HPP
#define MLR_POLYNOMIAL_HPP

#include <map>
#include <string>
#include <vector>

#include "mlr/rational.hpp"

namespace mlr {

// Exponent multi-index of a monomial; size equals the variable count.
using Exponents = std::vector<unsigned>;

unsigned total_degree(const Exponents& e);

// Graded lexicographic term order: total degree first, then lex.
struct GradedLexLess {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

// Sparse multivariate polynomial over Rational.  Invariants: no stored term
// has a zero coefficient; arithmetic is exact.
class Polynomial {
  public:
    using TermMap = std::map<Exponents, Rational, GradedLexLess>;

    explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const Rational& c);
    // 1-based variable index: variable(n, i) is x_i.
    static Polynomial variable(int nvars, int i);
    static Polynomial monomial(int nvars, const Exponents& e, const Rational& c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;  // -1 for the zero polynomial
    const TermMap& terms() const { return terms_; }
    Rational constant_term() const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(const Rational& c) const;
    bool operator==(const Polynomial& o) const;
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // 1-based variable index.
    Polynomial partial_derivative(int i) const;

    Rational evaluate(const std::vector<Rational>& x) const;
    double evaluate(const std::vector<double>& x) const;

    // Graded-lex descending, canonical text form: "2/3*x1^2*x3 - x2 + 1".
    std::string to_string() const;

    // Parses the text syntax above; `t` is accepted as an alias for x_nvars.
    static Polynomial parse(const std::string& text, int nvars);

  private:
    void add_term(const Exponents& e, const Rational& c);

    int nvars_;
    TermMap terms_;
};

}  // namespace mlr

#endif
