#ifndef MLR_VECTOR_FIELD_HPP
#define MLR_VECTOR_FIELD_HPP

#include <string>
#include <vector>

#include "mlr/polynomial.hpp"

namespace mlr {

// Polynomial vector field on R^n: component i is the coefficient of d/dx_i.
struct PolyVectorField {
    std::vector<Polynomial> components;

    PolyVectorField() = default;
    explicit PolyVectorField(std::vector<Polynomial> comps);

    int nvars() const { return static_cast<int>(components.size()); }
    bool is_zero() const;
    bool operator==(const PolyVectorField& o) const { return components == o.components; }

    std::vector<Rational> evaluate(const std::vector<Rational>& x) const;
    std::vector<double> evaluate(const std::vector<double>& x) const;

    PolyVectorField operator+(const PolyVectorField& o) const;
    PolyVectorField operator-(const PolyVectorField& o) const;
    PolyVectorField scaled(const Rational& c) const;

    std::string to_string() const;
};

// Polynomial submersion candidate R^n -> R^{n-1}: exactly n-1 components.
struct PolyMap {
    std::vector<Polynomial> components;
    int nvars = 0;

    PolyMap() = default;
    PolyMap(std::vector<Polynomial> comps, int n);

    std::vector<double> evaluate(const std::vector<double>& x) const;
    std::vector<Rational> evaluate(const std::vector<Rational>& x) const;
};

// d/dx_i as a field on R^n (1-based i).
PolyVectorField coordinate_field(int nvars, int i);

// [X,Y]_j = sum_i (X_i d_i Y_j - Y_i d_i X_j), exact.
PolyVectorField lie_bracket(const PolyVectorField& X, const PolyVectorField& Y);

// Exact determinant of a square matrix of polynomials.
Polynomial poly_determinant(const std::vector<std::vector<Polynomial>>& m);

// det(X_1(x), ..., X_n(x)) as a polynomial; fields are the matrix columns.
Polynomial determinant(const std::vector<PolyVectorField>& fields);

// The field spanning ker Dpi, via signed maximal minors of the Jacobian:
// X_i = (-1)^{i+1} det(Dpi with column i removed).  Dpi * X == 0 identically.
PolyVectorField kernel_field(const PolyMap& pi);

// Rows: Jacobian of pi (component i by variable j).
std::vector<std::vector<Polynomial>> jacobian(const PolyMap& pi);

}  // namespace mlr

#endif
