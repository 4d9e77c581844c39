#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlr/errors.hpp"
#include "mlr/flows.hpp"
#include "mlr/polynomial.hpp"
#include "mlr/vector_field.hpp"

using namespace mlr;

namespace {

Polynomial P(const std::string& s, int n) { return Polynomial::parse(s, n); }

PolyVectorField field(int n, std::initializer_list<const char*> comps) {
    std::vector<Polynomial> v;
    for (const char* c : comps) v.push_back(P(c, n));
    return PolyVectorField(std::move(v));
}

PolyVectorField random_field(Rng& rng, int n, int deg, int terms) {
    std::vector<Polynomial> comps;
    for (int c = 0; c < n; ++c) {
        Polynomial p(n);
        for (int t = 0; t < terms; ++t) {
            Exponents e(n, 0);
            int budget = rng.uniform_int(deg + 1);
            for (int b = 0; b < budget; ++b) ++e[rng.uniform_int(n)];
            int num = rng.uniform_int(7) - 3;
            if (num == 0) num = 2;
            p += Polynomial::monomial(n, e, Rational(num, 1 + rng.uniform_int(3)));
        }
        comps.push_back(std::move(p));
    }
    return PolyVectorField(std::move(comps));
}

}  // namespace

TEST_CASE("partial derivatives follow the power rule") {
    CHECK(P("x1^2*x2", 2).partial_derivative(1) == P("2*x1*x2", 2));
    CHECK(P("x1", 2).partial_derivative(2).is_zero());
    CHECK(P("x1 + 3/2*x1*x2", 2).partial_derivative(1) == P("1 + 3/2*x2", 2));
    CHECK_THROWS_AS(P("x1", 2).partial_derivative(0), PreconditionError);
    CHECK_THROWS_AS(P("x1", 2).partial_derivative(3), PreconditionError);
}

TEST_CASE("evaluation is exact on rational points") {
    CHECK(P("x1*x2", 2).evaluate({Rational(2), Rational(3)}) == 6);
    CHECK(P("5 - x1 + x2^3", 2).evaluate({Rational(0), Rational(0)}) ==
          P("5 - x1 + x2^3", 2).constant_term());
    CHECK(P("x1^2 - x2", 2).evaluate({Rational(1, 2), Rational(1, 4)}) == 0);
    CHECK_THROWS_AS(P("x1", 2).evaluate(std::vector<Rational>{Rational(1)}), PreconditionError);
}

TEST_CASE("text syntax round-trips through parse and to_string") {
    Polynomial p = P("2/3*x1^2*x3 - x2 + 1", 3);
    CHECK(p.to_string() == "2/3*x1^2*x3 - x2 + 1");
    CHECK(Polynomial::parse(p.to_string(), 3) == p);
    // '*' optional, 't' aliases the last variable
    CHECK(P("2x1", 2) == P("2*x1", 2));
    CHECK(P("x1 - t", 3) == P("x1 - x3", 3));
    CHECK(P("0", 2).is_zero());
    CHECK_THROWS_AS(P("x5", 2), ParseError);
    CHECK_THROWS_AS(P("1.5*x1", 2), ParseError);
    CHECK_THROWS_AS(P("x1 +", 2), ParseError);
    CHECK_THROWS_AS(P("", 2), ParseError);
}

TEST_CASE("constant coordinate fields commute") {
    PolyVectorField d1 = coordinate_field(2, 1);
    PolyVectorField d2 = coordinate_field(2, 2);
    CHECK(lie_bracket(d1, d2).is_zero());
}

TEST_CASE("[d1, d1 + x1 d2] = d2, symbolically and through the flows") {
    PolyVectorField X = field(2, {"1", "0"});
    PolyVectorField Y = field(2, {"1", "x1"});
    PolyVectorField B = lie_bracket(X, Y);
    CHECK(B == field(2, {"0", "1"}));

    // flow-commutator cross-check:
    // e^{-s Y} e^{-s X} e^{s Y} e^{s X}(x) ~ x + s^2 [X,Y](x)
    FlowConfig cfg;
    Vec x0(2);
    x0 << 0.3, -0.2;
    auto estimate = [&](double h) {
        double s = std::sqrt(h);
        Vec z = flow(X, x0, s, cfg);
        z = flow(Y, z, s, cfg);
        z = flow(X, z, -s, cfg);
        z = flow(Y, z, -s, cfg);
        return Vec((z - x0) / h);
    };
    std::vector<double> xd(x0.data(), x0.data() + 2);
    auto bv = B.evaluate(xd);
    Vec bracket_at_x(2);
    bracket_at_x << bv[0], bv[1];
    double r_coarse = (estimate(1e-2) - bracket_at_x).norm();
    double r_fine = (estimate(1e-4) - bracket_at_x).norm();
    CHECK(r_fine <= r_coarse + 1e-12);
    CHECK(r_fine < 1e-3);
}

TEST_CASE("bracket antisymmetry holds exactly on random fields") {
    Rng rng = stream_rng(11, 0);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + trial % 3;
        PolyVectorField X = random_field(rng, n, 3, 2);
        PolyVectorField Y = random_field(rng, n, 3, 2);
        CHECK((lie_bracket(X, Y) + lie_bracket(Y, X)).is_zero());
    }
}

TEST_CASE("Jacobi identity holds exactly on random cubic fields") {
    Rng rng = stream_rng(12, 0);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + trial % 3;
        PolyVectorField X = random_field(rng, n, 3, 2);
        PolyVectorField Y = random_field(rng, n, 3, 2);
        PolyVectorField Z = random_field(rng, n, 3, 2);
        PolyVectorField sum = lie_bracket(X, lie_bracket(Y, Z)) +
                              lie_bracket(Y, lie_bracket(Z, X)) +
                              lie_bracket(Z, lie_bracket(X, Y));
        CHECK(sum.is_zero());
    }
}

TEST_CASE("bracket rejects mismatched dimensions") {
    CHECK_THROWS_AS(lie_bracket(coordinate_field(2, 1), coordinate_field(3, 1)),
                    PreconditionError);
}

TEST_CASE("kernel field of a coordinate projection") {
    PolyMap pi({P("x1", 2)}, 2);
    PolyVectorField X = kernel_field(pi);
    // tangent to {x1 = const}: d2 up to overall sign
    CHECK(X.components[0].is_zero());
    CHECK_FALSE(X.components[1].is_zero());
}

TEST_CASE("kernel field of the translation-curve submersion") {
    // pi(x1,x2,t) = (x1 - t, x2 - t^2): fiber tangent d1 + 2t d2 + dt
    PolyMap pi({P("x1 - t", 3), P("x2 - t^2", 3)}, 3);
    PolyVectorField X = kernel_field(pi);
    CHECK(X == field(3, {"1", "2*t", "1"}));
    // Dpi . X == 0 as polynomials
    auto J = jacobian(pi);
    for (int i = 0; i < 2; ++i) {
        Polynomial dot(3);
        for (int j = 0; j < 3; ++j) dot += J[i][j] * X.components[j];
        CHECK(dot.is_zero());
    }
}

TEST_CASE("Dpi . kernel_field(pi) vanishes identically for random maps") {
    Rng rng = stream_rng(13, 0);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + trial % 3;
        std::vector<Polynomial> comps;
        for (int i = 0; i < n - 1; ++i) {
            Polynomial p(n);
            for (int t = 0; t < 2; ++t) {
                Exponents e(n, 0);
                ++e[rng.uniform_int(n)];
                if (rng.next() & 1) ++e[rng.uniform_int(n)];
                p += Polynomial::monomial(n, e, Rational(1 + rng.uniform_int(3)));
            }
            comps.push_back(std::move(p));
        }
        PolyMap pi(std::move(comps), n);
        PolyVectorField X = kernel_field(pi);
        auto J = jacobian(pi);
        for (int i = 0; i < n - 1; ++i) {
            Polynomial dot(n);
            for (int j = 0; j < n; ++j) dot += J[i][j] * X.components[j];
            CHECK(dot.is_zero());
        }
    }
}

TEST_CASE("symbolic determinants") {
    PolyVectorField d1 = coordinate_field(2, 1);
    PolyVectorField d2 = coordinate_field(2, 2);
    PolyVectorField tw = field(2, {"1", "x1"});
    CHECK(determinant({d1, d2}) == P("1", 2));
    CHECK(determinant({d1, tw}) == P("x1", 2));
    CHECK(determinant({tw, tw}).is_zero());
    CHECK_THROWS_AS(determinant({d1}), PreconditionError);
}

TEST_CASE("determinant is multilinear and alternating in its columns") {
    Rng rng = stream_rng(14, 0);
    int n = 3;
    PolyVectorField A = random_field(rng, n, 2, 2);
    PolyVectorField B = random_field(rng, n, 2, 2);
    PolyVectorField C = random_field(rng, n, 2, 2);
    // column swap flips the sign
    CHECK(determinant({A, B, C}) == -determinant({B, A, C}));
    // scaling one column scales the determinant
    CHECK(determinant({A.scaled(Rational(3, 2)), B, C}) ==
          determinant({A, B, C}).scaled(Rational(3, 2)));
    // additivity in one column
    CHECK(determinant({A + B, B, C}) == determinant({A, B, C}) + determinant({B, B, C}));
}
