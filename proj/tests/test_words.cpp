#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "mlr/errors.hpp"
#include "mlr/flows.hpp"
#include "mlr/words.hpp"

using namespace mlr;

namespace {

Polynomial P(const std::string& s, int n) { return Polynomial::parse(s, n); }

PolyVectorField field(int n, std::initializer_list<const char*> comps) {
    std::vector<Polynomial> v;
    for (const char* c : comps) v.push_back(P(c, n));
    return PolyVectorField(std::move(v));
}

Catalog tao_wright_catalog(int cap = 3) {
    return Catalog({field(2, {"1", "0"}), field(2, {"1", "x1"})}, cap, cap);
}

Catalog heisenberg_catalog(int cap = 3) {
    return Catalog({field(3, {"1", "0", "0"}), field(3, {"0", "1", "x1"})}, cap, cap);
}

Catalog lw2_catalog(int cap = 2) {
    return Catalog({coordinate_field(2, 1), coordinate_field(2, 2)}, cap, cap);
}

// evaluate a word combination through a catalog's word fields
PolyVectorField realize(const Catalog& c, const WordCombination& comb) {
    PolyVectorField sum(std::vector<Polynomial>(c.nvars(), Polynomial(c.nvars())));
    for (const auto& [coef, w] : comb.terms)
        sum = sum + c.word_field(w).scaled(Rational(coef));
    return sum;
}

PolyVectorField realize_tree(const Catalog& c, const BracketTree& t) {
    if (t.is_leaf()) return c.generators()[t.leaf - 1];
    return lie_bracket(realize_tree(c, *t.left), realize_tree(c, *t.right));
}

}  // namespace

TEST_CASE("word degrees count letter multiplicities") {
    CHECK(word_degree(Word({1, 2, 1}), 2) == Degree{2, 1});
    CHECK(word_degree(Word({3}), 3) == Degree{0, 0, 1});
    CHECK(word_degree(Word({1, 2, 3, 4}), 4) == word_degree(Word({4, 3, 2, 1}), 4));
    CHECK_THROWS_AS(word_degree(Word({3}), 2), PreconditionError);
}

TEST_CASE("word fields satisfy the defining recursion") {
    Rng rng = stream_rng(21, 0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<PolyVectorField> gens;
        int n = 2 + trial % 2;
        for (int j = 0; j < 2; ++j) {
            std::vector<Polynomial> comps;
            for (int i = 0; i < n; ++i) {
                Exponents e(n, 0);
                ++e[rng.uniform_int(n)];
                comps.push_back(Polynomial::monomial(n, e, Rational(1 + rng.uniform_int(2))) +
                                Polynomial::constant(n, Rational(rng.uniform_int(3) - 1)));
            }
            gens.push_back(PolyVectorField(std::move(comps)));
        }
        Catalog c(gens, 4, 4);
        CHECK(c.word_field(Word({1, 2})) == lie_bracket(gens[0], gens[1]));
        CHECK(c.word_field(Word({1, 2, 2})) ==
              lie_bracket(c.word_field(Word({1, 2})), gens[1]));
        CHECK(c.word_field(Word({1, 2, 1})) ==
              lie_bracket(c.word_field(Word({1, 2})), gens[0]));
    }
}

TEST_CASE("Tao-Wright word fields close at length two") {
    Catalog c = tao_wright_catalog();
    CHECK(c.word_field(Word({1, 2})) == field(2, {"0", "1"}));
    CHECK(c.word_field(Word({1, 2, 2})).is_zero());
}

TEST_CASE("catalog rejects words beyond its caps") {
    Catalog c = tao_wright_catalog(2);
    CHECK_THROWS_AS(c.word_field(Word({1, 2, 1})), PreconditionError);
    Catalog tight({coordinate_field(2, 1), coordinate_field(2, 2)}, 4, 1);
    CHECK_THROWS_AS(tight.word_field(Word({1, 1})), PreconditionError);
}

TEST_CASE("expand_bracket reproduces the nested-bracket identity") {
    BracketTree t = BracketTree::make_pair(
        BracketTree::make_pair(BracketTree::make_leaf(1), BracketTree::make_leaf(2)),
        BracketTree::make_pair(BracketTree::make_leaf(3), BracketTree::make_leaf(4)));
    WordCombination comb = expand_bracket(t);
    REQUIRE(comb.terms.size() == 2);
    // -X_{(1,2,4,3)} + X_{(1,2,3,4)}
    CHECK(comb.terms[0] == std::pair<std::int64_t, Word>{1, Word({1, 2, 3, 4})});
    CHECK(comb.terms[1] == std::pair<std::int64_t, Word>{-1, Word({1, 2, 4, 3})});
}

TEST_CASE("expand_bracket base cases") {
    WordCombination leaf = expand_bracket(BracketTree::make_leaf(3));
    REQUIRE(leaf.terms.size() == 1);
    CHECK(leaf.terms[0] == std::pair<std::int64_t, Word>{1, Word({3})});

    // [X_w, X_j] with a right leaf is the single appended word
    BracketTree t = BracketTree::make_pair(
        BracketTree::make_pair(BracketTree::make_leaf(2), BracketTree::make_leaf(1)),
        BracketTree::make_leaf(2));
    WordCombination comb = expand_bracket(t);
    REQUIRE(comb.terms.size() == 1);
    CHECK(comb.terms[0] == std::pair<std::int64_t, Word>{1, Word({2, 1, 2})});
}

TEST_CASE("expand_bracket is sound against direct symbolic brackets") {
    Rng rng = stream_rng(22, 0);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + trial % 2;
        std::vector<PolyVectorField> gens;
        for (int j = 0; j < 3; ++j) {
            std::vector<Polynomial> comps;
            for (int i = 0; i < n; ++i) {
                Exponents e(n, 0);
                int budget = rng.uniform_int(3);
                for (int b = 0; b < budget; ++b) ++e[rng.uniform_int(n)];
                comps.push_back(Polynomial::monomial(n, e, Rational(rng.uniform_int(3) + 1,
                                                                    1 + rng.uniform_int(2))));
            }
            gens.push_back(PolyVectorField(std::move(comps)));
        }
        Catalog c(gens, 6, 6);
        // random small tree over 3 generators
        BracketTree t = BracketTree::make_pair(
            BracketTree::make_pair(BracketTree::make_leaf(1 + rng.uniform_int(3)),
                                   BracketTree::make_leaf(1 + rng.uniform_int(3))),
            BracketTree::make_pair(BracketTree::make_leaf(1 + rng.uniform_int(3)),
                                   BracketTree::make_leaf(1 + rng.uniform_int(3))));
        CHECK(realize(c, expand_bracket(t)) == realize_tree(c, t));
    }
}

TEST_CASE("tuple enumeration on the Loomis-Whitney fields") {
    Catalog c = lw2_catalog();
    auto tuples = enumerate_tuples(c, {Rational(0), Rational(0)});
    bool found = false;
    for (const auto& t : tuples) {
        if (t.words == std::vector<Word>{Word({1}), Word({2})}) {
            found = true;
            CHECK(t.lambda == P("1", 2));
            CHECK(t.degree == Degree{1, 1});
            CHECK(t.nonzero_at_point());
        }
        if (t.words.size() == 2 && t.words[0] == t.words[1]) CHECK(t.lambda.is_zero());
    }
    CHECK(found);
}

TEST_CASE("tuple enumeration on the Tao-Wright model") {
    Catalog c = tao_wright_catalog();
    auto tuples = enumerate_tuples(c, {Rational(0), Rational(0)});
    std::vector<Degree> nonzero_degrees;
    for (const auto& t : tuples)
        if (t.nonzero_at_point()) nonzero_degrees.push_back(t.degree);
    CHECK(std::count(nonzero_degrees.begin(), nonzero_degrees.end(), Degree{2, 1}) > 0);
    CHECK(std::count(nonzero_degrees.begin(), nonzero_degrees.end(), Degree{1, 2}) > 0);
    // ((1),(2)) has lambda = x1, vanishing at 0
    for (const auto& t : tuples)
        if (t.words == std::vector<Word>{Word({1}), Word({2})}) {
            CHECK(t.lambda == P("x1", 2));
            CHECK_FALSE(t.nonzero_at_point());
        }
}

TEST_CASE("tuple enumeration aborts past the configured limit") {
    Catalog c({coordinate_field(2, 1), coordinate_field(2, 2)}, 2, 2, 2);
    CHECK_THROWS_AS(enumerate_tuples(c, {Rational(0), Rational(0)}), PreconditionError);
}

TEST_CASE("hormander_check on the golden examples") {
    HormanderResult lw = hormander_check(lw2_catalog(), {Rational(0), Rational(0)});
    CHECK(lw.spans);
    CHECK(lw.witness == std::vector<Word>{Word({1}), Word({2})});

    // two copies of d1 never span
    Catalog degenerate({coordinate_field(2, 1), coordinate_field(2, 1)}, 3, 3);
    HormanderResult bad = hormander_check(degenerate, {Rational(0), Rational(0)});
    CHECK_FALSE(bad.spans);
    CHECK(bad.rank == 1);

    HormanderResult h =
        hormander_check(heisenberg_catalog(), {Rational(0), Rational(0), Rational(0)});
    CHECK(h.spans);
    CHECK(h.witness == std::vector<Word>{Word({1}), Word({2}), Word({1, 2})});
}

TEST_CASE("lambda_vector on the Loomis-Whitney fields") {
    Catalog c = lw2_catalog();
    auto tuples = enumerate_tuples(c, {Rational(0), Rational(0)});
    LambdaVector lv = lambda_vector(tuples, {0.1, 0.1}, 1.0);
    CHECK(lv.norm == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(tuples[lv.argmax].words == std::vector<Word>{Word({1}), Word({2})});

    // homogeneity: scaling delta by t scales each entry by t^{|deg I|}
    LambdaVector scaled = lambda_vector(tuples, {0.05, 0.05}, 1.0);
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        double expect = lv.values[i] * std::pow(0.5, degree_total(tuples[i].degree));
        CHECK(scaled.values[i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("lambda_vector norm on the Tao-Wright model") {
    Catalog c = tao_wright_catalog();
    auto tuples = enumerate_tuples(c, {Rational(0), Rational(0)});
    double d1 = 0.1, d2 = 0.05;
    LambdaVector lv = lambda_vector(tuples, {d1, d2}, 1.0);
    CHECK(lv.norm == doctest::Approx(std::max(d1 * d1 * d2, d1 * d2 * d2)).epsilon(1e-12));
}

TEST_CASE("lambda_vector norm is monotone in delta and K") {
    Catalog c = heisenberg_catalog();
    auto tuples = enumerate_tuples(c, {Rational(0), Rational(0), Rational(0)});
    double base = lambda_vector(tuples, {0.1, 0.1}, 2.0).norm;
    CHECK(lambda_vector(tuples, {0.12, 0.1}, 2.0).norm >= base);
    CHECK(lambda_vector(tuples, {0.1, 0.12}, 2.0).norm >= base);
    CHECK(lambda_vector(tuples, {0.1, 0.1}, 3.0).norm >= base);
    CHECK_THROWS_AS(lambda_vector({}, {0.1}, 1.0), PreconditionError);
}
