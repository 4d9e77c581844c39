#ifndef MLR_POLYTOPE_HPP
#define MLR_POLYTOPE_HPP

#include <string>
#include <vector>

#include "mlr/rational.hpp"
#include "mlr/words.hpp"

namespace mlr {

// Newton polytope P = conv(generators) + R^k_{>=0}, generators being the
// degrees deg(I) of tuples with lambda_I nonzero at the base point.
struct NewtonPolytope {
    int k = 0;
    std::vector<std::vector<long long>> generators;          // lex-sorted, distinct
    std::vector<std::vector<long long>> minimal_generators;  // the vertex set
    int degree_cap = 0;      // total word-length cap used to build the catalog
    int per_letter_cap = 0;  // provenance record

    bool empty() const { return generators.empty(); }
};

// Positive separating functional, normalized so the threshold is 1:
// a.b < 1 - margin and a.g > 1 + margin for every generator g.
struct SeparatingFunctional {
    std::vector<Rational> a;
    Rational margin;
};

NewtonPolytope build_polytope(const Catalog& c, const std::vector<Rational>& point);
NewtonPolytope polytope_from_generators(int k, std::vector<std::vector<long long>> gens,
                                        int degree_cap = 0, int per_letter_cap = 0);

// b in P, decided by exact LP feasibility of
//   exists convex mu with sum mu_g g <= b componentwise.
bool contains(const NewtonPolytope& P, const std::vector<Rational>& b);

// Optimum of max{t : sum mu_g g <= b - t*1, mu convex}; t* > 0 iff b is
// interior, t* = 0 iff b is on the boundary, t* < 0 iff b is outside.
Rational interior_margin(const NewtonPolytope& P, const std::vector<Rational>& b);

bool interior_contains(const NewtonPolytope& P, const std::vector<Rational>& b);

// Requires contains(P,b) = false.  Two-stage LP: maximize the separation
// margin, then rebalance by maximizing the minimum entry at half margin, so
// the entries are strictly positive and well scaled for delta = delta0^a.
SeparatingFunctional separating_functional(const NewtonPolytope& P,
                                           const std::vector<Rational>& b);

// Minimal generators in lex order; throws PreconditionError when empty.
std::vector<std::vector<long long>> vertices(const NewtonPolytope& P);

// Plain-text form: header "k=<k> cap=<cap>", then one generator per line as
// space-separated integers.
std::string serialize(const NewtonPolytope& P);
NewtonPolytope parse_polytope(const std::string& text);

}  // namespace mlr

#endif
