#ifndef MLR_EXPONENTS_HPP
#define MLR_EXPONENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "mlr/polytope.hpp"
#include "mlr/rational.hpp"

namespace mlr {

// Exponent tuple p in (0,infty]^k, stored as exact reciprocals (1/inf = 0).
// Values p_j < 1 are representable on purpose: classify probes them.
struct ExponentTuple {
    std::vector<Rational> reciprocals;

    int k() const { return static_cast<int>(reciprocals.size()); }
    bool all_at_least_one() const;

    // "2,2,2" or "3/2,inf"; rejects p <= 0.
    static ExponentTuple parse(const std::string& text);
    std::string to_string() const;
};

struct BTuple {
    std::vector<Rational> b;

    int k() const { return static_cast<int>(b.size()); }
    Rational sum() const;
    static BTuple parse(const std::string& text);
    std::string to_string() const;
};

// sum_j 1/p_j.
Rational sigma(const ExponentTuple& p);

// b_i = p_i^{-1} / (sigma - 1); requires sigma > 1 and all p_j >= 1.
BTuple b_of_p(const ExponentTuple& p);

// p_i = (sum b - 1)/b_i with b_i = 0 -> infinity; exact inverse of b_of_p.
ExponentTuple p_of_b(const BTuple& b);

enum class Verdict {
    HolderTrivial,
    FailsPBelowOne,
    StrongType,
    NotRestrictedWeakType,
    EndpointUnknown,
};

std::string to_string(Verdict v);

struct Classification {
    Verdict verdict;
    std::optional<BTuple> b;
    std::optional<Rational> margin;  // interior-LP t* when b was computed
    std::string certificate;
};

// The decision procedure: p_j < 1 fails outright; sigma <= 1 is bounded by
// Holder; otherwise b(p) against P decides strong-type / failure, with
// boundary points left open.
Classification classify(const ExponentTuple& p, const NewtonPolytope& P);

}  // namespace mlr

#endif
