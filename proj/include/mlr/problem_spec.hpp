#ifndef MLR_PROBLEM_SPEC_HPP
#define MLR_PROBLEM_SPEC_HPP

#include <optional>
#include <string>
#include <vector>

#include "mlr/rational.hpp"
#include "mlr/vector_field.hpp"
#include "mlr/words.hpp"

namespace mlr {

// Parsed problem description.  Fields are either given directly or derived
// as kernel fields of the given submersions (which must satisfy pi_j(0)=0).
struct ProblemSpec {
    int n = 0;
    int k = 0;
    bool maps_given = false;
    std::vector<PolyVectorField> fields;
    std::vector<PolyMap> maps;  // empty in fields mode

    Rational eps = Rational(1, 4);
    int cap = 4;
    double K = 8.0;
    std::uint64_t seed = 0;

    bool has_maps() const { return !maps.empty(); }
};

// Line-oriented format:
//   # comment
//   n=3 k=2
//   eps=1/4 cap=4 K=8 seed=0        (optional overrides)
//   field 1: 1, 0, 0
//   field 2: 0, 1, x1
// or "map j: x1 - t, x2 - t^2" for submersion input.  Errors carry line
// numbers.
ProblemSpec parse_spec(const std::string& text);
ProblemSpec parse_spec_file(const std::string& path);

// Catalog with the truncation policy: total word-length cap from the spec,
// per-letter cap ceil(d/eps) once a spanning tuple of total degree d is
// known (never above the total cap).
Catalog make_catalog(const ProblemSpec& spec);

}  // namespace mlr

#endif
