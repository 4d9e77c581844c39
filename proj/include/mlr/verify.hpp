#ifndef MLR_VERIFY_HPP
#define MLR_VERIFY_HPP

#include <cstdint>
#include <ostream>
#include <string>

namespace mlr {

// Built-in model problems used by the verification suite and the docs.
const char* golden_spec_lw2();        // Loomis-Whitney in R^2 (maps mode)
const char* golden_spec_lw3();        // Loomis-Whitney in R^3 (maps mode)
const char* golden_spec_tao_wright(); // X1 = d1, X2 = d1 + x1 d2
const char* golden_spec_heisenberg(); // X1 = d1, X2 = d2 + x1 d3

namespace verify {

// One function per verification criterion; each prints deterministic detail
// lines (no timings, no thread counts) and returns pass/fail.
bool symbolic_exactness(std::uint64_t seed, std::ostream& os);
bool polytope_golden_set(std::ostream& os);
bool exponent_calculus(std::uint64_t seed, std::ostream& os);
bool ball_calibration(std::uint64_t seed, int threads, std::ostream& os);
bool scaling_exponents(std::uint64_t seed, int threads, std::ostream& os);
bool chart_lemmas(std::uint64_t seed, int threads, std::ostream& os);
bool necessity_blowup(std::uint64_t seed, int threads, std::ostream& os);

}  // namespace verify

struct VerifyResult {
    bool all_passed = false;
    std::string report;
};

// Runs the full suite; the report is byte-identical for a fixed seed
// regardless of the worker count.
VerifyResult run_verification(std::uint64_t seed, int threads);

}  // namespace mlr

#endif
