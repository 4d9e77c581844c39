// Acceptance suite: one pass/fail line per criterion, with wall-clock budgets
// where a runtime limit applies.  Exits nonzero if any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "mlr/verify.hpp"

namespace {

struct Outcome {
    bool passed = false;
    double seconds = 0;
    std::string detail;
};

Outcome timed(const std::function<bool(std::ostream&)>& fn) {
    Outcome o;
    std::ostringstream detail;
    auto start = std::chrono::steady_clock::now();
    try {
        o.passed = fn(detail);
    } catch (const std::exception& e) {
        detail << "  exception: " << e.what() << "\n";
        o.passed = false;
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.detail = detail.str();
    return o;
}

}  // namespace

int main() {
    using namespace mlr;
    const std::uint64_t seed = 7;
    int failures = 0;

    struct Criterion {
        int index;
        const char* name;
        double budget_seconds;  // 0 = no budget
        std::function<bool(std::ostream&)> fn;
    };

    std::vector<Criterion> criteria = {
        {1, "symbolic exactness", 10.0,
         [&](std::ostream& os) { return verify::symbolic_exactness(seed, os); }},
        {2, "polytope golden set", 30.0,
         [&](std::ostream& os) { return verify::polytope_golden_set(os); }},
        {3, "exponent calculus", 0.0,
         [&](std::ostream& os) { return verify::exponent_calculus(seed, os); }},
        {4, "ball volume calibration", 60.0,
         [&](std::ostream& os) { return verify::ball_calibration(seed, 0, os); }},
        {5, "scaling exponents", 300.0,
         [&](std::ostream& os) { return verify::scaling_exponents(seed, 0, os); }},
        {6, "chart lemmas", 0.0,
         [&](std::ostream& os) { return verify::chart_lemmas(seed, 0, os); }},
        {7, "necessity blow-up", 120.0,
         [&](std::ostream& os) { return verify::necessity_blowup(seed, 0, os); }},
    };

    for (const auto& c : criteria) {
        Outcome o = timed(c.fn);
        bool in_budget = c.budget_seconds == 0.0 || o.seconds <= c.budget_seconds;
        bool ok = o.passed && in_budget;
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.index << ": " << c.name
                  << " (" << o.seconds << "s";
        if (c.budget_seconds > 0) std::cout << " / budget " << c.budget_seconds << "s";
        std::cout << ")\n" << o.detail;
        if (!ok) ++failures;
    }

    // criterion 8: byte-identical reports across runs and worker counts
    {
        auto start = std::chrono::steady_clock::now();
        VerifyResult one = run_verification(seed, 1);
        VerifyResult four = run_verification(seed, 4);
        VerifyResult again = run_verification(seed, 4);
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool identical = one.report == four.report && four.report == again.report;
        bool ok = identical && one.all_passed;
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion 8: determinism (" << secs << "s)\n"
                  << "  reports byte-identical across worker counts 1 and 4 and across reruns: "
                  << (identical ? "yes" : "NO") << "\n";
        if (!ok) ++failures;
    }

    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all acceptance criteria passed\n";
    return 0;
}
