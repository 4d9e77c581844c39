#include "mlr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mlr/exponents.hpp"
#include "mlr/flows.hpp"
#include "mlr/format.hpp"
#include "mlr/problem_spec.hpp"

namespace mlr {

const char* golden_spec_lw2() {
    return "# Loomis-Whitney in R^2, submersion input\n"
           "n=2 k=2\n"
           "map 1: x2\n"
           "map 2: x1\n";
}

const char* golden_spec_lw3() {
    return "# Loomis-Whitney in R^3, submersion input\n"
           "n=3 k=3\n"
           "map 1: x2, x3\n"
           "map 2: x1, x3\n"
           "map 3: x1, x2\n";
}

const char* golden_spec_tao_wright() {
    return "# Tao-Wright model operator: X1 = d1, X2 = d1 + x1 d2\n"
           "n=2 k=2\n"
           "field 1: 1, 0\n"
           "field 2: 1, x1\n";
}

const char* golden_spec_heisenberg() {
    return "# Heisenberg-type fields in R^3: X1 = d1, X2 = d2 + x1 d3\n"
           "n=3 k=2\n"
           "field 1: 1, 0, 0\n"
           "field 2: 0, 1, x1\n";
}

namespace verify {

namespace {

Polynomial random_sparse_poly(Rng& rng, int nvars, int max_deg, int terms) {
    Polynomial p(nvars);
    for (int t = 0; t < terms; ++t) {
        Exponents e(nvars, 0);
        int budget = rng.uniform_int(max_deg + 1);
        for (int b = 0; b < budget; ++b) ++e[rng.uniform_int(nvars)];
        int num = rng.uniform_int(7) - 3;  // -3..3
        if (num == 0) num = 1;
        int den = 1 + rng.uniform_int(3);
        p += Polynomial::monomial(nvars, e, Rational(num, den));
    }
    return p;
}

PolyVectorField random_field(Rng& rng, int nvars) {
    std::vector<Polynomial> comps;
    for (int i = 0; i < nvars; ++i) comps.push_back(random_sparse_poly(rng, nvars, 3, 2));
    return PolyVectorField(std::move(comps));
}

struct Golden {
    std::string name;
    ProblemSpec spec;
    std::vector<std::vector<long long>> expected_minimal;
};

std::vector<Golden> golden_models() {
    return {
        {"loomis-whitney-r2", parse_spec(golden_spec_lw2()), {{1, 1}}},
        {"tao-wright", parse_spec(golden_spec_tao_wright()), {{1, 2}, {2, 1}}},
        {"heisenberg", parse_spec(golden_spec_heisenberg()), {{2, 2}}},
    };
}

}  // namespace

bool symbolic_exactness(std::uint64_t seed, std::ostream& os) {
    bool ok = true;
    Rng rng = stream_rng(seed, 1);
    int triples = 0;
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + trial % 3;  // dimensions 2..4
        PolyVectorField X = random_field(rng, n);
        PolyVectorField Y = random_field(rng, n);
        PolyVectorField Z = random_field(rng, n);
        PolyVectorField anti = lie_bracket(X, Y) + lie_bracket(Y, X);
        PolyVectorField jacobi = lie_bracket(X, lie_bracket(Y, Z)) +
                                 lie_bracket(Y, lie_bracket(Z, X)) +
                                 lie_bracket(Z, lie_bracket(X, Y));
        if (!anti.is_zero() || !jacobi.is_zero()) {
            ok = false;
            os << "  antisymmetry/Jacobi violated on trial " << trial << "\n";
            break;
        }
        ++triples;
    }
    os << "  antisymmetry and Jacobi exact on " << triples << " random triples\n";

    // [[X1,X2],[X3,X4]] = -X_{(1,2,4,3)} + X_{(1,2,3,4)}
    BracketTree t = BracketTree::make_pair(
        BracketTree::make_pair(BracketTree::make_leaf(1), BracketTree::make_leaf(2)),
        BracketTree::make_pair(BracketTree::make_leaf(3), BracketTree::make_leaf(4)));
    WordCombination comb = expand_bracket(t);
    bool identity = comb.terms.size() == 2;
    for (const auto& [c, w] : comb.terms) {
        if (w == Word({1, 2, 3, 4}) && c == 1) continue;
        if (w == Word({1, 2, 4, 3}) && c == -1) continue;
        identity = false;
    }
    os << "  expand_bracket([[X1,X2],[X3,X4]]) = ";
    for (std::size_t i = 0; i < comb.terms.size(); ++i) {
        const auto& [c, w] = comb.terms[i];
        if (i) os << " ";
        os << (c < 0 ? "-" : (i ? "+" : "")) << (std::abs(c) == 1 ? "" : std::to_string(std::abs(c)) + "*")
           << "X" << w.to_string();
    }
    os << "\n";
    return ok && identity;
}

bool polytope_golden_set(std::ostream& os) {
    bool ok = true;
    for (auto& g : golden_models()) {
        Catalog cat = make_catalog(g.spec);
        std::vector<Rational> zero(g.spec.n, Rational(0));
        NewtonPolytope P = build_polytope(cat, zero);
        std::sort(g.expected_minimal.begin(), g.expected_minimal.end());
        bool match = P.minimal_generators == g.expected_minimal;

        ProblemSpec raised = g.spec;
        raised.cap += 1;
        NewtonPolytope P2 = build_polytope(make_catalog(raised), zero);
        bool stable = P2.minimal_generators == g.expected_minimal;

        os << "  " << g.name << ": minimal generators {";
        for (std::size_t i = 0; i < P.minimal_generators.size(); ++i) {
            if (i) os << ", ";
            os << "(";
            for (std::size_t j = 0; j < P.minimal_generators[i].size(); ++j)
                os << (j ? "," : "") << P.minimal_generators[i][j];
            os << ")";
        }
        os << "} cap=" << P.degree_cap << (match ? " exact" : " MISMATCH")
           << (stable ? ", cap-stable" : ", CAP-UNSTABLE") << "\n";
        ok = ok && match && stable;
    }
    return ok;
}

bool exponent_calculus(std::uint64_t seed, std::ostream& os) {
    bool ok = true;

    BTuple b222 = b_of_p(ExponentTuple::parse("2,2,2"));
    bool first = b222.b == std::vector<Rational>{1, 1, 1};
    os << "  b_of_p(2,2,2) = " << b222.to_string() << "\n";
    ok = ok && first;

    Rng rng = stream_rng(seed, 3);
    int done = 0;
    while (done < 1000) {
        int k = 2 + done % 3;
        BTuple b;
        for (int i = 0; i < k; ++i)
            b.b.emplace_back(rng.uniform_int(9), 1 + rng.uniform_int(4));
        Rational s = b.sum();
        if (s <= 1) continue;
        bool admissible = true;
        for (const auto& v : b.b)
            if (v > s - 1) admissible = false;
        if (!admissible) continue;
        ExponentTuple p = p_of_b(b);
        if (!(b_of_p(p).b == b.b)) {
            ok = false;
            os << "  roundtrip failed at b = " << b.to_string() << "\n";
            break;
        }
        ++done;
    }
    os << "  p_of_b/b_of_p roundtrip exact on " << done << " random admissible tuples\n";

    ProblemSpec lw2 = parse_spec(golden_spec_lw2());
    NewtonPolytope P = build_polytope(make_catalog(lw2), {0, 0});
    static const char* recips[] = {"0", "1/4", "1/3", "1/2", "2/3", "1", "3/2", "2"};
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        ExponentTuple p;
        for (int i = 0; i < 2; ++i)
            p.reciprocals.push_back(parse_rational(recips[rng.uniform_int(8)]));
        bool expect_holder = sigma(p) <= 1 && p.all_at_least_one();
        Verdict v = classify(p, P).verdict;
        if (expect_holder != (v == Verdict::HolderTrivial)) {
            ok = false;
            os << "  classify disagrees with the Holder predicate at p = " << p.to_string() << "\n";
            break;
        }
        ++checked;
    }
    os << "  HOLDER_TRIVIAL iff sigma <= 1 and p >= 1 on " << checked << " tuples\n";
    return ok;
}

bool ball_calibration(std::uint64_t seed, int threads, std::ostream& os) {
    ProblemSpec lw2 = parse_spec(golden_spec_lw2());
    FlowConfig cfg;
    cfg.seed = seed;
    cfg.threads = threads;
    BallSpec spec;
    spec.base = Vec::Zero(2);
    spec.delta = {0.2, 0.1};
    spec.samples = 200000;
    PointCloud cloud = sample_ball(lw2.fields, spec, cfg);
    double vol = ball_volume(cloud, spec.effective_h());
    double rel = vol / 0.04 - 1.0;
    bool vol_ok = std::abs(rel) <= 0.05;
    os << "  |B(0;(0.2,0.1))| = " << fmt9(vol) << " vs exact 0.04 (rel err " << fmt9(rel)
       << ", tol 5%)\n";

    double ratio = doubling_ratio(lw2.fields, spec, cfg);
    bool dbl_ok = std::abs(ratio / 4.0 - 1.0) <= 0.10;
    os << "  doubling ratio = " << fmt9(ratio) << " vs exact 4 (tol 10%)\n";
    return vol_ok && dbl_ok;
}

bool scaling_exponents(std::uint64_t seed, int threads, std::ostream& os) {
    bool ok = true;
    FlowConfig cfg;
    cfg.seed = seed;
    cfg.threads = threads;
    std::vector<double> scales = {0.2, 0.1, 0.05, 0.025};
    struct Case {
        const char* spec;
        const char* name;
    };
    for (const Case& c : {Case{golden_spec_heisenberg(), "heisenberg"},
                          Case{golden_spec_tao_wright(), "tao-wright"}}) {
        ProblemSpec spec = parse_spec(c.spec);
        Catalog cat = make_catalog(spec);
        std::vector<Rational> zero(spec.n, Rational(0));
        auto tuples = enumerate_tuples(cat, zero);
        NewtonPolytope P = build_polytope(cat, zero);
        long long target = 0;
        for (const auto& g : P.minimal_generators) {
            long long s = 0;
            for (long long v : g) s += v;
            if (target == 0 || s < target) target = s;
        }
        std::vector<std::vector<double>> deltas;
        for (double s : scales) deltas.push_back(std::vector<double>(spec.k, s));
        auto rows = volume_vs_lambda(spec.fields, tuples, Vec::Zero(spec.n), deltas, 200000, cfg);
        std::vector<double> vols;
        for (const auto& r : rows) vols.push_back(r.ball_volume);
        double slope = fit_loglog_slope(scales, vols);
        bool slope_ok = std::abs(slope - static_cast<double>(target)) <= 0.3;
        bool bracket_ok = true;
        for (const auto& r : rows) bracket_ok = bracket_ok && r.ratio >= 1.0 / 16 && r.ratio <= 16;
        os << "  " << c.name << ": log-log slope = " << fmt9(slope) << " vs min 1.g = " << target
           << " (tol 0.3); |B|/|Lambda| in [" << fmt9(rows.front().ratio) << ", "
           << fmt9(rows.back().ratio) << "]\n";
        ok = ok && slope_ok && bracket_ok;
    }
    return ok;
}

bool chart_lemmas(std::uint64_t seed, int threads, std::ostream& os) {
    bool ok = true;
    FlowConfig cfg;
    cfg.seed = seed;
    cfg.threads = threads;
    std::vector<double> Ks = {4, 8, 16, 32};
    for (auto& g : golden_models()) {
        Catalog cat = make_catalog(g.spec);
        std::vector<Rational> zero(g.spec.n, Rational(0));
        auto tuples = enumerate_tuples(cat, zero);
        std::vector<double> delta(g.spec.k, 0.05);

        std::vector<double> devs;
        ChartReport rep8;
        for (double K : Ks) {
            LambdaVector lv = lambda_vector(tuples, delta, K);
            const WordTuple& sel = tuples[lv.argmax];
            ChartData chart = phi_chart(cat, Vec::Zero(g.spec.n), delta, K, sel.words, cfg);
            ChartReport rep = verify_chart_lemmas(chart, cat, tuples, cfg);
            devs.push_back(rep.max_y_deviation);
            if (K == 8) rep8 = rep;
        }
        bool monotone = true;
        for (std::size_t i = 1; i < devs.size(); ++i)
            if (devs[i] > devs[i - 1] + 1e-9) monotone = false;
        os << "  " << g.name << ": Y(0) dev " << fmt9(rep8.y0_deviation) << " (tol 1e-5); |det Y| in ["
           << fmt9(rep8.det_min) << ", " << fmt9(rep8.det_max) << "] (need [0.5,2]); max|Y-e| over K=("
           << fmt9_list(devs, ", ") << ")" << (monotone ? " monotone" : " NOT MONOTONE") << "\n";
        ok = ok && rep8.y0_ok && rep8.det_ok && monotone;
    }
    return ok;
}

bool necessity_blowup(std::uint64_t seed, int threads, std::ostream& os) {
    ProblemSpec lw2 = parse_spec(golden_spec_lw2());
    Catalog cat = make_catalog(lw2);
    NewtonPolytope P = build_polytope(cat, {0, 0});
    FlowConfig cfg;
    cfg.seed = seed;
    cfg.threads = threads;
    std::vector<double> delta0 = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
    std::vector<Rational> b = {Rational(1, 2), Rational(1, 2)};

    WitnessResult w = necessity_witness(lw2.fields, lw2.maps, P, b, delta0, 200000, cfg);
    os << "  separating functional a = (";
    for (std::size_t i = 0; i < w.functional.a.size(); ++i)
        os << (i ? "," : "") << w.functional.a[i];
    os << "), margin " << w.functional.margin << "\n";
    bool monotone = true;
    for (std::size_t i = 1; i < w.rows.size(); ++i)
        if (!(w.rows[i].ratio > w.rows[i - 1].ratio)) monotone = false;
    double cumulative = w.rows.back().ratio / w.rows.front().ratio;
    os << "  witness ratios alpha^b/|Omega| (b=(1/2,1/2)): ";
    for (std::size_t i = 0; i < w.rows.size(); ++i) os << (i ? ", " : "") << fmt9(w.rows[i].ratio);
    os << "; cumulative x" << fmt9(cumulative) << " (need >= 3, monotone)\n";

    // control at the vertex b = (1,1): the extremizer direction, ratio flat
    std::vector<double> a_d;
    for (const auto& v : w.functional.a) a_d.push_back(to_double(v));
    auto ctrl = witness_table(lw2.fields, lw2.maps, a_d, {1.0, 1.0}, delta0, 200000, cfg);
    double lo = ctrl.front().ratio, hi = ctrl.front().ratio;
    for (const auto& r : ctrl) {
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
    }
    double band = hi / lo;
    os << "  control ratios (b=(1,1)): ";
    for (std::size_t i = 0; i < ctrl.size(); ++i) os << (i ? ", " : "") << fmt9(ctrl[i].ratio);
    os << "; band x" << fmt9(band) << " (need <= 2)\n";

    return monotone && cumulative >= 3.0 && band <= 2.0;
}

}  // namespace verify

VerifyResult run_verification(std::uint64_t seed, int threads) {
    std::ostringstream os;
    os << "# mlradon verification suite\n";
    os << "# seed=" << seed << "\n";
    struct Entry {
        const char* name;
        bool passed;
    };
    std::vector<Entry> entries;
    auto run = [&](int idx, const char* name, auto&& fn) {
        std::ostringstream detail;
        bool passed = false;
        try {
            passed = fn(detail);
        } catch (const std::exception& e) {
            detail << "  exception: " << e.what() << "\n";
        }
        os << "criterion " << idx << " [" << (passed ? "PASS" : "FAIL") << "] " << name << "\n"
           << detail.str();
        entries.push_back({name, passed});
    };
    run(1, "symbolic exactness", [&](std::ostream& d) { return verify::symbolic_exactness(seed, d); });
    run(2, "polytope golden set", [&](std::ostream& d) { return verify::polytope_golden_set(d); });
    run(3, "exponent calculus", [&](std::ostream& d) { return verify::exponent_calculus(seed, d); });
    run(4, "ball volume calibration",
        [&](std::ostream& d) { return verify::ball_calibration(seed, threads, d); });
    run(5, "scaling exponents",
        [&](std::ostream& d) { return verify::scaling_exponents(seed, threads, d); });
    run(6, "chart lemmas", [&](std::ostream& d) { return verify::chart_lemmas(seed, threads, d); });
    run(7, "necessity blow-up",
        [&](std::ostream& d) { return verify::necessity_blowup(seed, threads, d); });

    int passed = 0;
    for (const auto& e : entries) passed += e.passed;
    os << "# result: " << passed << "/" << entries.size() << " criteria passed\n";
    VerifyResult r;
    r.all_passed = passed == static_cast<int>(entries.size());
    r.report = os.str();
    return r;
}

}  // namespace mlr
