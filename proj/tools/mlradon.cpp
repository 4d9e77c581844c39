// mlradon: Lp-improving analysis of multilinear Radon-like transforms.
//
// Given k polynomial vector fields (or polynomial submersions) on R^n, the
// tool computes the bracket word catalog and Newton polytope, classifies
// exponent tuples, and runs the numerical Carnot-Caratheodory ball
// experiments (volumes, doubling, chart lemmas, necessity blow-up).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "mlr/exponents.hpp"
#include "mlr/flows.hpp"
#include "mlr/format.hpp"
#include "mlr/problem_spec.hpp"
#include "mlr/verify.hpp"

namespace {

using namespace mlr;

// exit codes: 0 ok, 1 internal/failed verification, 2 parse, 3 precondition,
// 4 numerical
constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNumerical = 4;

struct CommonOpts {
    std::string spec_path;
    std::string csv_path;
    std::string p_text;
    std::string b_text;
    std::string control_b_text;
    std::string delta_text;
    std::string delta_list_text;
    std::string delta0_list_text;
    std::string jseq_text;
    int samples = 200000;
    double K = -1;           // <0: use spec value
    std::string eps_text;    // empty: use spec value
    int cap = -1;            // <0: use spec value
    long long seed = -1;     // <0: use spec value
    int steps = 64;
};

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string piece =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        if (piece.find('/') != std::string::npos)
            out.push_back(to_double(parse_rational(piece)));
        else {
            try {
                out.push_back(std::stod(piece));
            } catch (...) {
                throw ParseError("bad number '" + piece + "'");
            }
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw ParseError("empty number list");
    return out;
}

std::vector<double> broadcast(std::vector<double> v, int k, const char* what) {
    if (static_cast<int>(v.size()) == 1) v.assign(k, v[0]);
    if (static_cast<int>(v.size()) != k)
        throw PreconditionError(std::string(what) + " needs 1 or k values");
    return v;
}

ProblemSpec load_spec(const CommonOpts& o) {
    if (o.spec_path.empty()) throw ParseError("a problem spec file is required");
    ProblemSpec spec = parse_spec_file(o.spec_path);
    if (!o.eps_text.empty()) spec.eps = parse_rational(o.eps_text);
    if (o.cap >= 1) spec.cap = o.cap;
    if (o.K >= 1) spec.K = o.K;
    if (o.seed >= 0) spec.seed = static_cast<std::uint64_t>(o.seed);
    if (spec.eps <= 0 || spec.eps > 1) throw ParseError("eps must lie in (0,1]");
    return spec;
}

FlowConfig flow_config(const ProblemSpec& spec, const CommonOpts& o) {
    FlowConfig cfg;
    cfg.seed = spec.seed;
    cfg.steps_per_unit = o.steps;
    cfg.validate();
    return cfg;
}

void print_header(std::ostream& os, const char* command, const ProblemSpec& spec,
                  const CommonOpts& o) {
    os << "# mlradon " << command << "\n";
    os << "# spec: n=" << spec.n << " k=" << spec.k
       << " mode=" << (spec.maps_given ? "maps" : "fields") << "\n";
    os << "# config: eps=" << spec.eps << " cap=" << spec.cap << " K=" << fmt9(spec.K)
       << " seed=" << spec.seed << " samples=" << o.samples << " steps=" << o.steps << "\n";
}

void write_csv(const std::string& path, const std::string& contents) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write CSV file '" + path + "'");
    out << contents;
}

std::vector<Rational> zero_point(int n) { return std::vector<Rational>(n, Rational(0)); }

int cmd_brackets(const CommonOpts& o) {
    ProblemSpec spec = load_spec(o);
    Catalog cat = make_catalog(spec);
    print_header(std::cout, "brackets", spec, o);
    std::cout << "# per-letter cap: " << cat.per_letter_cap() << "\n";
    std::cout << "word\tdegree\tfield\n";
    for (const auto& w : cat.nonzero_words())
        std::cout << w.to_string() << "\t" << degree_to_string(word_degree(w, spec.k)) << "\t"
                  << cat.word_field(w).to_string() << "\n";
    return 0;
}

int cmd_hormander(const CommonOpts& o) {
    ProblemSpec spec = load_spec(o);
    Catalog cat = make_catalog(spec);
    print_header(std::cout, "hormander", spec, o);
    HormanderResult h = hormander_check(cat, zero_point(spec.n));
    if (h.spans) {
        std::cout << "spans: true\nwitness:";
        for (const auto& w : h.witness) std::cout << " " << w.to_string();
        std::cout << "\n";
    } else {
        std::cout << "spans: false\nrank: " << h.rank << " of " << spec.n
                  << " (within cap " << cat.total_cap() << ")\n";
    }
    return 0;
}

int cmd_polytope(const CommonOpts& o) {
    ProblemSpec spec = load_spec(o);
    Catalog cat = make_catalog(spec);
    print_header(std::cout, "polytope", spec, o);
    NewtonPolytope P = build_polytope(cat, zero_point(spec.n));
    if (P.empty())
        throw PreconditionError(
            "empty polytope: no tuple with lambda_I(0) != 0 within cap " +
            std::to_string(cat.total_cap()) + "; S is not Lp-improving (Hormander fails)");
    std::cout << "# generators: " << P.generators.size()
              << ", minimal (vertices): " << P.minimal_generators.size() << "\n";
    std::cout << "# vertices:";
    for (const auto& g : P.minimal_generators) {
        std::cout << " (";
        for (std::size_t i = 0; i < g.size(); ++i) std::cout << (i ? "," : "") << g[i];
        std::cout << ")";
    }
    std::cout << "\n" << serialize(P);
    return 0;
}

int cmd_classify(const CommonOpts& o) {
    ProblemSpec spec = load_spec(o);
    if (o.p_text.empty()) throw ParseError("classify requires --p");
    ExponentTuple p = ExponentTuple::parse(o.p_text);
    if (p.k() != spec.k) throw PreconditionError("--p arity must equal k");
    Catalog cat = make_catalog(spec);
    NewtonPolytope P = build_polytope(cat, zero_point(spec.n));
    print_header(std::cout, "classify", spec, o);
    Classification c = classify(p, P);
    std::cout << "p = " << p.to_string() << "\nsigma = " << sigma(p) << "\n";
    if (c.b) std::cout << "b(p) = " << c.b->to_string() << "\n";
    if (c.margin) std::cout << "margin t* = " << *c.margin << "\n";
    std::cout << "verdict: " << to_string(c.verdict) << "\n# " << c.certificate << "\n";
    return 0;
}

int cmd_ball(const CommonOpts& o) {
    ProblemSpec spec = load_spec(o);
    if (o.delta_text.empty()) throw ParseError("ball requires --delta");
    FlowConfig cfg = flow_config(spec, o);
    BallSpec ball;
    ball.base = Vec::Zero(spec.n);
    ball.delta = broadcast(parse_double_list(o.delta_text), spec.k, "--delta");
    ball.samples = o.samples;
    print_header(std::cout, "ball", spec, o);
    if (auto eps = ball.nondegeneracy_eps())
        std::cout << "# nondegeneracy exponent: " << fmt9(*eps) << "\n";
    else
        std::cout << "# warning: some delta_j >= 1; smallness (12) not satisfied\n";
    PointCloud cloud = sample_ball(spec.fields, ball, cfg);
    double h = ball.effective_h();
    double vol = ball_volume(cloud, h);
    std::cout << "delta = (" << fmt9_list(ball.delta) << ")\nh = " << fmt9(h)
              << "\n|B| = " << fmt9(vol) << "\n";
    std::ostringstream csv;
    csv << "delta,h,volume\n\"" << fmt9_list(ball.delta) << "\"," << fmt9(h) << "," << fmt9(vol)
        << "\n";
    write_csv(o.csv_path, csv.str());
    return 0;
}

int cmd_volume_scan(const CommonOpts& o) {
    ProblemSpec spec = load_spec(o);
    if (o.delta_list_text.empty()) throw ParseError("volume-scan requires --delta-list");
    FlowConfig cfg = flow_config(spec, o);
    Catalog cat = make_catalog(spec);
    auto tuples = enumerate_tuples(cat, zero_point(spec.n));
    HormanderResult h = hormander_check(cat, zero_point(spec.n));
    if (!h.spans)
        throw PreconditionError("volume-scan requires the Hormander condition at 0");
    std::vector<double> scales = parse_double_list(o.delta_list_text);
    std::vector<std::vector<double>> deltas;
    for (double s : scales) deltas.push_back(std::vector<double>(spec.k, s));
    print_header(std::cout, "volume-scan", spec, o);
    auto rows = volume_vs_lambda(spec.fields, tuples, Vec::Zero(spec.n), deltas, o.samples, cfg);
    std::cout << "s\t|B|\t|Lambda|\tratio\n";
    std::ostringstream csv;
    csv << "s,volume,lambda,ratio\n";
    std::vector<double> vols;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        vols.push_back(rows[i].ball_volume);
        std::cout << fmt9(scales[i]) << "\t" << fmt9(rows[i].ball_volume) << "\t"
                  << fmt9(rows[i].lambda_norm) << "\t" << fmt9(rows[i].ratio) << "\n";
        csv << fmt9(scales[i]) << "," << fmt9(rows[i].ball_volume) << ","
            << fmt9(rows[i].lambda_norm) << "," << fmt9(rows[i].ratio) << "\n";
    }
    if (rows.size() >= 2)
        std::cout << "log-log slope: " << fmt9(fit_loglog_slope(scales, vols)) << "\n";
    std::cout << "# log-log plot data (log s, log |B|)\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::cout << fmt9(std::log(scales[i])) << " " << fmt9(std::log(vols[i])) << "\n";
    write_csv(o.csv_path, csv.str());
    return 0;
}

int cmd_doubling(const CommonOpts& o) {
    ProblemSpec spec = load_spec(o);
    if (o.delta_text.empty()) throw ParseError("doubling requires --delta");
    FlowConfig cfg = flow_config(spec, o);
    BallSpec ball;
    ball.base = Vec::Zero(spec.n);
    ball.delta = broadcast(parse_double_list(o.delta_text), spec.k, "--delta");
    ball.samples = o.samples;
    print_header(std::cout, "doubling", spec, o);
    double ratio = doubling_ratio(spec.fields, ball, cfg);
    std::cout << "delta = (" << fmt9_list(ball.delta) << ")\n|B(2delta)|/|B(delta)| = "
              << fmt9(ratio) << "\n";
    std::ostringstream csv;
    csv << "delta,ratio\n\"" << fmt9_list(ball.delta) << "\"," << fmt9(ratio) << "\n";
    write_csv(o.csv_path, csv.str());
    return 0;
}

int cmd_chart(const CommonOpts& o) {
    ProblemSpec spec = load_spec(o);
    if (o.delta_text.empty()) throw ParseError("chart requires --delta");
    FlowConfig cfg = flow_config(spec, o);
    Catalog cat = make_catalog(spec);
    auto tuples = enumerate_tuples(cat, zero_point(spec.n));
    std::vector<double> delta = broadcast(parse_double_list(o.delta_text), spec.k, "--delta");
    LambdaVector lv = lambda_vector(tuples, delta, spec.K);
    if (!(lv.norm > 0))
        throw PreconditionError("Lambda vanishes at 0; no chart tuple available");
    const WordTuple& sel = tuples[lv.argmax];
    print_header(std::cout, "chart", spec, o);
    std::cout << "I_{x0} = " << sel.to_string() << ", deg " << degree_to_string(sel.degree)
              << "\n|Lambda(0)| = " << fmt9(lv.norm) << "\n";
    ChartData chart = phi_chart(cat, Vec::Zero(spec.n), delta, spec.K, sel.words, cfg);
    ChartReport rep = verify_chart_lemmas(chart, cat, tuples, cfg);
    std::cout << "|Y_{w_i}(0) - e_i|            = " << fmt9(rep.y0_deviation) << " ["
              << (rep.y0_ok ? "ok" : "FAIL") << "]\n";
    std::cout << "max |Y_{w_i}(t) - e_i|        = " << fmt9(rep.max_y_deviation)
              << " (K/|t| normalized: " << fmt9(rep.y_deviation_per_t) << ")\n";
    std::cout << "|det Y| range                 = [" << fmt9(rep.det_min) << ", "
              << fmt9(rep.det_max) << "] [" << (rep.det_ok ? "ok" : "FAIL") << "]\n";
    std::cout << "|Lambda.Phi| / (Kd)^I|lam.Phi|= [" << fmt9(rep.lambda_ratio_min) << ", "
              << fmt9(rep.lambda_ratio_max) << "] [" << (rep.lambda_ok ? "ok" : "FAIL") << "]\n";
    std::cout << "|Phi(E)| / K^-n|Lambda||E|    = [" << fmt9(rep.phi_measure_ratio_min) << ", "
              << fmt9(rep.phi_measure_ratio_max) << "] [" << (rep.measure_ok ? "ok" : "FAIL")
              << "]\n";
    return 0;
}

int cmd_witness(const CommonOpts& o) {
    ProblemSpec spec = load_spec(o);
    if (!spec.maps_given)
        throw PreconditionError("witness needs submersion (map) input for the projections");
    if (o.delta0_list_text.empty()) throw ParseError("witness requires --delta0-list");
    if (o.p_text.empty() == o.b_text.empty())
        throw ParseError("witness requires exactly one of --p or --b");
    FlowConfig cfg = flow_config(spec, o);
    Catalog cat = make_catalog(spec);
    NewtonPolytope P = build_polytope(cat, zero_point(spec.n));
    BTuple b;
    if (!o.p_text.empty()) {
        ExponentTuple p = ExponentTuple::parse(o.p_text);
        if (p.k() != spec.k) throw PreconditionError("--p arity must equal k");
        Classification c = classify(p, P);
        if (c.verdict != Verdict::NotRestrictedWeakType)
            throw PreconditionError("witness requires NOT_RESTRICTED_WEAK_TYPE, got " +
                                    to_string(c.verdict));
        b = *c.b;
    } else {
        b = BTuple::parse(o.b_text);
        if (b.k() != spec.k) throw PreconditionError("--b arity must equal k");
    }
    std::vector<double> delta0 = parse_double_list(o.delta0_list_text);
    print_header(std::cout, "witness", spec, o);
    std::cout << "b = " << b.to_string() << "\n";
    WitnessResult w = necessity_witness(spec.fields, spec.maps, P, b.b, delta0, o.samples, cfg);
    std::cout << "a = (";
    for (std::size_t i = 0; i < w.functional.a.size(); ++i)
        std::cout << (i ? "," : "") << w.functional.a[i];
    std::cout << "), margin eps = " << w.functional.margin << "\n";
    std::cout << "delta0\t|Omega|\talpha\tratio\n";
    std::ostringstream csv;
    csv << "delta0,omega,alpha,ratio\n";
    for (const auto& r : w.rows) {
        std::cout << fmt9(r.delta0) << "\t" << fmt9(r.omega_measure) << "\t("
                  << fmt9_list(r.alpha) << ")\t" << fmt9(r.ratio) << "\n";
        csv << fmt9(r.delta0) << "," << fmt9(r.omega_measure) << ",\"" << fmt9_list(r.alpha)
            << "\"," << fmt9(r.ratio) << "\n";
    }
    if (!o.control_b_text.empty()) {
        std::vector<double> bc;
        for (const auto& v : BTuple::parse(o.control_b_text).b) bc.push_back(to_double(v));
        std::vector<double> a_d;
        for (const auto& v : w.functional.a) a_d.push_back(to_double(v));
        auto ctrl = witness_table(spec.fields, spec.maps, a_d, bc, delta0, o.samples, cfg);
        std::cout << "control b = " << BTuple::parse(o.control_b_text).to_string() << "\n";
        std::cout << "delta0\tratio\n";
        for (const auto& r : ctrl)
            std::cout << fmt9(r.delta0) << "\t" << fmt9(r.ratio) << "\n";
    }
    write_csv(o.csv_path, csv.str());
    return 0;
}

int cmd_verify(const CommonOpts& o) {
    std::uint64_t seed = o.seed >= 0 ? static_cast<std::uint64_t>(o.seed) : 0;
    FlowConfig cfg;
    VerifyResult r = run_verification(seed, cfg.effective_threads());
    std::cout << r.report;
    return r.all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lp-improving analysis of multilinear Radon-like transforms"};
    app.require_subcommand(1);
    CommonOpts o;

    auto add_common = [&](CLI::App* sub, bool needs_spec = true) {
        if (needs_spec) sub->add_option("spec", o.spec_path, "problem spec file")->required();
        sub->add_option("--eps", o.eps_text, "truncation parameter (rational, default 1/4)");
        sub->add_option("--cap", o.cap, "total word-length cap (default 4)");
        sub->add_option("--K", o.K, "chart scale parameter (default 8)");
        sub->add_option("--seed", o.seed, "rng seed");
        sub->add_option("--samples", o.samples, "Monte Carlo sample count");
        sub->add_option("--steps", o.steps, "integrator steps per unit time");
        sub->add_option("--csv", o.csv_path, "write table output to a CSV file");
    };

    auto* brackets = app.add_subcommand("brackets", "word catalog table");
    add_common(brackets);
    auto* hormander = app.add_subcommand("hormander", "bracket spanning check at 0");
    add_common(hormander);
    auto* polytope = app.add_subcommand("polytope", "Newton polytope generators and vertices");
    add_common(polytope);
    auto* classify_cmd = app.add_subcommand("classify", "classify an exponent tuple");
    add_common(classify_cmd);
    classify_cmd->add_option("--p", o.p_text, "exponent tuple, e.g. 2,2,2 or 3/2,inf");
    auto* ball = app.add_subcommand("ball", "sample a Carnot-Caratheodory ball");
    add_common(ball);
    ball->add_option("--delta", o.delta_text, "radii (k values or one broadcast)");
    auto* scan = app.add_subcommand("volume-scan", "volumes and |Lambda| across scales");
    add_common(scan);
    scan->add_option("--delta-list", o.delta_list_text, "comma-separated scales");
    auto* doubling = app.add_subcommand("doubling", "doubling ratio |B(2d)|/|B(d)|");
    add_common(doubling);
    doubling->add_option("--delta", o.delta_text, "radii (k values or one broadcast)");
    auto* chart = app.add_subcommand("chart", "chart lemma report for I_{x0}");
    add_common(chart);
    chart->add_option("--delta", o.delta_text, "radii (k values or one broadcast)");
    auto* witness = app.add_subcommand("witness", "necessity blow-up table");
    add_common(witness);
    witness->add_option("--p", o.p_text, "exponent tuple (classified first)");
    witness->add_option("--b", o.b_text, "b tuple directly (rationals)");
    witness->add_option("--control-b", o.control_b_text, "extra bounded-control table");
    witness->add_option("--delta0-list", o.delta0_list_text, "dyadic delta0 values");
    auto* verify_cmd = app.add_subcommand("verify", "run the bundled verification suite");
    verify_cmd->add_option("--seed", o.seed, "rng seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    try {
        if (*brackets) return cmd_brackets(o);
        if (*hormander) return cmd_hormander(o);
        if (*polytope) return cmd_polytope(o);
        if (*classify_cmd) return cmd_classify(o);
        if (*ball) return cmd_ball(o);
        if (*scan) return cmd_volume_scan(o);
        if (*doubling) return cmd_doubling(o);
        if (*chart) return cmd_chart(o);
        if (*witness) return cmd_witness(o);
        if (*verify_cmd) return cmd_verify(o);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
