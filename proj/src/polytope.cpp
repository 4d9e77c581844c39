#include "mlr/polytope.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "mlr/errors.hpp"
#include "mlr/lp.hpp"

namespace mlr {

namespace {

void check_b(const NewtonPolytope& P, const std::vector<Rational>& b) {
    if (static_cast<int>(b.size()) != P.k)
        throw PreconditionError("polytope arity mismatch: expected k=" + std::to_string(P.k));
    for (const auto& v : b)
        if (v < 0) throw PreconditionError("b must be componentwise nonnegative");
}

// Membership in conv(gens) + R^k_{>=0} as LP feasibility:
//   sum mu_g g + s = b, sum mu = 1, mu >= 0, s >= 0.
bool lp_contains(const std::vector<std::vector<long long>>& gens, const std::vector<Rational>& b) {
    if (gens.empty()) return false;
    int m = static_cast<int>(gens.size());
    int k = static_cast<int>(b.size());
    int nvars = m + k;
    std::vector<std::vector<Rational>> A(k + 1, std::vector<Rational>(nvars, Rational(0)));
    std::vector<Rational> rhs(k + 1, Rational(0));
    for (int i = 0; i < k; ++i) {
        for (int g = 0; g < m; ++g) A[i][g] = gens[g][i];
        A[i][m + i] = 1;
        rhs[i] = b[i];
    }
    for (int g = 0; g < m; ++g) A[k][g] = 1;
    rhs[k] = 1;
    LpResult r = solve_lp(A, rhs, std::vector<Rational>(nvars, Rational(0)));
    return r.status == LpStatus::Optimal;
}

std::vector<std::vector<long long>> minimal_of(const std::vector<std::vector<long long>>& gens) {
    std::vector<std::vector<long long>> minimal;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        std::vector<std::vector<long long>> others;
        others.reserve(gens.size() - 1);
        for (std::size_t j = 0; j < gens.size(); ++j)
            if (j != i) others.push_back(gens[j]);
        std::vector<Rational> b(gens[i].begin(), gens[i].end());
        if (!lp_contains(others, b)) minimal.push_back(gens[i]);
    }
    return minimal;
}

}  // namespace

NewtonPolytope polytope_from_generators(int k, std::vector<std::vector<long long>> gens,
                                        int degree_cap, int per_letter_cap) {
    for (const auto& g : gens)
        if (static_cast<int>(g.size()) != k)
            throw PreconditionError("generator arity mismatch");
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    NewtonPolytope P;
    P.k = k;
    P.generators = std::move(gens);
    P.minimal_generators = minimal_of(P.generators);
    P.degree_cap = degree_cap;
    P.per_letter_cap = per_letter_cap;
    return P;
}

NewtonPolytope build_polytope(const Catalog& c, const std::vector<Rational>& point) {
    auto tuples = enumerate_tuples(c, point);
    std::vector<std::vector<long long>> gens;
    for (const auto& t : tuples) {
        if (!t.nonzero_at_point()) continue;
        gens.emplace_back(t.degree.begin(), t.degree.end());
    }
    return polytope_from_generators(c.k(), std::move(gens), c.total_cap(), c.per_letter_cap());
}

bool contains(const NewtonPolytope& P, const std::vector<Rational>& b) {
    check_b(P, b);
    return lp_contains(P.generators, b);
}

Rational interior_margin(const NewtonPolytope& P, const std::vector<Rational>& b) {
    check_b(P, b);
    if (P.empty()) throw PreconditionError("interior_margin: empty polytope");
    // max t : sum mu_g g + t*1 + s = b, sum mu = 1; t = tp - tm free
    int m = static_cast<int>(P.generators.size());
    int k = P.k;
    int nvars = m + 2 + k;  // mu, tp, tm, slacks
    std::vector<std::vector<Rational>> A(k + 1, std::vector<Rational>(nvars, Rational(0)));
    std::vector<Rational> rhs(k + 1, Rational(0));
    std::vector<Rational> c(nvars, Rational(0));
    for (int i = 0; i < k; ++i) {
        for (int g = 0; g < m; ++g) A[i][g] = P.generators[g][i];
        A[i][m] = 1;
        A[i][m + 1] = -1;
        A[i][m + 2 + i] = 1;
        rhs[i] = b[i];
    }
    for (int g = 0; g < m; ++g) A[k][g] = 1;
    rhs[k] = 1;
    c[m] = 1;
    c[m + 1] = -1;
    LpResult r = solve_lp(A, rhs, c);
    if (r.status != LpStatus::Optimal)
        throw NumericalError("interior_margin: LP did not solve (internal)");
    return r.value;
}

bool interior_contains(const NewtonPolytope& P, const std::vector<Rational>& b) {
    check_b(P, b);
    if (P.empty()) return false;
    return interior_margin(P, b) > 0;
}

namespace {

// stage 1: maximize the symmetric margin s with entries bounded below by eta:
//   a.g - s >= 1 for all generators, a.b + s <= 1, a >= eta.
// Feasible with s > 0 for small eta exactly when b is outside P.
struct Stage1 {
    bool ok = false;
    std::vector<Rational> a;
    Rational s;
};

Stage1 stage1(const NewtonPolytope& P, const std::vector<Rational>& b, const Rational& eta) {
    int m = static_cast<int>(P.generators.size());
    int k = P.k;
    // vars: ahat (k), sp, sm, surplus r_g (m), slack u (1)
    int nvars = k + 2 + m + 1;
    std::vector<std::vector<Rational>> A(m + 1, std::vector<Rational>(nvars, Rational(0)));
    std::vector<Rational> rhs(m + 1, Rational(0));
    std::vector<Rational> c(nvars, Rational(0));
    for (int g = 0; g < m; ++g) {
        Rational gsum = 0;
        for (int i = 0; i < k; ++i) {
            A[g][i] = P.generators[g][i];
            gsum += Rational(P.generators[g][i]);
        }
        A[g][k] = -1;      // -sp
        A[g][k + 1] = 1;   // +sm
        A[g][k + 2 + g] = -1;
        rhs[g] = Rational(1) - eta * gsum;
    }
    Rational bsum = 0;
    for (int i = 0; i < k; ++i) {
        A[m][i] = b[i];
        bsum += b[i];
    }
    A[m][k] = 1;
    A[m][k + 1] = -1;
    A[m][k + 2 + m] = 1;
    rhs[m] = Rational(1) - eta * bsum;
    c[k] = 1;
    c[k + 1] = -1;
    LpResult r = solve_lp(A, rhs, c);
    Stage1 out;
    if (r.status != LpStatus::Optimal) return out;
    out.ok = true;
    out.s = r.value;
    out.a.resize(k);
    for (int i = 0; i < k; ++i) out.a[i] = eta + r.x[i];
    return out;
}

// stage 2: at fixed margin eps, maximize the minimum entry of a subject to
// an upper cap, so the returned functional is balanced.
std::vector<Rational> stage2(const NewtonPolytope& P, const std::vector<Rational>& b,
                             const Rational& eta, const Rational& eps, const Rational& cap) {
    int m = static_cast<int>(P.generators.size());
    int k = P.k;
    // vars: ahat (k), mvar, r_g (m), u (1), w_i (k), v_i (k)
    int nvars = k + 1 + m + 1 + k + k;
    int rows = m + 1 + k + k;
    std::vector<std::vector<Rational>> A(rows, std::vector<Rational>(nvars, Rational(0)));
    std::vector<Rational> rhs(rows, Rational(0));
    std::vector<Rational> c(nvars, Rational(0));
    int row = 0;
    for (int g = 0; g < m; ++g, ++row) {
        Rational gsum = 0;
        for (int i = 0; i < k; ++i) {
            A[row][i] = P.generators[g][i];
            gsum += Rational(P.generators[g][i]);
        }
        A[row][k + 1 + g] = -1;
        rhs[row] = Rational(1) + eps - eta * gsum;
    }
    {
        Rational bsum = 0;
        for (int i = 0; i < k; ++i) {
            A[row][i] = b[i];
            bsum += b[i];
        }
        A[row][k + 1 + m] = 1;
        rhs[row] = Rational(1) - eps - eta * bsum;
        ++row;
    }
    for (int i = 0; i < k; ++i, ++row) {  // a_i - mvar >= 0:  ahat_i - mvar - w_i = -eta
        A[row][i] = 1;
        A[row][k] = -1;
        A[row][k + 1 + m + 1 + i] = -1;
        rhs[row] = -eta;
    }
    for (int i = 0; i < k; ++i, ++row) {  // a_i <= cap:  ahat_i + v_i = cap - eta
        A[row][i] = 1;
        A[row][k + 1 + m + 1 + k + i] = 1;
        rhs[row] = cap - eta;
    }
    c[k] = 1;  // maximize mvar
    LpResult r = solve_lp(A, rhs, c);
    if (r.status != LpStatus::Optimal)
        throw NumericalError("separating_functional: balancing LP failed (internal)");
    std::vector<Rational> a(k);
    for (int i = 0; i < k; ++i) a[i] = eta + r.x[i];
    return a;
}

}  // namespace

SeparatingFunctional separating_functional(const NewtonPolytope& P,
                                           const std::vector<Rational>& b) {
    check_b(P, b);
    if (P.empty()) throw PreconditionError("separating_functional: empty polytope");
    Rational eta(1, 1000);
    for (int attempt = 0; attempt < 7; ++attempt, eta /= 10) {
        Stage1 s1 = stage1(P, b, eta);
        if (!s1.ok || s1.s <= 0) continue;
        Rational eps = s1.s / 2;
        Rational maxa = s1.a[0];
        for (const auto& v : s1.a) maxa = std::max(maxa, v);
        Rational cap = std::max(Rational(8), Rational(4) * maxa);
        std::vector<Rational> a = stage2(P, b, eta, eps, cap);
        // post-hoc exact verification; the reported margin is half the
        // achieved slack so that a.b < 1 - margin and a.g > 1 + margin hold
        // strictly
        Rational adotb = 0;
        for (int i = 0; i < P.k; ++i) adotb += a[i] * b[i];
        bool ok = adotb < 1;
        Rational slack = Rational(1) - adotb;
        for (const auto& g : P.generators) {
            Rational adotg = 0;
            for (int i = 0; i < P.k; ++i) adotg += a[i] * Rational(g[i]);
            if (adotg <= 1) ok = false;
            slack = std::min(slack, Rational(adotg - 1));
        }
        for (const auto& v : a)
            if (v <= 0) ok = false;
        if (!ok) throw NumericalError("separating_functional: verification failed (internal)");
        return SeparatingFunctional{std::move(a), slack / 2};
    }
    throw PreconditionError("separating_functional: infeasible, b lies in P");
}

std::vector<std::vector<long long>> vertices(const NewtonPolytope& P) {
    if (P.empty()) throw PreconditionError("vertices: empty polytope");
    return P.minimal_generators;
}

std::string serialize(const NewtonPolytope& P) {
    std::ostringstream os;
    os << "k=" << P.k << " cap=" << P.degree_cap << '\n';
    for (const auto& g : P.minimal_generators) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (i) os << ' ';
            os << g[i];
        }
        os << '\n';
    }
    return os.str();
}

NewtonPolytope parse_polytope(const std::string& text) {
    std::istringstream is(text);
    std::string header;
    if (!std::getline(is, header)) throw ParseError("polytope: empty input");
    int k = 0, cap = 0;
    if (std::sscanf(header.c_str(), "k=%d cap=%d", &k, &cap) != 2)
        throw ParseError("polytope: bad header '" + header + "'");
    if (k < 1) throw ParseError("polytope: k must be positive");
    std::vector<std::vector<long long>> gens;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<long long> g;
        long long v;
        while (ls >> v) g.push_back(v);
        if (static_cast<int>(g.size()) != k)
            throw ParseError("polytope: generator arity mismatch in '" + line + "'");
        gens.push_back(std::move(g));
    }
    return polytope_from_generators(k, std::move(gens), cap);
}

}  // namespace mlr
