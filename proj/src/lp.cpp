#include "mlr/lp.hpp"

#include "mlr/errors.hpp"

namespace mlr {

namespace {

// Full-tableau simplex over exact rationals.  Rows 0..m-1 are constraints,
// row m is the (maximization) objective in reduced form.  Bland's rule on
// both the entering and leaving choices guarantees termination.
class Tableau {
  public:
    Tableau(std::vector<std::vector<Rational>> A, std::vector<Rational> b, int nvars)
        : m_(static_cast<int>(A.size())), n_(nvars), t_(std::move(A)), basis_(m_, -1) {
        for (int i = 0; i < m_; ++i) t_[i].push_back(b[i]);
        t_.push_back(std::vector<Rational>(n_ + 1, Rational(0)));
    }

    void set_objective(const std::vector<Rational>& c) {
        for (int j = 0; j < n_; ++j) t_[m_][j] = -c[j];
        t_[m_][n_] = 0;
        // reduce objective row against the current basis
        for (int i = 0; i < m_; ++i) {
            int bj = basis_[i];
            if (bj >= 0 && t_[m_][bj] != 0) add_row_multiple(m_, i, -t_[m_][bj]);
        }
    }

    void set_basis(int row, int col) { basis_[row] = col; }

    // Entering columns are restricted to [0, enter_limit); returns false when
    // unbounded.
    bool run(int enter_limit) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < enter_limit; ++j)
                if (t_[m_][j] < 0) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            Rational best;
            for (int i = 0; i < m_; ++i) {
                if (t_[i][enter] <= 0) continue;
                Rational ratio = t_[i][n_] / t_[i][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }

    void pivot(int row, int col) {
        Rational p = t_[row][col];
        for (auto& v : t_[row]) v /= p;
        for (int i = 0; i <= m_; ++i) {
            if (i == row) continue;
            if (t_[i][col] != 0) add_row_multiple(i, row, -t_[i][col]);
        }
        basis_[row] = col;
    }

    Rational objective_value() const { return t_[m_][n_]; }
    const std::vector<int>& basis() const { return basis_; }
    Rational rhs(int row) const { return t_[row][n_]; }
    Rational entry(int row, int col) const { return t_[row][col]; }
    int rows() const { return m_; }

  private:
    void add_row_multiple(int dst, int src, const Rational& f) {
        for (int j = 0; j <= n_; ++j)
            if (t_[src][j] != 0) t_[dst][j] += f * t_[src][j];
    }

    int m_, n_;
    std::vector<std::vector<Rational>> t_;  // (m_+1) x (n_+1)
    std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<Rational>>& A_in, const std::vector<Rational>& b_in,
                  const std::vector<Rational>& c) {
    int m = static_cast<int>(A_in.size());
    int n = static_cast<int>(c.size());
    for (const auto& row : A_in)
        if (static_cast<int>(row.size()) != n) throw PreconditionError("lp: ragged constraint matrix");
    if (static_cast<int>(b_in.size()) != m) throw PreconditionError("lp: rhs size mismatch");

    // normalize to b >= 0, then append one artificial variable per row
    std::vector<std::vector<Rational>> A = A_in;
    std::vector<Rational> b = b_in;
    for (int i = 0; i < m; ++i) {
        if (b[i] < 0) {
            b[i] = -b[i];
            for (auto& v : A[i]) v = -v;
        }
        A[i].resize(n + m, Rational(0));
        A[i][n + i] = 1;
    }

    Tableau t(std::move(A), b, n + m);
    for (int i = 0; i < m; ++i) t.set_basis(i, n + i);

    // phase 1: maximize -(sum of artificials)
    std::vector<Rational> phase1(n + m, Rational(0));
    for (int i = 0; i < m; ++i) phase1[n + i] = -1;
    t.set_objective(phase1);
    t.run(n + m);  // bounded by construction
    if (t.objective_value() != 0) {
        LpResult r;
        r.status = LpStatus::Infeasible;
        return r;
    }
    // Drive basic artificials (necessarily at value 0) out of the basis.  A
    // row with no original-variable entry left is redundant; its artificial
    // stays basic at 0 and pivots elsewhere cannot change that row.
    for (int i = 0; i < m; ++i) {
        if (t.basis()[i] < n) continue;
        for (int j = 0; j < n; ++j)
            if (t.entry(i, j) != 0) {
                t.pivot(i, j);
                break;
            }
    }

    // phase 2: original objective, artificial columns barred from entering
    std::vector<Rational> full(n + m, Rational(0));
    for (int j = 0; j < n; ++j) full[j] = c[j];
    t.set_objective(full);
    if (!t.run(n)) {
        LpResult r;
        r.status = LpStatus::Unbounded;
        return r;
    }

    LpResult r;
    r.status = LpStatus::Optimal;
    r.value = t.objective_value();
    r.x.assign(n, Rational(0));
    for (int i = 0; i < t.rows(); ++i) {
        int bj = t.basis()[i];
        if (bj >= 0 && bj < n) r.x[bj] = t.rhs(i);
    }
    return r;
}

}  // namespace mlr
