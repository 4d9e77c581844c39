#include "mlr/vector_field.hpp"

#include <map>
#include <sstream>

#include "mlr/errors.hpp"

namespace mlr {

PolyVectorField::PolyVectorField(std::vector<Polynomial> comps) : components(std::move(comps)) {
    for (const auto& c : components)
        if (c.nvars() != nvars())
            throw PreconditionError("vector field components disagree on variable count");
}

bool PolyVectorField::is_zero() const {
    for (const auto& c : components)
        if (!c.is_zero()) return false;
    return true;
}

std::vector<Rational> PolyVectorField::evaluate(const std::vector<Rational>& x) const {
    std::vector<Rational> v;
    v.reserve(components.size());
    for (const auto& c : components) v.push_back(c.evaluate(x));
    return v;
}

std::vector<double> PolyVectorField::evaluate(const std::vector<double>& x) const {
    std::vector<double> v;
    v.reserve(components.size());
    for (const auto& c : components) v.push_back(c.evaluate(x));
    return v;
}

PolyVectorField PolyVectorField::operator+(const PolyVectorField& o) const {
    if (nvars() != o.nvars()) throw PreconditionError("vector field dimension mismatch");
    std::vector<Polynomial> comps;
    comps.reserve(components.size());
    for (std::size_t i = 0; i < components.size(); ++i)
        comps.push_back(components[i] + o.components[i]);
    return PolyVectorField(std::move(comps));
}

PolyVectorField PolyVectorField::operator-(const PolyVectorField& o) const {
    if (nvars() != o.nvars()) throw PreconditionError("vector field dimension mismatch");
    std::vector<Polynomial> comps;
    comps.reserve(components.size());
    for (std::size_t i = 0; i < components.size(); ++i)
        comps.push_back(components[i] - o.components[i]);
    return PolyVectorField(std::move(comps));
}

PolyVectorField PolyVectorField::scaled(const Rational& c) const {
    std::vector<Polynomial> comps;
    comps.reserve(components.size());
    for (const auto& p : components) comps.push_back(p.scaled(c));
    return PolyVectorField(std::move(comps));
}

std::string PolyVectorField::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (i) os << ", ";
        os << components[i].to_string();
    }
    os << ')';
    return os.str();
}

PolyMap::PolyMap(std::vector<Polynomial> comps, int n) : components(std::move(comps)), nvars(n) {
    if (static_cast<int>(components.size()) != n - 1)
        throw PreconditionError("submersion must have exactly n-1 components");
    for (const auto& c : components)
        if (c.nvars() != n) throw PreconditionError("map component variable count mismatch");
}

std::vector<double> PolyMap::evaluate(const std::vector<double>& x) const {
    std::vector<double> v;
    v.reserve(components.size());
    for (const auto& c : components) v.push_back(c.evaluate(x));
    return v;
}

std::vector<Rational> PolyMap::evaluate(const std::vector<Rational>& x) const {
    std::vector<Rational> v;
    v.reserve(components.size());
    for (const auto& c : components) v.push_back(c.evaluate(x));
    return v;
}

PolyVectorField coordinate_field(int nvars, int i) {
    std::vector<Polynomial> comps(nvars, Polynomial(nvars));
    comps[i - 1] = Polynomial::constant(nvars, 1);
    return PolyVectorField(std::move(comps));
}

PolyVectorField lie_bracket(const PolyVectorField& X, const PolyVectorField& Y) {
    int n = X.nvars();
    if (n != Y.nvars()) throw PreconditionError("lie_bracket: dimension mismatch");
    std::vector<Polynomial> comps;
    comps.reserve(n);
    for (int j = 0; j < n; ++j) {
        Polynomial sum(n);
        for (int i = 1; i <= n; ++i) {
            sum += X.components[i - 1] * Y.components[j].partial_derivative(i);
            sum -= Y.components[i - 1] * X.components[j].partial_derivative(i);
        }
        comps.push_back(std::move(sum));
    }
    return PolyVectorField(std::move(comps));
}

namespace {

// Laplace expansion down the rows, memoized on the set of unused columns.
Polynomial det_rec(const std::vector<std::vector<Polynomial>>& m, unsigned mask, int row, int n,
                   std::map<unsigned, Polynomial>& memo) {
    if (row == n) return Polynomial::constant(m[0][0].nvars(), 1);
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    Polynomial sum(m[0][0].nvars());
    int sign = 1;
    for (int c = 0; c < n; ++c) {
        if (!(mask & (1u << c))) continue;
        if (!m[row][c].is_zero()) {
            Polynomial sub = det_rec(m, mask & ~(1u << c), row + 1, n, memo);
            Polynomial term = m[row][c] * sub;
            if (sign < 0) term = -term;
            sum += term;
        }
        sign = -sign;
    }
    memo.emplace(mask, sum);
    return sum;
}

}  // namespace

Polynomial poly_determinant(const std::vector<std::vector<Polynomial>>& m) {
    int n = static_cast<int>(m.size());
    if (n == 0) throw PreconditionError("determinant of empty matrix");
    if (n > 16) throw PreconditionError("determinant: dimension too large");
    for (const auto& row : m)
        if (static_cast<int>(row.size()) != n)
            throw PreconditionError("determinant: matrix not square");
    std::map<unsigned, Polynomial> memo;
    return det_rec(m, (1u << n) - 1, 0, n, memo);
}

Polynomial determinant(const std::vector<PolyVectorField>& fields) {
    int n = static_cast<int>(fields.size());
    if (n == 0) throw PreconditionError("determinant of no fields");
    for (const auto& f : fields)
        if (f.nvars() != n) throw PreconditionError("determinant: need n fields in n variables");
    // matrix entry (i,j) = component i of field j
    std::vector<std::vector<Polynomial>> m(n, std::vector<Polynomial>(n, Polynomial(fields[0].components[0].nvars())));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = fields[j].components[i];
    return poly_determinant(m);
}

std::vector<std::vector<Polynomial>> jacobian(const PolyMap& pi) {
    int n = pi.nvars;
    std::vector<std::vector<Polynomial>> J(n - 1, std::vector<Polynomial>(n, Polynomial(n)));
    for (int i = 0; i < n - 1; ++i)
        for (int j = 1; j <= n; ++j) J[i][j - 1] = pi.components[i].partial_derivative(j);
    return J;
}

PolyVectorField kernel_field(const PolyMap& pi) {
    int n = pi.nvars;
    auto J = jacobian(pi);
    std::vector<Polynomial> comps;
    comps.reserve(n);
    for (int omit = 0; omit < n; ++omit) {
        if (n == 1) {
            comps.push_back(Polynomial::constant(1, 1));
            continue;
        }
        std::vector<std::vector<Polynomial>> minor(n - 1);
        for (int r = 0; r < n - 1; ++r) {
            minor[r].reserve(n - 1);
            for (int c = 0; c < n; ++c)
                if (c != omit) minor[r].push_back(J[r][c]);
        }
        Polynomial d = poly_determinant(minor);
        comps.push_back(omit % 2 == 0 ? d : -d);
    }
    return PolyVectorField(std::move(comps));
}

}  // namespace mlr
