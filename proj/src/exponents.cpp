#include "mlr/exponents.hpp"

#include <cctype>
#include <sstream>

#include "mlr/errors.hpp"

namespace mlr {

bool ExponentTuple::all_at_least_one() const {
    for (const auto& r : reciprocals)
        if (r > 1) return false;
    return true;
}

ExponentTuple ExponentTuple::parse(const std::string& text) {
    ExponentTuple p;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string piece =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        // trim
        while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.front())))
            piece.erase(piece.begin());
        while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.back())))
            piece.pop_back();
        if (piece == "inf" || piece == "infinity") {
            p.reciprocals.emplace_back(0);
        } else {
            Rational v = parse_rational(piece);
            if (v <= 0) throw ParseError("exponent must be positive or 'inf': '" + piece + "'");
            p.reciprocals.push_back(Rational(1) / v);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (p.reciprocals.empty()) throw ParseError("empty exponent tuple");
    return p;
}

std::string ExponentTuple::to_string() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < k(); ++i) {
        if (i) os << ',';
        if (reciprocals[i] == 0)
            os << "inf";
        else
            os << Rational(1) / reciprocals[i];
    }
    os << ')';
    return os.str();
}

Rational BTuple::sum() const {
    Rational s = 0;
    for (const auto& v : b) s += v;
    return s;
}

BTuple BTuple::parse(const std::string& text) {
    BTuple t;
    t.b = parse_rational_list(text);
    for (const auto& v : t.b)
        if (v < 0) throw ParseError("b entries must be nonnegative");
    return t;
}

std::string BTuple::to_string() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < k(); ++i) {
        if (i) os << ',';
        os << b[i];
    }
    os << ')';
    return os.str();
}

Rational sigma(const ExponentTuple& p) {
    Rational s = 0;
    for (const auto& r : p.reciprocals) s += r;
    return s;
}

BTuple b_of_p(const ExponentTuple& p) {
    if (!p.all_at_least_one()) throw PreconditionError("b_of_p: some p_j < 1");
    Rational s = sigma(p);
    if (s <= 1) throw PreconditionError("b_of_p: sigma(p) <= 1");
    BTuple out;
    out.b.reserve(p.reciprocals.size());
    for (const auto& r : p.reciprocals) out.b.push_back(r / (s - 1));
    return out;
}

ExponentTuple p_of_b(const BTuple& b) {
    Rational s = b.sum();
    if (s <= 1) throw PreconditionError("p_of_b: sum of b must exceed 1");
    ExponentTuple p;
    p.reciprocals.reserve(b.b.size());
    for (const auto& v : b.b) {
        if (v < 0) throw PreconditionError("p_of_b: b entries must be nonnegative");
        if (v > s - 1) throw PreconditionError("p_of_b: b_i > sum(b) - 1 gives p_i < 1");
        p.reciprocals.push_back(v / (s - 1));  // 1/p_i; v = 0 gives p_i = inf
    }
    return p;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::HolderTrivial: return "HOLDER_TRIVIAL";
        case Verdict::FailsPBelowOne: return "FAILS_P_BELOW_ONE";
        case Verdict::StrongType: return "STRONG_TYPE";
        case Verdict::NotRestrictedWeakType: return "NOT_RESTRICTED_WEAK_TYPE";
        case Verdict::EndpointUnknown: return "ENDPOINT_UNKNOWN";
    }
    return "?";
}

Classification classify(const ExponentTuple& p, const NewtonPolytope& P) {
    Classification out;
    if (!p.all_at_least_one()) {
        out.verdict = Verdict::FailsPBelowOne;
        out.certificate = "some p_j < 1; testing shrinking balls falsifies the inequality";
        return out;
    }
    if (sigma(p) <= 1) {
        out.verdict = Verdict::HolderTrivial;
        out.certificate = "sum 1/p_j <= 1; bounded by Holder on a bounded neighborhood";
        return out;
    }
    out.b = b_of_p(p);
    if (P.empty()) {
        out.verdict = Verdict::NotRestrictedWeakType;
        out.certificate = "Hormander fails: no tuple with lambda_I nonzero at the base point";
        return out;
    }
    Rational t = interior_margin(P, out.b->b);
    out.margin = t;
    if (t > 0) {
        out.verdict = Verdict::StrongType;
        out.certificate = "b(p) interior to P with margin t* = " + mlr::to_string(t);
    } else if (t < 0) {
        out.verdict = Verdict::NotRestrictedWeakType;
        out.certificate = "b(p) outside P (t* = " + mlr::to_string(t) + ")";
    } else {
        out.verdict = Verdict::EndpointUnknown;
        out.certificate = "b(p) on the boundary of P; endpoints are left open";
    }
    return out;
}

}  // namespace mlr
