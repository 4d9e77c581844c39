#include "mlr/problem_spec.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mlr/errors.hpp"

namespace mlr {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ParseError("spec line " + std::to_string(line) + ": " + msg);
}

std::vector<Polynomial> parse_components(const std::string& text, int n, int expected, int line) {
    std::vector<std::string> pieces;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        pieces.push_back(comma == std::string::npos ? text.substr(start)
                                                    : text.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (static_cast<int>(pieces.size()) != expected)
        fail(line, "expected " + std::to_string(expected) + " comma-separated components, got " +
                       std::to_string(pieces.size()));
    std::vector<Polynomial> out;
    for (const auto& piece : pieces) {
        try {
            out.push_back(Polynomial::parse(trim(piece), n));
        } catch (const ParseError& e) {
            fail(line, e.what());
        }
    }
    return out;
}

}  // namespace

ProblemSpec parse_spec(const std::string& text) {
    ProblemSpec spec;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    bool header_seen = false;
    std::vector<std::pair<int, PolyVectorField>> fields;  // (index, field)
    std::vector<std::pair<int, PolyMap>> maps;

    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.rfind("field", 0) == 0 || line.rfind("map", 0) == 0) {
            if (!header_seen) fail(lineno, "n and k must be set before fields or maps");
            bool is_map = line[0] == 'm';
            std::size_t colon = line.find(':');
            if (colon == std::string::npos) fail(lineno, "expected ':' after field/map index");
            std::string idx_str = trim(line.substr(is_map ? 3 : 5, colon - (is_map ? 3 : 5)));
            int idx = 0;
            try {
                idx = std::stoi(idx_str);
            } catch (...) {
                fail(lineno, "bad field/map index '" + idx_str + "'");
            }
            if (idx < 1 || idx > spec.k) fail(lineno, "field/map index out of range 1..k");
            std::string body = line.substr(colon + 1);
            if (is_map) {
                auto comps = parse_components(body, spec.n, spec.n - 1, lineno);
                maps.emplace_back(idx, PolyMap(std::move(comps), spec.n));
            } else {
                auto comps = parse_components(body, spec.n, spec.n, lineno);
                fields.emplace_back(idx, PolyVectorField(std::move(comps)));
            }
            continue;
        }

        // key=value settings, possibly several per line (e.g. "n=3 k=2")
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            std::size_t eq = tok.find('=');
            if (eq == std::string::npos) fail(lineno, "expected key=value, got '" + tok + "'");
            std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            try {
                if (key == "n")
                    spec.n = std::stoi(val);
                else if (key == "k")
                    spec.k = std::stoi(val);
                else if (key == "eps")
                    spec.eps = parse_rational(val);
                else if (key == "cap")
                    spec.cap = std::stoi(val);
                else if (key == "K")
                    spec.K = std::stod(val);
                else if (key == "seed")
                    spec.seed = std::stoull(val);
                else
                    fail(lineno, "unknown key '" + key + "'");
            } catch (const ParseError&) {
                throw;
            } catch (...) {
                fail(lineno, "bad value for '" + key + "'");
            }
        }
        if (spec.n > 0 && spec.k > 0) header_seen = true;
        if (header_seen && (spec.n < 1 || spec.n > 16 || spec.k < 1 || spec.k > 8))
            fail(lineno, "need 1 <= n <= 16 and 1 <= k <= 8");
    }

    if (!header_seen) throw ParseError("spec: missing 'n=... k=...' header");
    if (!fields.empty() && !maps.empty())
        throw ParseError("spec: mix of 'field' and 'map' lines; choose one mode");
    if (fields.empty() && maps.empty()) throw ParseError("spec: no fields or maps given");
    if (spec.eps <= 0 || spec.eps > 1) throw ParseError("spec: eps must lie in (0,1]");
    if (spec.cap < 1) throw ParseError("spec: cap must be >= 1");
    if (spec.K < 1) throw ParseError("spec: K must be >= 1");

    auto place = [&](auto& entries, auto& target, const char* what) {
        target.resize(spec.k);
        std::vector<bool> seen(spec.k, false);
        for (auto& [idx, value] : entries) {
            if (seen[idx - 1])
                throw ParseError(std::string("spec: duplicate ") + what + " " + std::to_string(idx));
            seen[idx - 1] = true;
            target[idx - 1] = std::move(value);
        }
        for (int j = 0; j < spec.k; ++j)
            if (!seen[j])
                throw ParseError(std::string("spec: missing ") + what + " " + std::to_string(j + 1));
    };

    std::vector<Rational> zero(spec.n, Rational(0));
    if (!maps.empty()) {
        spec.maps_given = true;
        place(maps, spec.maps, "map");
        for (int j = 0; j < spec.k; ++j) {
            // paper normalization pi_j(0) = 0
            for (const auto& v : spec.maps[j].evaluate(zero))
                if (v != 0)
                    throw ParseError("spec: map " + std::to_string(j + 1) +
                                     " is not normalized: pi(0) != 0");
            PolyVectorField X = kernel_field(spec.maps[j]);
            bool nonzero = false;
            for (const auto& v : X.evaluate(zero))
                if (v != 0) nonzero = true;
            if (!nonzero)
                throw ParseError("spec: kernel field of map " + std::to_string(j + 1) +
                                 " vanishes at 0 (not a submersion there)");
            spec.fields.push_back(std::move(X));
        }
    } else {
        place(fields, spec.fields, "field");
        for (const auto& f : spec.fields)
            if (f.nvars() != spec.n) throw ParseError("spec: field dimension mismatch");
    }
    return spec;
}

ProblemSpec parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spec file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

Catalog make_catalog(const ProblemSpec& spec) {
    Catalog first(spec.fields, spec.cap, spec.cap);
    std::vector<Rational> zero(spec.n, Rational(0));
    HormanderResult h = hormander_check(first, zero);
    if (!h.spans) return first;
    int d = 0;
    for (const auto& w : h.witness) d += w.length();
    // per-letter cap ceil(d/eps), never above the total cap
    Rational cap_r = Rational(d) / spec.eps;
    Integer num = boost::multiprecision::numerator(cap_r);
    Integer den = boost::multiprecision::denominator(cap_r);
    Integer q = num / den;
    if (q * den != num) q += 1;
    int per_letter = static_cast<int>(std::min<Integer>(q, Integer(spec.cap)).convert_to<int>());
    per_letter = std::max(1, per_letter);
    if (per_letter == spec.cap) return first;
    return Catalog(spec.fields, spec.cap, per_letter);
}

}  // namespace mlr
