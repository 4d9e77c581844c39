#include "mlr/words.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "mlr/errors.hpp"

namespace mlr {

Word Word::appended(int j) const {
    Word w = *this;
    w.letters.push_back(j);
    return w;
}

std::string Word::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (i) os << ',';
        os << letters[i];
    }
    os << ')';
    return os.str();
}

bool Word::operator<(const Word& o) const {
    if (letters.size() != o.letters.size()) return letters.size() < o.letters.size();
    return letters < o.letters;
}

Degree word_degree(const Word& w, int k) {
    Degree d(k, 0);
    for (int l : w.letters) {
        if (l < 1 || l > k) throw PreconditionError("word letter out of range");
        ++d[l - 1];
    }
    return d;
}

Degree degree_sum(const Degree& a, const Degree& b) {
    Degree d = a;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += b[i];
    return d;
}

int degree_total(const Degree& d) {
    int t = 0;
    for (int v : d) t += v;
    return t;
}

std::string degree_to_string(const Degree& d) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i) os << ',';
        os << d[i];
    }
    os << ')';
    return os.str();
}

BracketTree BracketTree::make_leaf(int j) {
    BracketTree t;
    t.leaf = j;
    return t;
}

BracketTree BracketTree::make_pair(BracketTree a, BracketTree b) {
    BracketTree t;
    t.left = std::make_shared<BracketTree>(std::move(a));
    t.right = std::make_shared<BracketTree>(std::move(b));
    return t;
}

namespace {

using CoeffMap = std::map<Word, std::int64_t>;

void accumulate(CoeffMap& into, const Word& w, std::int64_t c) {
    auto [it, inserted] = into.emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) into.erase(it);
    }
}

// [X_u, X_v] as a word combination, recursing on the length of v:
//   [X_u, X_{(v',j)}] = [[X_u, X_{v'}], X_j] - [[X_u, X_j], X_{v'}].
void word_bracket(const Word& u, const Word& v, std::int64_t coef, CoeffMap& out) {
    if (v.letters.size() == 1) {
        accumulate(out, u.appended(v.letters[0]), coef);
        return;
    }
    Word v_init(std::vector<int>(v.letters.begin(), v.letters.end() - 1));
    int j = v.letters.back();
    CoeffMap inner;
    word_bracket(u, v_init, 1, inner);
    for (const auto& [w, c] : inner) accumulate(out, w.appended(j), coef * c);
    word_bracket(u.appended(j), v_init, -coef, out);
}

void expand_rec(const BracketTree& t, CoeffMap& out) {
    if (t.is_leaf()) {
        if (t.leaf < 1) throw PreconditionError("bracket tree leaf out of range");
        accumulate(out, Word({t.leaf}), 1);
        return;
    }
    CoeffMap left, right;
    expand_rec(*t.left, left);
    expand_rec(*t.right, right);
    for (const auto& [u, cu] : left)
        for (const auto& [v, cv] : right) word_bracket(u, v, cu * cv, out);
}

}  // namespace

WordCombination expand_bracket(const BracketTree& t) {
    CoeffMap out;
    expand_rec(t, out);
    WordCombination comb;
    comb.terms.reserve(out.size());
    for (const auto& [w, c] : out) comb.terms.emplace_back(c, w);
    return comb;
}

Catalog::Catalog(std::vector<PolyVectorField> generators, int total_cap, int per_letter_cap,
                 std::size_t tuple_limit)
    : generators_(std::move(generators)),
      total_cap_(total_cap),
      per_letter_cap_(per_letter_cap),
      tuple_limit_(tuple_limit) {
    if (generators_.empty()) throw PreconditionError("catalog needs at least one field");
    if (total_cap_ < 1 || per_letter_cap_ < 1) throw PreconditionError("catalog caps must be >= 1");
    int n = generators_[0].nvars();
    for (const auto& g : generators_)
        if (g.nvars() != n) throw PreconditionError("catalog fields disagree on dimension");
}

bool Catalog::within_caps(const Word& w) const {
    if (w.length() < 1 || w.length() > total_cap_) return false;
    Degree d(k(), 0);
    for (int l : w.letters) {
        if (l < 1 || l > k()) return false;
        if (++d[l - 1] > per_letter_cap_) return false;
    }
    return true;
}

const PolyVectorField& Catalog::word_field(const Word& w) const {
    if (!within_caps(w))
        throw PreconditionError("word " + w.to_string() + " exceeds catalog caps");
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;
    PolyVectorField f;
    if (w.length() == 1) {
        f = generators_[w.letters[0] - 1];
    } else {
        Word prefix(std::vector<int>(w.letters.begin(), w.letters.end() - 1));
        int j = w.letters.back();
        f = lie_bracket(word_field(prefix), generators_[j - 1]);
    }
    return cache_.emplace(w, std::move(f)).first->second;
}

const std::vector<Word>& Catalog::nonzero_words() const {
    if (words_built_) return nonzero_words_;
    // Breadth-first over word length; once X_w == 0 every extension is zero,
    // but extensions of nonzero words must still be visited.
    std::vector<Word> frontier;
    for (int j = 1; j <= k(); ++j) {
        Word w({j});
        if (!word_field(w).is_zero()) {
            nonzero_words_.push_back(w);
            frontier.push_back(w);
        }
    }
    for (int len = 2; len <= total_cap_; ++len) {
        std::vector<Word> next;
        for (const auto& w : frontier) {
            for (int j = 1; j <= k(); ++j) {
                Word ext = w.appended(j);
                if (!within_caps(ext)) continue;
                if (!word_field(ext).is_zero()) {
                    nonzero_words_.push_back(ext);
                    next.push_back(ext);
                }
            }
        }
        frontier = std::move(next);
    }
    std::sort(nonzero_words_.begin(), nonzero_words_.end());
    words_built_ = true;
    return nonzero_words_;
}

std::string WordTuple::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) os << ' ';
        os << words[i].to_string();
    }
    os << ']';
    return os.str();
}

namespace {

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t r, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < r; ++i) {
        v = v * (n - i) / (i + 1);
        if (v > cap) return cap + 1;
    }
    return v;
}

struct TupleOrder {
    bool operator()(const WordTuple& a, const WordTuple& b) const {
        int ta = degree_total(a.degree), tb = degree_total(b.degree);
        if (ta != tb) return ta < tb;
        std::vector<int> ca, cb;
        for (const auto& w : a.words) ca.insert(ca.end(), w.letters.begin(), w.letters.end());
        for (const auto& w : b.words) cb.insert(cb.end(), w.letters.begin(), w.letters.end());
        return ca < cb;
    }
};

}  // namespace

std::vector<WordTuple> enumerate_tuples(const Catalog& c, const std::vector<Rational>& point) {
    int n = c.nvars();
    if (static_cast<int>(point.size()) != n)
        throw PreconditionError("enumerate_tuples: point dimension mismatch");
    const auto& words = c.nonzero_words();
    std::uint64_t count =
        binomial_capped(words.size() + n - 1, n, c.tuple_limit());
    if (count > c.tuple_limit())
        throw PreconditionError("tuple enumeration would exceed limit (" +
                                std::to_string(c.tuple_limit()) + "); estimated count >= " +
                                std::to_string(count) + ". Lower the cap or raise the limit.");

    std::vector<WordTuple> tuples;
    std::vector<std::size_t> idx(n, 0);
    // nondecreasing index tuples = sorted word tuples (permutation dedup)
    std::vector<std::size_t> stack;
    std::function<void(std::size_t, int)> rec = [&](std::size_t lo, int depth) {
        if (depth == n) {
            WordTuple t;
            t.words.reserve(n);
            Degree deg(c.k(), 0);
            bool repeated = false;
            for (int i = 0; i < n; ++i) {
                const Word& w = words[stack[i]];
                t.words.push_back(w);
                deg = degree_sum(deg, word_degree(w, c.k()));
                if (i > 0 && stack[i] == stack[i - 1]) repeated = true;
            }
            t.degree = std::move(deg);
            if (repeated) {
                t.lambda = Polynomial(n);  // repeated column: identically zero
                t.lambda_at_point = 0;
            } else {
                std::vector<PolyVectorField> fs;
                fs.reserve(n);
                for (int i = 0; i < n; ++i) fs.push_back(c.word_field(t.words[i]));
                t.lambda = determinant(fs);
                t.lambda_at_point = t.lambda.evaluate(point);
            }
            tuples.push_back(std::move(t));
            return;
        }
        for (std::size_t i = lo; i < words.size(); ++i) {
            stack.push_back(i);
            rec(i, depth + 1);
            stack.pop_back();
        }
    };
    rec(0, 0);
    std::sort(tuples.begin(), tuples.end(), TupleOrder{});
    return tuples;
}

HormanderResult hormander_check(const Catalog& c, const std::vector<Rational>& point) {
    int n = c.nvars();
    HormanderResult res;
    // incremental exact Gaussian elimination; rows are the reduced basis
    std::vector<std::vector<Rational>> basis;
    for (const auto& w : c.nonzero_words()) {
        std::vector<Rational> v = c.word_field(w).evaluate(point);
        // reduce against current basis
        for (const auto& row : basis) {
            int p = -1;
            for (int i = 0; i < n; ++i)
                if (row[i] != 0) {
                    p = i;
                    break;
                }
            if (p >= 0 && v[p] != 0) {
                Rational f = v[p] / row[p];
                for (int i = 0; i < n; ++i) v[i] -= f * row[i];
            }
        }
        bool nonzero = false;
        for (const auto& x : v)
            if (x != 0) {
                nonzero = true;
                break;
            }
        if (nonzero) {
            basis.push_back(v);
            res.witness.push_back(w);
            // keep basis rows sorted by pivot for a clean reduction
            std::sort(basis.begin(), basis.end(), [n](const auto& a, const auto& b) {
                auto pivot = [n](const std::vector<Rational>& r) {
                    for (int i = 0; i < n; ++i)
                        if (r[i] != 0) return i;
                    return n;
                };
                return pivot(a) < pivot(b);
            });
            if (static_cast<int>(basis.size()) == n) break;
        }
    }
    res.rank = static_cast<int>(basis.size());
    res.spans = res.rank == n;
    if (!res.spans) res.witness.clear();
    return res;
}

double scale_power(const std::vector<double>& delta, double K, const Degree& deg) {
    double v = 1.0;
    for (std::size_t j = 0; j < delta.size(); ++j)
        for (int p = 0; p < deg[j]; ++p) v *= K * delta[j];
    return v;
}

LambdaVector lambda_vector(const std::vector<WordTuple>& tuples, const std::vector<double>& delta,
                           double K) {
    if (tuples.empty()) throw PreconditionError("lambda_vector: empty catalog");
    for (double d : delta)
        if (!(d > 0)) throw PreconditionError("lambda_vector: delta must be positive");
    if (K < 1) throw PreconditionError("lambda_vector: K must be >= 1");
    LambdaVector lv;
    lv.delta = delta;
    lv.K = K;
    lv.values.reserve(tuples.size());
    for (const auto& t : tuples)
        lv.values.push_back(scale_power(delta, K, t.degree) * to_double(t.lambda_at_point));
    lv.norm = 0.0;
    lv.argmax = 0;
    for (std::size_t i = 0; i < lv.values.size(); ++i) {
        double a = std::abs(lv.values[i]);
        if (a > lv.norm) {
            lv.norm = a;
            lv.argmax = i;  // first (graded-lex smallest) maximizer wins ties
        }
    }
    return lv;
}

}  // namespace mlr
