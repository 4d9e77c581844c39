#ifndef MLR_WORDS_HPP
#define MLR_WORDS_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mlr/vector_field.hpp"

namespace mlr {

// Bracket word over the alphabet {1,..,k}; encodes the right-nested
// iterated bracket X_{(w,j)} = [X_w, X_j].
struct Word {
    std::vector<int> letters;

    Word() = default;
    explicit Word(std::vector<int> ls) : letters(std::move(ls)) {}

    int length() const { return static_cast<int>(letters.size()); }
    Word appended(int j) const;
    std::string to_string() const;  // "(1,2,2)"

    bool operator==(const Word& o) const { return letters == o.letters; }
    // graded-lex: shorter words first, then lexicographic on letters
    bool operator<(const Word& o) const;
};

// Letter-multiplicity vector of length k.
using Degree = std::vector<int>;

Degree word_degree(const Word& w, int k);
Degree degree_sum(const Degree& a, const Degree& b);
int degree_total(const Degree& d);
std::string degree_to_string(const Degree& d);

// Binary bracket expression over the generators; input to expand_bracket.
struct BracketTree {
    int leaf = 0;  // generator index 1..k when a leaf
    std::shared_ptr<const BracketTree> left, right;

    bool is_leaf() const { return !left; }
    static BracketTree make_leaf(int j);
    static BracketTree make_pair(BracketTree a, BracketTree b);
};

// Integer combination of words; no zero coefficients, words distinct.
struct WordCombination {
    std::vector<std::pair<std::int64_t, Word>> terms;  // sorted by word
};

// Rewrites an arbitrary bracket tree as a combination of right-nested words
// using [A,[B1,B2]] = [[A,B1],B2] - [[A,B2],B1].
WordCombination expand_bracket(const BracketTree& t);

// Generator fields plus the memoized word-field recursion, truncated by a
// total word-length cap and a per-letter multiplicity cap.
class Catalog {
  public:
    Catalog(std::vector<PolyVectorField> generators, int total_cap, int per_letter_cap,
            std::size_t tuple_limit = 200000);

    int k() const { return static_cast<int>(generators_.size()); }
    int nvars() const { return generators_.empty() ? 0 : generators_[0].nvars(); }
    int total_cap() const { return total_cap_; }
    int per_letter_cap() const { return per_letter_cap_; }
    std::size_t tuple_limit() const { return tuple_limit_; }
    const std::vector<PolyVectorField>& generators() const { return generators_; }

    bool within_caps(const Word& w) const;

    // X_w per the recursion; memoized.  Throws PreconditionError past the caps.
    const PolyVectorField& word_field(const Word& w) const;

    // All words within caps whose field is not identically zero, graded-lex.
    // Identically-zero word fields cannot contribute to any lambda_I and are
    // pruned here.
    const std::vector<Word>& nonzero_words() const;

  private:
    std::vector<PolyVectorField> generators_;
    int total_cap_;
    int per_letter_cap_;
    std::size_t tuple_limit_;
    mutable std::map<Word, PolyVectorField> cache_;
    mutable std::vector<Word> nonzero_words_;
    mutable bool words_built_ = false;
};

// An n-tuple of words with its degree and exact determinant polynomial.
struct WordTuple {
    std::vector<Word> words;  // sorted; permutations are deduplicated
    Degree degree;
    Polynomial lambda;
    Rational lambda_at_point;  // lambda evaluated at the enumeration point

    bool nonzero_at_point() const { return lambda_at_point != 0; }
    std::string to_string() const;
};

// All sorted n-tuples over nonzero_words(), in graded-lex order on the
// concatenated words.  Throws PreconditionError with a count estimate when
// the tuple count would exceed the catalog's limit.
std::vector<WordTuple> enumerate_tuples(const Catalog& c, const std::vector<Rational>& point);

struct HormanderResult {
    bool spans = false;
    int rank = 0;
    std::vector<Word> witness;  // n independent words when spans
};

// Exact rank of {X_w(point)} over the rationals; witness words picked
// greedily in graded-lex order.
HormanderResult hormander_check(const Catalog& c, const std::vector<Rational>& point);

// Lambda_{K delta}(x0): entry I is (K delta)^{deg I} * lambda_I(x0); the norm
// is the sup-norm over entries and argmax is the graded-lex-smallest
// maximizer (I_{x0}).
struct LambdaVector {
    std::vector<double> delta;
    double K = 1.0;
    std::vector<double> values;  // aligned with the tuple list
    double norm = 0.0;
    std::size_t argmax = 0;
};

LambdaVector lambda_vector(const std::vector<WordTuple>& tuples, const std::vector<double>& delta,
                           double K);

// (K delta)^{deg} as a double.
double scale_power(const std::vector<double>& delta, double K, const Degree& deg);

}  // namespace mlr

#endif
