#pragma once

// Explicit Martin-Löf tests: finite level sets with exact cylinder measures,
// and the test transformations that carry a test for a derived sequence back
// to a test for its source.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ensemble/alphabet.hpp"
#include "ensemble/rational.hpp"
#include "ensemble/selection.hpp"
#include "ensemble/space.hpp"

namespace ensemble {

/// Antichain under the prefix order, sorted lexicographically.
struct PrefixFreeSet {
  AlphabetPtr alphabet;
  std::vector<Word> strings;
};

/// Keeps each string none of whose proper prefixes is in the set; the open
/// set [[S]] is unchanged.
PrefixFreeSet prefix_free_reduce(const AlphabetPtr& alphabet, std::span<const Word> strings);
bool is_prefix_free(std::span<const Word> strings);

/// Exact Bernoulli measure of the open set generated by `strings`.
Rational open_measure(const FiniteProbabilitySpace& space, std::span<const Word> strings);

/// One level C_n of a test. `certificate` is set once certify_level has
/// established measure < 2^-index.
struct TestLevel {
  AlphabetPtr alphabet;
  unsigned index = 1;
  std::vector<Word> strings;
  std::optional<Rational> certificate;
};

struct CertifyResult {
  bool certified = false;
  Rational measure;
  Rational bound;  // 2^-index
  TestLevel level;  // copy with certificate filled when certified
};

/// Certifies iff measure < 2^-index (strict); a violation is a value.
CertifyResult certify_level(const FiniteProbabilitySpace& space, const TestLevel& level);

/// True iff some level string is a prefix of `prefix`. A false answer is
/// provisional: a longer prefix may be covered.
bool member(const TestLevel& level, std::span<const Symbol> prefix);

/// Level-indexed test. Explicit families hold materialized levels; other
/// families are given by a membership predicate plus a depth-bounded
/// materializer and an exact per-level measure.
struct MLTestFamily {
  FiniteProbabilitySpace space;
  std::string name;
  std::function<bool(unsigned, std::span<const Symbol>)> member;
  /// Level strings of length <= depth.
  std::function<std::vector<Word>(unsigned, std::size_t)> materialize;
  /// Exact measure of the full (untruncated) level, when known in closed form.
  std::function<std::optional<Rational>(unsigned)> exact_measure;

  static MLTestFamily from_levels(FiniteProbabilitySpace space, std::vector<TestLevel> levels);
};

/// Level n accepts exactly the prefixes containing a zero-weight symbol; every
/// level has measure 0.
MLTestFamily zero_prob_test(const FiniteProbabilitySpace& space);

/// The explicit test behind the law of large numbers for a binary space Q.
class LlnTest {
 public:
  /// Requires 0 < Q(1) < 1 (DegenerateQ) and 0 < eps <= Q(0)Q(1)
  /// (EpsilonOutOfRange).
  LlnTest(const FiniteProbabilitySpace& q, const Rational& eps);

  const Rational& r_left() const noexcept { return r_left_; }
  const Rational& r_right() const noexcept { return r_right_; }
  const Rational& c() const noexcept { return c_; }
  const Rational& q1() const noexcept { return q1_; }

  /// Least m >= 1 with 2 e^{-cm} / (1 - e^{-c}) < 2^-n, decided in 50-digit
  /// arithmetic.
  std::uint64_t growth(unsigned n) const;
  /// prefix in [[T_f(n)]]: some m in [f(n), |prefix|] has N_1(prefix|m)/m
  /// outside [r_L, r_R].
  bool member(unsigned n, std::span<const Symbol> prefix) const;
  /// Upper bound 2 e^{-c f(n)} / (1 - e^{-c}) on the level measure.
  double tail_bound(unsigned n) const;

 private:
  AlphabetPtr alphabet_;
  Symbol one_ = 1;
  Rational q1_;
  Rational r_left_;
  Rational r_right_;
  Rational c_;
};

LlnTest lln_test(const FiniteProbabilitySpace& q, const Rational& eps);

struct TransformedLevel {
  TestLevel level;
  Rational measure;
};

/// Preimage expansion f(s) = { t : x(t_i) = s_i } of every level string.
/// `level` lives over x.target, `space` over x.source; the returned measure is
/// taken under `space`.
TransformedLevel transform_map(const RandomVariable& x, const TestLevel& level,
                               const FiniteProbabilitySpace& space);
/// Strings of one preimage expansion.
std::vector<Word> preimage_expansion(const RandomVariable& x, std::span<const Symbol> s);

/// F(s) = { t : |t| = max f({1..|s|}), t(f(k)) = s(k) }.
TransformedLevel transform_shuffle(const Injection& f, const TestLevel& level,
                                   const FiniteProbabilitySpace& space);
std::vector<Word> shuffle_expansion(const Injection& f, std::span<const Symbol> s,
                                    std::size_t alphabet_size);

struct SelectExpansion {
  Word source;
  std::vector<Word> strings;  // F(s) restricted to length <= depth
  Rational measure;           // lambda_P([[F(s) n <=depth]])
  Rational source_measure;    // lambda_P([[s]])
  bool bounded() const { return measure <= source_measure; }
};

/// Strings t of length <= depth from which `s` is selected by `rule`:
/// the positions k with rule(t|k-1) = YES are exactly |s| many, the last one
/// is |t|, and t carries s at those positions. Throws Stalled when the rule is
/// undefined on a prefix that has to be examined.
SelectExpansion select_expansion(const SelectionRule& rule, std::span<const Symbol> s,
                                 const FiniteProbabilitySpace& space, std::size_t depth);

struct TransformedSelectLevel {
  TestLevel level;
  Rational measure;
  std::vector<SelectExpansion> per_string;
};

TransformedSelectLevel transform_select(const SelectionRule& rule, const TestLevel& level,
                                        const FiniteProbabilitySpace& space, std::size_t depth);

/// Space Q over B plus one merged symbol carrying 1 - P(B). When B is the whole
/// alphabet, Q = P and no merged symbol is added.
struct MergedSpace {
  FiniteProbabilitySpace q;
  std::optional<Symbol> merged;       // index of the merged symbol in q
  std::vector<Symbol> from_b;         // b-alphabet index -> q index
};
MergedSpace merged_space(const FiniteProbabilitySpace& space, const Event& b);

struct ConditionExpansion {
  Word source;             // over b's alphabet
  std::string pattern;     // e.g. "a*x a*y"
  Rational closed_form;    // lambda_Q(s) / (1 - Q(a))^L
  std::vector<Word> truncated;  // over q's alphabet, sum of gap lengths <= depth
  Rational truncated_measure;
};

struct TransformedConditionLevel {
  MergedSpace merged;
  std::vector<ConditionExpansion> per_string;
  Rational closed_form_measure;   // lambda_{P_B}([[level]])
  Rational truncated_measure;     // lambda_Q of the union of truncated sets
};

/// `level` lives over b's member alphabet. Throws ZeroConditionEvent when
/// P(B) = 0.
TransformedConditionLevel transform_condition(const Event& b, const TestLevel& level,
                                              const FiniteProbabilitySpace& space,
                                              std::size_t depth);

}  // namespace ensemble
