#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "ensemble/alphabet.hpp"
#include "ensemble/rational.hpp"
#include "ensemble/space.hpp"

namespace testing {

using ensemble::AlphabetPtr;
using ensemble::FiniteProbabilitySpace;
using ensemble::Rational;
using ensemble::Word;

inline Rational Q(const char* text) { return ensemble::parse_rational(text); }

inline AlphabetPtr xyz() { return ensemble::Alphabet::make({"x", "y", "z"}); }

inline FiniteProbabilitySpace p3() {
  return ensemble::make_space(xyz(), {{"x", Q("1/2")}, {"y", Q("1/3")}, {"z", Q("1/6")}});
}

inline FiniteProbabilitySpace u2() { return ensemble::uniform_space(ensemble::binary_alphabet()); }

inline FiniteProbabilitySpace bernoulli(const Rational& p1) {
  return FiniteProbabilitySpace(ensemble::binary_alphabet(), {1 - p1, p1});
}

inline Word w(const AlphabetPtr& a, const char* text) { return a->parse_word(text); }

inline std::vector<Word> words(const AlphabetPtr& a, std::initializer_list<const char*> texts) {
  std::vector<Word> out;
  for (const char* t : texts) out.push_back(a->parse_word(t));
  return out;
}

/// Every word of length exactly n over k symbols, in lexicographic order.
inline std::vector<Word> all_words(std::size_t k, std::size_t n) {
  std::vector<Word> out;
  Word cur(n, 0);
  for (;;) {
    out.push_back(cur);
    std::size_t i = n;
    while (i > 0) {
      if (++cur[i - 1] < k) break;
      cur[i - 1] = 0;
      --i;
    }
    if (i == 0) return out;
  }
}

inline std::vector<Word> all_words_upto(std::size_t k, std::size_t n) {
  std::vector<Word> out;
  for (std::size_t len = 0; len <= n; ++len) {
    auto layer = all_words(k, len);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

inline bool is_prefix(const Word& u, const Word& v) {
  return u.size() <= v.size() && std::equal(u.begin(), u.end(), v.begin());
}

/// Measure of the open set generated by `set`, computed by summing the
/// weights of depth-L cylinders covered by some member (L = max length).
inline Rational cylinder_oracle(const FiniteProbabilitySpace& p, const std::vector<Word>& set) {
  std::size_t depth = 0;
  for (const auto& s : set) depth = std::max(depth, s.size());
  Rational total = 0;
  for (const auto& c : all_words(p.size(), depth)) {
    bool covered = false;
    for (const auto& s : set) covered = covered || is_prefix(s, c);
    if (!covered) continue;
    Rational prob = 1;
    for (auto sym : c) prob *= p.weight(sym);
    total += prob;
  }
  return total;
}

}  // namespace testing

namespace testing {

/// Reference sampler written from the published SplitMix64 description;
/// the symbol is the first i with u / 2^64 < w_0 + ... + w_i, decided with
/// exact rationals.
class ReferenceSampler {
 public:
  ReferenceSampler(const FiniteProbabilitySpace& space, std::uint64_t seed) : state_(seed) {
    Rational c = 0;
    for (const auto& w : space.weights()) {
      c += w;
      cumulative_.push_back(c);
    }
  }
  ensemble::Symbol next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    mpz_class num;
    mpz_import(num.get_mpz_t(), 1, 1, sizeof(z), 0, 0, &z);
    mpz_class den = 1;
    den <<= 64;
    const Rational u(num, den);
    for (ensemble::Symbol i = 0; i < cumulative_.size(); ++i) {
      if (u < cumulative_[i]) return i;
    }
    return static_cast<ensemble::Symbol>(cumulative_.size() - 1);
  }

 private:
  std::uint64_t state_;
  std::vector<Rational> cumulative_;
};

}  // namespace testing
