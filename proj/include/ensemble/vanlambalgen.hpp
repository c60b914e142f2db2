#pragma once

// Finite objects from the two halves of the van Lambalgen splitting argument:
// sections F(W, x), the sets S_d and H_d(n), and the oracle merge G_n(k).
// Pair strings live over the product alphabet Omega1 x Omega2.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ensemble/mltest.hpp"

namespace ensemble {

/// Splits a pair string into its two coordinate strings.
std::pair<Word, Word> unzip(const Alphabet& pair_alphabet, std::span<const Symbol> w);
Word zip(const Alphabet& pair_alphabet, std::span<const Symbol> a, std::span<const Symbol> b);

/// F(W, x): all s1 such that some s2 with |s1| = |s2|, s2 a prefix of x, has
/// s1 x s2 in W.
std::vector<Word> vl_project(const Alphabet& pair_alphabet, std::span<const Word> w,
                             std::span<const Symbol> x);

/// lambda_{P1 x P2}([[W]] n [emptyset x x]) for a prefix-free W, computed
/// cylinder by cylinder: each w contributes P1(w1) P2(longer of w2, x) when
/// w2 and x are comparable.
Rational section_measure(const FiniteProbabilitySpace& p1, const FiniteProbabilitySpace& p2,
                         std::span<const Word> w, std::span<const Symbol> x);

struct SectionReport {
  bool in_s_d = false;
  Rational f_measure;                 // P1(F(V_d n <=|x|, x))
  Rational threshold;                 // 2^-d
  std::vector<Word> h;                // H_d(|x|), words of length |x|
  Rational h_measure;                 // lambda_{P1}([[H_d(|x|)]])
  bool h_bound_holds = true;             // h_measure <= 2^-d, required when !in_s_d
};

/// `v_d` is the prefix-free level V_d over P1 x P2 (its index is d).
/// Throws NotPrefixFreeLevel.
SectionReport vl_sections(const TestLevel& v_d, const FiniteProbabilitySpace& p1,
                          const FiniteProbabilitySpace& p2, std::span<const Symbol> x);

/// U^sigma_n as a function of a finite oracle prefix sigma over Omega2.
/// Producers must be monotone: extending sigma only adds strings.
struct OracleIndexedLevel {
  AlphabetPtr omega1;
  AlphabetPtr omega2;
  std::function<std::vector<Word>(std::span<const Symbol> oracle, unsigned n)> produce;
};

/// Checks monotonicity for every oracle prefix up to `max_length`; returns a
/// violating oracle prefix if any.
std::optional<Word> check_oracle_monotone(const OracleIndexedLevel& u, unsigned n,
                                          std::size_t max_length);

struct OracleMergeReport {
  std::vector<Word> g;          // G_n(k), pair strings of length k
  Rational measure;             // lambda_{P1 x P2}([[G_n(k)]])
  Rational bound;               // 2^-n
  bool bound_holds = false;     // measure < 2^-n
  std::optional<Word> uncertified_section;  // sigma with lambda(U^sigma_n) >= 2^-n
  Rational uncertified_measure;
};

/// G_n(k) = { u x sigma : u in Omega1^k, sigma in Omega2^k, some prefix of u
/// in U^sigma_n }. With `require_certified`, a section violating the
/// per-sigma bound throws UncertifiedOracleLevel; otherwise it is reported.
OracleMergeReport vl_oracle_merge(const OracleIndexedLevel& u, const FiniteProbabilitySpace& p1,
                                  const FiniteProbabilitySpace& p2, unsigned n, std::size_t k,
                                  bool require_certified = true);

}  // namespace ensemble
