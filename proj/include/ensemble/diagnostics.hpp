#pragma once

// Statistical and proxy checks on finite prefixes. Floating point is used
// here on purpose; every verdict records its threshold and formula.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ensemble/space.hpp"
#include "ensemble/stream.hpp"

namespace ensemble {

struct FrequencyTable {
  AlphabetPtr alphabet;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  double frequency(Symbol s) const {
    return total == 0 ? 0.0 : static_cast<double>(counts.at(s)) / static_cast<double>(total);
  }
};

FrequencyTable freq_table(const FinitePrefix& prefix);
FrequencyTable freq_table(const AlphabetPtr& alphabet, std::span<const Symbol> symbols);

struct Verdict {
  std::string check;
  double statistic = 0.0;
  double threshold = 0.0;
  bool passed = true;
  std::string formula;
  std::string note;
};

struct DiagnosticReport {
  std::string title;
  std::string provenance;
  std::vector<Verdict> verdicts;

  bool passed() const;
  std::string render_table() const;
  /// One `key=value` line per field, verdicts numbered from 0.
  std::string render_kv() const;
};

/// Per-symbol |N_a/n - P(a)| against eps, with zero-weight and point-mass
/// screening as hard failures. Throws EmptyPrefix.
DiagnosticReport lln_report(const FiniteProbabilitySpace& space, const FinitePrefix& prefix,
                            double eps);

/// 2 exp(-eps^2 n / (2 Q(0) Q(1))), evaluated in 50-digit arithmetic and
/// rounded up to the next double. Requires 0 < eps <= Q(0)Q(1) and n >= 1.
double chernoff_bound(const FiniteProbabilitySpace& q, const Rational& eps, std::uint64_t n);

/// Deviation eps at which the two-sided Chernoff bound for the worst case
/// Q(0)Q(1) = 1/4 reaches `confidence` after n samples.
double default_epsilon(std::uint64_t n, double confidence = 1e-6);

/// Pinned compressor used by the incompressibility proxy.
struct CompressorConfig {
  static constexpr int kLevel = 9;
  static constexpr int kWindowBits = 15;
  static constexpr int kMemLevel = 8;
  static constexpr std::size_t kMinBits = 1024;
};

/// Bits are packed MSB-first into bytes (zero-padded last byte) and deflated
/// with zlib at CompressorConfig; returns compressed bytes / packed bytes.
/// Throws Inconclusive below CompressorConfig::kMinBits bits.
double incompressibility_proxy(const FinitePrefix& bits);
std::vector<std::uint8_t> pack_bits(const FinitePrefix& bits);

/// max over value tuples of |joint frequency - product of marginal frequencies|.
double independence_distance(std::span<const FinitePrefix> prefixes);
DiagnosticReport empirical_independence(std::span<const FinitePrefix> prefixes, double eps);

/// max over symbols of |freq_a(a) - freq_b(a)|.
double equivalence_distance(const FinitePrefix& a, const FinitePrefix& b);
DiagnosticReport equivalence_check(const FinitePrefix& a, const FinitePrefix& b, double eps);

}  // namespace ensemble
