#pragma once

// Instantaneous (prefix-free) binary codes.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ensemble/space.hpp"
#include "ensemble/stream.hpp"

namespace ensemble {

/// Symbol -> binary codeword ("0"/"1" characters). Construction only checks
/// the shape of the table; validate_code decides whether it is instantaneous.
class InstantaneousCode {
 public:
  InstantaneousCode(AlphabetPtr source, std::vector<std::string> codewords);
  static InstantaneousCode from_map(AlphabetPtr source,
                                    const std::map<std::string, std::string>& codewords);

  const AlphabetPtr& source() const noexcept { return source_; }
  const std::string& codeword(Symbol s) const { return codewords_.at(s); }
  const std::vector<std::string>& codewords() const noexcept { return codewords_; }

 private:
  AlphabetPtr source_;
  std::vector<std::string> codewords_;
};

enum class CodeViolation { None, EmptyCodeword, DuplicateCodeword, PrefixViolation };

struct CodeAudit {
  bool ok = true;
  CodeViolation violation = CodeViolation::None;
  /// Offending symbols: for PrefixViolation, (shorter, longer).
  std::vector<Symbol> symbols;
  Rational kraft_sum;
};

CodeAudit validate_code(const InstantaneousCode& code);

struct Entropy {
  std::string decimal;            // 50 significant digits
  double bits = 0.0;
  std::optional<Rational> exact;  // set when every nonzero weight is dyadic
};

Entropy shannon_entropy(const FiniteProbabilitySpace& space);

Rational avg_length(const FiniteProbabilitySpace& space, const InstantaneousCode& code);

struct OptimalityMismatch {
  Symbol symbol;
  Rational weight;
  Rational dyadic;  // 2^-|C(a)|
  bool zero_weight = false;
};

struct OptimalityVerdict {
  bool optimal = true;
  std::vector<OptimalityMismatch> mismatches;
};

/// True iff P(a) = 2^-|C(a)| for every symbol. Zero-weight symbols never
/// satisfy this and are flagged separately.
OptimalityVerdict is_abs_optimal(const FiniteProbabilitySpace& space,
                                 const InstantaneousCode& code);

/// Canonical code with |C(a)| = k for P(a) = 2^-k (at least 1 bit), assigned
/// in order of increasing length then alphabet order. Throws NotDyadic.
InstantaneousCode build_dyadic_code(const FiniteProbabilitySpace& space);

/// Q(a) = 2^-|C(a)| plus a fresh symbol with the remaining mass 1 - Kraft sum.
FiniteProbabilitySpace code_q_space(const InstantaneousCode& code);

Word encode_word(const InstantaneousCode& code, std::span<const Symbol> symbols);

struct DecodeResult {
  Word symbols;
  Word remainder;  // trailing bits of an incomplete codeword
};

/// Throws UnparsableBits (with the offset of the offending codeword start).
DecodeResult decode_word(const InstantaneousCode& code, std::span<const Symbol> bits);

StreamPtr encode_stream(const InstantaneousCode& code, StreamPtr s);
StreamPtr decode_stream(const InstantaneousCode& code, StreamPtr bits);

}  // namespace ensemble
