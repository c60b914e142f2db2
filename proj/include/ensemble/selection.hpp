#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ensemble/alphabet.hpp"

namespace ensemble {

/// Injection f: N+ -> N+ used by shuffle. Closed set of forms:
///   affine:  k -> a*k + b          (a >= 1, a + b >= 1)
///   table:   explicit f(1..n), undefined beyond n
///   blocks:  permutation p of {1..m} applied to each consecutive block
class Injection {
 public:
  static Injection identity();
  static Injection affine(std::int64_t a, std::int64_t b);
  /// Throws NotInjective when `values` repeats an index.
  static Injection table(std::vector<std::uint64_t> values);
  /// Throws NotInjective unless `perm` is a permutation of {1..m}.
  static Injection blocks(std::vector<std::uint64_t> perm);

  /// Named built-ins: "identity", "shift:<c>", "even" (2k), "odd" (2k-1),
  /// "affine:<a>,<b>", "table:<v1>,<v2>,...", "blocks:<p1>,...,<pm>".
  static Injection parse(std::string_view spec);

  /// f(k) for k >= 1. Throws InvalidArgument when k is outside a table.
  std::uint64_t operator()(std::uint64_t k) const;
  /// Largest k for which f is defined, if bounded.
  std::optional<std::uint64_t> domain_limit() const;
  /// True for the strictly increasing (affine) forms.
  bool monotone() const noexcept;
  const std::string& describe() const noexcept { return description_; }

 private:
  enum class Kind { Affine, Table, Blocks };
  Kind kind_ = Kind::Affine;
  std::int64_t a_ = 1;
  std::int64_t b_ = 0;
  std::vector<std::uint64_t> values_;
  std::string description_;
};

/// Partial decision prefix -> {YES, NO}. Decisions depend only on the
/// prefix handed in.
///
/// Rules are built-ins or small expressions over the prefix:
///   true | false | undef
///   len%M==R      prefix length congruent to R modulo M
///   last==S       prefix nonempty and ends with symbol S
///   suffix==W     prefix ends with word W (alphabet rendering)
///   len<N, len>=N
///   !e, e&&e, e||e, (e)
/// Evaluation is left to right with short-circuiting `&&`/`||`; reaching
/// `undef` makes the decision undefined. Built-in names: "always", "never", "even" (len%2==0),
/// "odd", "after:S" (last==S), "stall-at:N" (YES below length N, undefined
/// from N on).
class SelectionRule {
 public:
  static SelectionRule parse(std::string_view spec, const AlphabetPtr& alphabet);
  static SelectionRule always(const AlphabetPtr& alphabet);

  /// nullopt = undefined on this prefix.
  std::optional<bool> decide(std::span<const Symbol> prefix) const;
  const std::string& describe() const noexcept { return description_; }
  const AlphabetPtr& alphabet() const noexcept { return alphabet_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  AlphabetPtr alphabet_;
  std::string description_;
};

}  // namespace ensemble
