#pragma once

// Exact finite probability spaces, events and random variables.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ensemble/alphabet.hpp"
#include "ensemble/rational.hpp"

namespace ensemble {

/// Alphabet plus exact nonnegative weights summing to one.
class FiniteProbabilitySpace {
 public:
  /// Validating constructor; see make_space.
  FiniteProbabilitySpace(AlphabetPtr alphabet, std::vector<Rational> weights);

  const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return weights_.size(); }
  const Rational& weight(Symbol s) const { return weights_.at(s); }
  const Rational& weight(std::string_view name) const {
    return weights_.at(alphabet_->index(name));
  }
  const std::vector<Rational>& weights() const noexcept { return weights_; }

  bool operator==(const FiniteProbabilitySpace& other) const;

 private:
  AlphabetPtr alphabet_;
  std::vector<Rational> weights_;
};

/// Subset of an alphabet.
class Event {
 public:
  Event(AlphabetPtr alphabet, std::vector<Symbol> members);
  static Event of(AlphabetPtr alphabet, const std::vector<std::string>& names);
  static Event whole(AlphabetPtr alphabet);

  const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
  /// Sorted, duplicate-free.
  const std::vector<Symbol>& members() const noexcept { return members_; }
  bool contains(Symbol s) const { return mask_.at(s); }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t size() const noexcept { return members_.size(); }

  /// The members as an alphabet of their own (order preserved).
  AlphabetPtr as_alphabet() const;

 private:
  AlphabetPtr alphabet_;
  std::vector<Symbol> members_;
  std::vector<bool> mask_;
};

/// Total map between two alphabets.
class RandomVariable {
 public:
  RandomVariable(AlphabetPtr source, AlphabetPtr target, std::vector<Symbol> map);
  static RandomVariable from_names(AlphabetPtr source, AlphabetPtr target,
                                   const std::map<std::string, std::string>& map);

  static RandomVariable identity(AlphabetPtr alphabet);
  /// Indicator of an event, into the binary alphabet {0, 1}.
  static RandomVariable indicator(const Event& event);
  static RandomVariable constant(AlphabetPtr source, AlphabetPtr target, Symbol value);
  /// Replaces `from` by `to`; the target alphabet drops `from`.
  static RandomVariable contraction(AlphabetPtr source, Symbol from, Symbol to);
  /// Coordinate projection of a product alphabet.
  static RandomVariable projection(AlphabetPtr product, std::size_t coordinate);
  /// (X1 x ... x Xn)(a) = (X1(a), ..., Xn(a)).
  static RandomVariable tuple(std::span<const RandomVariable> parts);

  const AlphabetPtr& source() const noexcept { return source_; }
  const AlphabetPtr& target() const noexcept { return target_; }
  Symbol operator()(Symbol s) const { return map_.at(s); }
  const std::vector<Symbol>& map() const noexcept { return map_; }

 private:
  AlphabetPtr source_;
  AlphabetPtr target_;
  std::vector<Symbol> map_;
};

FiniteProbabilitySpace make_space(AlphabetPtr alphabet,
                                  const std::map<std::string, Rational>& weights);
FiniteProbabilitySpace uniform_space(AlphabetPtr alphabet);
FiniteProbabilitySpace point_mass(AlphabetPtr alphabet, Symbol at);

Rational event_prob(const FiniteProbabilitySpace& space, const Event& event);
/// P(s1) P(s2) ... P(sn); 1 for the empty string.
Rational string_prob(const FiniteProbabilitySpace& space, std::span<const Symbol> s);

/// P_B over the alphabet of B's members. Throws ZeroConditionEvent.
FiniteProbabilitySpace conditional_space(const FiniteProbabilitySpace& space,
                                         const Event& b);
/// Push-forward X(P).
FiniteProbabilitySpace induced_space(const RandomVariable& x,
                                     const FiniteProbabilitySpace& space);
FiniteProbabilitySpace product_space(std::span<const FiniteProbabilitySpace> spaces);

struct IndependenceVerdict {
  bool independent = true;
  /// 0-based indices of the first subcollection violating the product rule.
  std::vector<std::size_t> witness;
  Rational joint;
  Rational product;
};

inline constexpr std::size_t kMaxIndependentEvents = 20;

/// Checks P(A_i1 n ... n A_ik) = P(A_i1)...P(A_ik) for every subcollection
/// of size >= 2 (at most kMaxIndependentEvents events).
IndependenceVerdict events_independent(const FiniteProbabilitySpace& space,
                                       std::span<const Event> events);

struct RvIndependenceVerdict {
  bool independent = true;
  /// Value tuple (one symbol per variable) where joint != product of marginals.
  std::vector<Symbol> witness;
  Rational joint;
  Rational product;
};

RvIndependenceVerdict rvs_independent(const FiniteProbabilitySpace& space,
                                      std::span<const RandomVariable> rvs);

}  // namespace ensemble
