#include "ensemble/space.hpp"

#include <algorithm>

#include "ensemble/error.hpp"

namespace ensemble {

FiniteProbabilitySpace::FiniteProbabilitySpace(AlphabetPtr alphabet, std::vector<Rational> weights)
    : alphabet_(std::move(alphabet)), weights_(std::move(weights)) {
  if (!alphabet_) throw Error(ErrorKind::InvalidAlphabet, "null alphabet");
  if (weights_.size() != alphabet_->size()) {
    throw Error(ErrorKind::MissingWeight, "weight count does not match alphabet size");
  }
  Rational total(0);
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    weights_[i].canonicalize();
    if (weights_[i] < 0) {
      throw Error(ErrorKind::NegativeWeight,
                  "weight of '" + alphabet_->name(static_cast<Symbol>(i)) + "' is " +
                      to_string(weights_[i]));
    }
    total += weights_[i];
  }
  if (total != 1) {
    const Rational deficit = abs(Rational(1 - total));
    throw Error(ErrorKind::SumNotOne, "weights sum to " + to_string(total) + " (deficit " + to_string(deficit) +
                                          (total > 1 ? ", over" : ", under") + ")");
  }
}

bool FiniteProbabilitySpace::operator==(const FiniteProbabilitySpace& other) const {
  return *alphabet_ == *other.alphabet_ && weights_ == other.weights_;
}

Event::Event(AlphabetPtr alphabet, std::vector<Symbol> members)
    : alphabet_(std::move(alphabet)), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  mask_.assign(alphabet_->size(), false);
  for (Symbol s : members_) {
    if (s >= alphabet_->size()) throw Error(ErrorKind::UnknownSymbol, "event member out of range");
    mask_[s] = true;
  }
}

Event Event::of(AlphabetPtr alphabet, const std::vector<std::string>& names) {
  std::vector<Symbol> members;
  for (const auto& n : names) members.push_back(alphabet->index(n));
  return Event(std::move(alphabet), std::move(members));
}

Event Event::whole(AlphabetPtr alphabet) {
  std::vector<Symbol> members(alphabet->size());
  for (Symbol i = 0; i < members.size(); ++i) members[i] = i;
  return Event(std::move(alphabet), std::move(members));
}

AlphabetPtr Event::as_alphabet() const {
  if (members_.empty()) throw Error(ErrorKind::InvalidAlphabet, "empty event has no alphabet");
  if (members_.size() == alphabet_->size()) return alphabet_;
  std::vector<std::string> names;
  for (Symbol s : members_) names.push_back(alphabet_->name(s));
  return Alphabet::derived(std::move(names));
}

RandomVariable::RandomVariable(AlphabetPtr source, AlphabetPtr target, std::vector<Symbol> map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
  if (map_.size() != source_->size()) {
    throw Error(ErrorKind::InvalidArgument, "random variable must be total on its source");
  }
  for (Symbol t : map_) {
    if (t >= target_->size()) throw Error(ErrorKind::UnknownSymbol, "image outside target alphabet");
  }
}

RandomVariable RandomVariable::from_names(AlphabetPtr source, AlphabetPtr target,
                                          const std::map<std::string, std::string>& map) {
  std::vector<Symbol> m(source->size());
  std::vector<bool> seen(source->size(), false);
  for (const auto& [from, to] : map) {
    Symbol s = source->index(from);
    m[s] = target->index(to);
    seen[s] = true;
  }
  for (Symbol s = 0; s < seen.size(); ++s) {
    if (!seen[s]) {
      throw Error(ErrorKind::InvalidArgument, "no image for '" + source->name(s) + "'");
    }
  }
  return RandomVariable(std::move(source), std::move(target), std::move(m));
}

RandomVariable RandomVariable::identity(AlphabetPtr alphabet) {
  std::vector<Symbol> m(alphabet->size());
  for (Symbol i = 0; i < m.size(); ++i) m[i] = i;
  return RandomVariable(alphabet, alphabet, std::move(m));
}

RandomVariable RandomVariable::indicator(const Event& event) {
  auto bits = binary_alphabet();
  std::vector<Symbol> m(event.alphabet()->size());
  for (Symbol i = 0; i < m.size(); ++i) m[i] = event.contains(i) ? 1 : 0;
  return RandomVariable(event.alphabet(), bits, std::move(m));
}

RandomVariable RandomVariable::constant(AlphabetPtr source, AlphabetPtr target, Symbol value) {
  std::vector<Symbol> m(source->size(), value);
  return RandomVariable(std::move(source), std::move(target), std::move(m));
}

RandomVariable RandomVariable::contraction(AlphabetPtr source, Symbol from, Symbol to) {
  if (from == to || from >= source->size() || to >= source->size()) {
    throw Error(ErrorKind::InvalidArgument, "contraction needs two distinct symbols");
  }
  std::vector<std::string> names;
  std::vector<Symbol> reindex(source->size());
  for (Symbol s = 0; s < source->size(); ++s) {
    if (s == from) continue;
    reindex[s] = static_cast<Symbol>(names.size());
    names.push_back(source->name(s));
  }
  reindex[from] = reindex[to];
  return RandomVariable(source, Alphabet::derived(std::move(names)), std::move(reindex));
}

RandomVariable RandomVariable::projection(AlphabetPtr product, std::size_t coordinate) {
  const auto& factors = product->factors();
  if (coordinate >= factors.size()) throw Error(ErrorKind::InvalidArgument, "no such coordinate");
  std::vector<Symbol> m(product->size());
  for (Symbol s = 0; s < m.size(); ++s) m[s] = product->split(s)[coordinate];
  return RandomVariable(product, factors[coordinate], std::move(m));
}

RandomVariable RandomVariable::tuple(std::span<const RandomVariable> parts) {
  if (parts.empty()) throw Error(ErrorKind::InvalidArgument, "empty tuple of random variables");
  std::vector<AlphabetPtr> targets;
  for (const auto& x : parts) {
    require_same(*x.source(), *parts.front().source(), "tuple components need a common source");
    targets.push_back(x.target());
  }
  auto target = Alphabet::product(targets);
  std::vector<Symbol> m(parts.front().source()->size());
  std::vector<Symbol> values(parts.size());
  for (Symbol s = 0; s < m.size(); ++s) {
    for (std::size_t i = 0; i < parts.size(); ++i) values[i] = parts[i](s);
    m[s] = target->join(values);
  }
  return RandomVariable(parts.front().source(), target, std::move(m));
}

FiniteProbabilitySpace make_space(AlphabetPtr alphabet,
                                  const std::map<std::string, Rational>& weights) {
  std::vector<Rational> w(alphabet->size());
  std::vector<bool> seen(alphabet->size(), false);
  for (const auto& [name, value] : weights) {
    Symbol s = alphabet->index(name);
    w[s] = value;
    seen[s] = true;
  }
  for (Symbol s = 0; s < seen.size(); ++s) {
    if (!seen[s]) throw Error(ErrorKind::MissingWeight, "no weight for '" + alphabet->name(s) + "'");
  }
  return FiniteProbabilitySpace(std::move(alphabet), std::move(w));
}

FiniteProbabilitySpace uniform_space(AlphabetPtr alphabet) {
  Rational each(1, alphabet->size());
  each.canonicalize();
  return FiniteProbabilitySpace(alphabet, std::vector<Rational>(alphabet->size(), each));
}

FiniteProbabilitySpace point_mass(AlphabetPtr alphabet, Symbol at) {
  std::vector<Rational> w(alphabet->size(), Rational(0));
  w.at(at) = 1;
  return FiniteProbabilitySpace(std::move(alphabet), std::move(w));
}

Rational event_prob(const FiniteProbabilitySpace& space, const Event& event) {
  require_same(*space.alphabet(), *event.alphabet(), "event is over a different alphabet");
  Rational p(0);
  for (Symbol s : event.members()) p += space.weight(s);
  return p;
}

Rational string_prob(const FiniteProbabilitySpace& space, std::span<const Symbol> s) {
  Rational p(1);
  for (Symbol a : s) {
    if (a >= space.size()) throw Error(ErrorKind::UnknownSymbol, "symbol index out of range");
    p *= space.weight(a);
  }
  return p;
}

FiniteProbabilitySpace conditional_space(const FiniteProbabilitySpace& space, const Event& b) {
  Rational pb = event_prob(space, b);
  if (pb == 0) throw Error(ErrorKind::ZeroConditionEvent, "P(B) = 0");
  std::vector<Rational> w;
  w.reserve(b.size());
  for (Symbol s : b.members()) w.emplace_back(space.weight(s) / pb);
  return FiniteProbabilitySpace(b.as_alphabet(), std::move(w));
}

FiniteProbabilitySpace induced_space(const RandomVariable& x, const FiniteProbabilitySpace& space) {
  require_same(*x.source(), *space.alphabet(), "random variable source differs from space");
  std::vector<Rational> w(x.target()->size(), Rational(0));
  for (Symbol s = 0; s < space.size(); ++s) w[x(s)] += space.weight(s);
  return FiniteProbabilitySpace(x.target(), std::move(w));
}

FiniteProbabilitySpace product_space(std::span<const FiniteProbabilitySpace> spaces) {
  if (spaces.empty()) throw Error(ErrorKind::InvalidArgument, "product of no spaces");
  std::vector<AlphabetPtr> factors;
  for (const auto& p : spaces) factors.push_back(p.alphabet());
  auto alphabet = Alphabet::product(factors);
  std::vector<Rational> w(alphabet->size());
  for (Symbol s = 0; s < w.size(); ++s) {
    auto parts = alphabet->split(s);
    Rational p(1);
    for (std::size_t i = 0; i < parts.size(); ++i) p *= spaces[i].weight(parts[i]);
    w[s] = p;
  }
  return FiniteProbabilitySpace(alphabet, std::move(w));
}

IndependenceVerdict events_independent(const FiniteProbabilitySpace& space,
                                       std::span<const Event> events) {
  if (events.size() > kMaxIndependentEvents) {
    throw Error(ErrorKind::TooManyEvents,
                std::to_string(events.size()) + " events exceeds the cap of " +
                    std::to_string(kMaxIndependentEvents));
  }
  for (const auto& e : events) {
    require_same(*space.alphabet(), *e.alphabet(), "event is over a different alphabet");
  }
  std::vector<Rational> single;
  for (const auto& e : events) single.push_back(event_prob(space, e));

  IndependenceVerdict verdict;
  const std::size_t n = events.size();
  const std::size_t k = space.size();
  // Subcollections in order of size, then lexicographically, so the first
  // witness is the smallest one.
  for (std::size_t size = 2; size <= n; ++size) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      Rational joint(0);
      for (Symbol s = 0; s < k; ++s) {
        bool all = true;
        for (std::size_t i = 0; i < n && all; ++i) {
          if (pick[i] && !events[i].contains(s)) all = false;
        }
        if (all) joint += space.weight(s);
      }
      Rational prod(1);
      for (std::size_t i = 0; i < n; ++i) {
        if (pick[i]) prod *= single[i];
      }
      if (joint != prod) {
        verdict.independent = false;
        for (std::size_t i = 0; i < n; ++i) {
          if (pick[i]) verdict.witness.push_back(i);
        }
        verdict.joint = joint;
        verdict.product = prod;
        return verdict;
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return verdict;
}

RvIndependenceVerdict rvs_independent(const FiniteProbabilitySpace& space,
                                      std::span<const RandomVariable> rvs) {
  RvIndependenceVerdict verdict;
  if (rvs.empty()) return verdict;
  for (const auto& x : rvs) {
    require_same(*x.source(), *space.alphabet(), "random variable source differs from space");
  }
  // Joint law (X1 x ... x Xn)(P) against X1(P) x ... x Xn(P).
  auto joint = induced_space(RandomVariable::tuple(rvs), space);
  std::vector<FiniteProbabilitySpace> marginals;
  for (const auto& x : rvs) marginals.push_back(induced_space(x, space));
  auto product = product_space(marginals);
  for (Symbol t = 0; t < joint.size(); ++t) {
    if (joint.weight(t) != product.weight(t)) {
      verdict.independent = false;
      verdict.witness = joint.alphabet()->split(t);
      verdict.joint = joint.weight(t);
      verdict.product = product.weight(t);
      return verdict;
    }
  }
  return verdict;
}

}  // namespace ensemble
