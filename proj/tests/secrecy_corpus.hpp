#pragma once

#include <random>
#include <string>
#include <vector>

#include "ensemble/secrecy.hpp"
#include "helpers.hpp"

namespace testing {

using ensemble::EncryptionScheme;
using ensemble::Symbol;

inline AlphabetPtr named(const char* prefix, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return ensemble::Alphabet::make(names);
}

/// Key weights drawn from multiples of 1/12 (some zero), normalised.
inline FiniteProbabilitySpace grid_key_space(const AlphabetPtr& keys, std::mt19937_64& rng, bool uniform) {
  std::vector<Rational> w(keys->size());
  Rational total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : w) {
      x = uniform ? Rational(1) : Rational(static_cast<long>(rng() % 4));
      total += x;
    }
  }
  for (auto& x : w) x /= total;
  return FiniteProbabilitySpace(keys, std::move(w));
}

/// Random scheme with |M|, |K|, |C| <= 4. A third of the corpus are shifted
/// Latin squares (often perfectly secret), the rest random tables.
inline EncryptionScheme random_scheme(std::mt19937_64& rng) {
  const std::size_t nm = 1 + rng() % 4;
  const std::size_t nk = 1 + rng() % 4;
  const std::size_t nc = 1 + rng() % 4;
  auto m = named("m", nm);
  auto k = named("k", nk);
  std::vector<std::vector<Symbol>> enc(nm, std::vector<Symbol>(nk));
  if (rng() % 3 == 0) {
    const std::size_t n = std::max(nm, nk);
    auto c = named("c", n);
    std::vector<Symbol> pm(n), pk(n);
    for (Symbol i = 0; i < n; ++i) pm[i] = pk[i] = i;
    std::shuffle(pm.begin(), pm.end(), rng);
    std::shuffle(pk.begin(), pk.end(), rng);
    for (Symbol i = 0; i < nm; ++i)
      for (Symbol j = 0; j < nk; ++j) enc[i][j] = static_cast<Symbol>((pm[i] + pk[j]) % n);
    return EncryptionScheme(m, c, grid_key_space(k, rng, rng() % 2 == 0), std::move(enc));
  }
  auto c = named("c", nc);
  for (auto& row : enc)
    for (auto& v : row) v = static_cast<Symbol>(rng() % nc);
  return EncryptionScheme(m, c, grid_key_space(k, rng, rng() % 2 == 0), std::move(enc));
}

/// Point masses plus the (1/2,1/2) and (1/3,2/3) mixtures of each pair.
inline std::vector<FiniteProbabilitySpace> spanning_set(const AlphabetPtr& messages) {
  const std::size_t n = messages->size();
  std::vector<FiniteProbabilitySpace> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> w(n, Rational(0));
    w[i] = 1;
    out.emplace_back(messages, std::move(w));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      for (const char* a : {"1/2", "1/3"}) {
        std::vector<Rational> w(n, Rational(0));
        w[i] = Q(a);
        w[j] = 1 - w[i];
        out.emplace_back(messages, std::move(w));
      }
    }
  return out;
}

/// Independence of M and C decided on the product space p_msg x P_key with
/// the generic random-variable test.
inline bool independent_by_definition(const EncryptionScheme& s, const FiniteProbabilitySpace& p_msg) {
  const FiniteProbabilitySpace parts[2] = {p_msg, s.key_space()};
  auto space = ensemble::product_space(parts);
  const auto& pairs = space.alphabet();
  std::vector<Symbol> cmap(pairs->size());
  for (Symbol i = 0; i < cmap.size(); ++i) {
    const auto mk = pairs->split(i);
    cmap[i] = s.enc(mk[0], mk[1]);
  }
  const ensemble::RandomVariable rvs[2] = {ensemble::RandomVariable::projection(pairs, 0),
                                           ensemble::RandomVariable(pairs, s.ciphers(), cmap)};
  return ensemble::rvs_independent(space, rvs).independent;
}

}  // namespace testing
