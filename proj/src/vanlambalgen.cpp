#include "ensemble/vanlambalgen.hpp"

#include <algorithm>
#include <set>

#include "ensemble/error.hpp"
#include "ensemble/trie.hpp"

namespace ensemble {

namespace {

bool is_prefix(std::span<const Symbol> a, std::span<const Symbol> b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

void require_pair_alphabet(const Alphabet& pair, const FiniteProbabilitySpace& p1,
                           const FiniteProbabilitySpace& p2) {
  if (pair.factors().size() != 2) {
    throw Error(ErrorKind::AlphabetMismatch, "expected a pair alphabet Omega1 x Omega2");
  }
  require_same(*pair.factors()[0], *p1.alphabet(), "first factor differs from P1's alphabet");
  require_same(*pair.factors()[1], *p2.alphabet(), "second factor differs from P2's alphabet");
}

// All words of length n over an alphabet of the given size, in lexicographic order.
template <typename Visit>
void for_each_word(std::size_t alphabet_size, std::size_t n, Visit&& visit) {
  Word w(n, 0);
  for (;;) {
    visit(static_cast<const Word&>(w));
    std::size_t i = n;
    while (i > 0) {
      if (++w[i - 1] < alphabet_size) break;
      w[i - 1] = 0;
      --i;
    }
    if (i == 0) return;
  }
}

}  // namespace

std::pair<Word, Word> unzip(const Alphabet& pair_alphabet, std::span<const Symbol> w) {
  std::pair<Word, Word> out;
  for (Symbol s : w) {
    auto parts = pair_alphabet.split(s);
    if (parts.size() != 2) throw Error(ErrorKind::AlphabetMismatch, "expected pair symbols");
    out.first.push_back(parts[0]);
    out.second.push_back(parts[1]);
  }
  return out;
}

Word zip(const Alphabet& pair_alphabet, std::span<const Symbol> a, std::span<const Symbol> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::LengthMismatch, "zip needs equal lengths");
  Word out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Symbol parts[2] = {a[i], b[i]};
    out[i] = pair_alphabet.join(parts);
  }
  return out;
}

std::vector<Word> vl_project(const Alphabet& pair_alphabet, std::span<const Word> w,
                             std::span<const Symbol> x) {
  std::vector<Word> out;
  for (const auto& pair : w) {
    auto [first, second] = unzip(pair_alphabet, pair);
    if (is_prefix(second, x)) out.push_back(std::move(first));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational section_measure(const FiniteProbabilitySpace& p1, const FiniteProbabilitySpace& p2,
                         std::span<const Word> w, std::span<const Symbol> x) {
  const AlphabetPtr factors[2] = {p1.alphabet(), p2.alphabet()};
  auto pair = Alphabet::product(factors);
  auto reduced = prefix_free_reduce(pair, w);
  Rational total(0);
  for (const auto& v : reduced.strings) {
    auto [first, second] = unzip(*pair, v);
    if (is_prefix(second, x)) {
      total += string_prob(p1, first) * string_prob(p2, x);
    } else if (is_prefix(x, second)) {
      total += string_prob(p1, first) * string_prob(p2, second);
    }
  }
  return total;
}

SectionReport vl_sections(const TestLevel& v_d, const FiniteProbabilitySpace& p1,
                          const FiniteProbabilitySpace& p2, std::span<const Symbol> x) {
  require_pair_alphabet(*v_d.alphabet, p1, p2);
  if (!is_prefix_free(v_d.strings)) {
    throw Error(ErrorKind::NotPrefixFreeLevel, "V_" + std::to_string(v_d.index) + " is not prefix-free");
  }
  for (Symbol s : x) {
    if (s >= p2.size()) throw Error(ErrorKind::UnknownSymbol, "oracle prefix symbol out of range");
  }
  const std::size_t n = x.size();
  const Alphabet& pair = *v_d.alphabet;
  std::vector<Word> bounded;
  for (const auto& w : v_d.strings) {
    if (w.size() <= n) bounded.push_back(w);
  }

  SectionReport report;
  report.threshold = pow2_neg(v_d.index);
  report.f_measure = Rational(0);
  for (const auto& s : vl_project(pair, bounded, x)) report.f_measure += string_prob(p1, s);
  report.in_s_d = report.threshold < report.f_measure;

  // H_d(n) by its definition: w in Omega1^n such that some prefix of w x x|n
  // lies in V_d n (Omega1 x Omega2)^{<=n}.
  std::set<Word> members(bounded.begin(), bounded.end());
  Word u;
  Word zipped;
  auto dfs = [&](auto&& self) -> void {
    const std::size_t i = u.size();
    if (members.count(zipped) != 0) {
      // Every completion of u to length n is in H.
      const std::size_t rest = n - i;
      for_each_word(p1.size(), rest, [&](const Word& tail) {
        Word w = u;
        w.insert(w.end(), tail.begin(), tail.end());
        report.h.push_back(std::move(w));
      });
      return;
    }
    if (i == n) return;
    for (Symbol a = 0; a < p1.size(); ++a) {
      u.push_back(a);
      const Symbol parts[2] = {a, x[i]};
      zipped.push_back(pair.join(parts));
      self(self);
      zipped.pop_back();
      u.pop_back();
    }
  };
  dfs(dfs);
  report.h_measure = open_measure(p1, report.h);
  report.h_bound_holds = report.h_measure <= report.threshold;
  return report;
}

std::optional<Word> check_oracle_monotone(const OracleIndexedLevel& u, unsigned n,
                                          std::size_t max_length) {
  for (std::size_t len = 0; len < max_length; ++len) {
    std::optional<Word> violation;
    for_each_word(u.omega2->size(), len, [&](const Word& sigma) {
      if (violation) return;
      auto base = u.produce(sigma, n);
      std::sort(base.begin(), base.end());
      for (Symbol a = 0; a < u.omega2->size() && !violation; ++a) {
        Word ext = sigma;
        ext.push_back(a);
        auto more = u.produce(ext, n);
        std::sort(more.begin(), more.end());
        if (!std::includes(more.begin(), more.end(), base.begin(), base.end())) violation = ext;
      }
    });
    if (violation) return violation;
  }
  return std::nullopt;
}

OracleMergeReport vl_oracle_merge(const OracleIndexedLevel& u, const FiniteProbabilitySpace& p1,
                                  const FiniteProbabilitySpace& p2, unsigned n, std::size_t k,
                                  bool require_certified) {
  require_same(*u.omega1, *p1.alphabet(), "oracle level Omega1 differs from P1");
  require_same(*u.omega2, *p2.alphabet(), "oracle level Omega2 differs from P2");
  const AlphabetPtr factors[2] = {p1.alphabet(), p2.alphabet()};
  auto pair = Alphabet::product(factors);

  OracleMergeReport report;
  report.bound = pow2_neg(n);
  for_each_word(p2.size(), k, [&](const Word& sigma) {
    auto section = u.produce(sigma, n);
    const Rational m = open_measure(p1, section);
    if (m >= report.bound && !report.uncertified_section) {
      if (require_certified) {
        throw Error(ErrorKind::UncertifiedOracleLevel,
                    "section " + p2.alphabet()->render(sigma) + " has measure " + to_string(m) +
                        " >= " + to_string(report.bound));
      }
      report.uncertified_section = sigma;
      report.uncertified_measure = m;
    }
    PrefixTrie trie(p1.size());
    for (const auto& s : section) trie.insert(s);
    if (trie.empty()) return;
    for_each_word(p1.size(), k, [&](const Word& w) {
      if (trie.covers(w)) report.g.push_back(zip(*pair, w, sigma));
    });
  });
  std::sort(report.g.begin(), report.g.end());
  const FiniteProbabilitySpace spaces[2] = {p1, p2};
  report.measure = open_measure(product_space(spaces), report.g);
  report.bound_holds = report.measure < report.bound;
  return report;
}

}  // namespace ensemble
