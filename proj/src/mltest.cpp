#include "ensemble/mltest.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "ensemble/error.hpp"
#include "ensemble/trie.hpp"

namespace ensemble {

namespace {

using Dec = boost::multiprecision::cpp_dec_float_50;

Dec to_dec(const Rational& r) {
  return Dec(r.get_num().get_str()) / Dec(r.get_den().get_str());
}

void sort_unique(std::vector<Word>& words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
}

void check_symbols(std::span<const Word> strings, std::size_t alphabet_size) {
  for (const auto& w : strings) {
    for (Symbol s : w) {
      if (s >= alphabet_size) throw Error(ErrorKind::UnknownSymbol, "string symbol out of range");
    }
  }
}

}  // namespace

PrefixFreeSet prefix_free_reduce(const AlphabetPtr& alphabet, std::span<const Word> strings) {
  check_symbols(strings, alphabet->size());
  PrefixTrie trie(alphabet->size());
  for (const auto& w : strings) trie.insert(w);
  return PrefixFreeSet{alphabet, trie.minimal_words()};
}

bool is_prefix_free(std::span<const Word> strings) {
  std::vector<Word> sorted(strings.begin(), strings.end());
  std::sort(sorted.begin(), sorted.end());
  // In lexicographic order a prefix sorts immediately before some extension,
  // so checking neighbours suffices.
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const auto& a = sorted[i - 1];
    const auto& b = sorted[i];
    if (a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin())) return false;
  }
  return true;
}

Rational open_measure(const FiniteProbabilitySpace& space, std::span<const Word> strings) {
  auto reduced = prefix_free_reduce(space.alphabet(), strings);
  Rational total(0);
  for (const auto& w : reduced.strings) total += string_prob(space, w);
  return total;
}

CertifyResult certify_level(const FiniteProbabilitySpace& space, const TestLevel& level) {
  require_same(*space.alphabet(), *level.alphabet, "test level is over a different alphabet");
  CertifyResult result;
  result.measure = open_measure(space, level.strings);
  result.bound = pow2_neg(level.index);
  result.certified = result.measure < result.bound;
  result.level = level;
  if (result.certified) {
    result.level.certificate = result.measure;
  } else {
    result.level.certificate.reset();
  }
  return result;
}

bool member(const TestLevel& level, std::span<const Symbol> prefix) {
  for (const auto& w : level.strings) {
    if (w.size() <= prefix.size() && std::equal(w.begin(), w.end(), prefix.begin())) return true;
  }
  return false;
}

MLTestFamily MLTestFamily::from_levels(FiniteProbabilitySpace space, std::vector<TestLevel> levels) {
  for (const auto& l : levels) {
    require_same(*space.alphabet(), *l.alphabet, "test level is over a different alphabet");
  }
  auto shared = std::make_shared<std::vector<TestLevel>>(std::move(levels));
  auto find = [shared](unsigned n) -> const TestLevel* {
    for (const auto& l : *shared) {
      if (l.index == n) return &l;
    }
    return nullptr;
  };
  MLTestFamily family{space, "explicit", {}, {}, {}};
  family.member = [find](unsigned n, std::span<const Symbol> prefix) {
    const TestLevel* l = find(n);
    return l != nullptr && ensemble::member(*l, prefix);
  };
  family.materialize = [find](unsigned n, std::size_t depth) {
    std::vector<Word> out;
    if (const TestLevel* l = find(n)) {
      for (const auto& w : l->strings) {
        if (w.size() <= depth) out.push_back(w);
      }
    }
    return out;
  };
  family.exact_measure = [find, space](unsigned n) -> std::optional<Rational> {
    const TestLevel* l = find(n);
    if (l == nullptr) return Rational(0);
    return open_measure(space, l->strings);
  };
  return family;
}

MLTestFamily zero_prob_test(const FiniteProbabilitySpace& space) {
  std::vector<bool> zero(space.size());
  std::vector<Symbol> positive;
  std::vector<Symbol> zeros;
  for (Symbol s = 0; s < space.size(); ++s) {
    zero[s] = space.weight(s) == 0;
    (zero[s] ? zeros : positive).push_back(s);
  }
  MLTestFamily family{space, "zero-probability", {}, {}, {}};
  family.member = [zero](unsigned, std::span<const Symbol> prefix) {
    return std::any_of(prefix.begin(), prefix.end(), [&](Symbol s) { return s < zero.size() && zero[s]; });
  };
  // Minimal strings: a run of positive-weight symbols closed by a zero-weight one.
  family.materialize = [positive, zeros](unsigned, std::size_t depth) {
    std::vector<Word> out;
    if (zeros.empty() || depth == 0) return out;
    std::vector<Word> layer{Word{}};
    for (std::size_t len = 0; len < depth; ++len) {
      for (const auto& w : layer) {
        for (Symbol z : zeros) {
          Word v = w;
          v.push_back(z);
          out.push_back(std::move(v));
        }
      }
      std::vector<Word> next;
      for (const auto& w : layer) {
        for (Symbol p : positive) {
          Word v = w;
          v.push_back(p);
          next.push_back(std::move(v));
        }
      }
      layer = std::move(next);
    }
    sort_unique(out);
    return out;
  };
  family.exact_measure = [](unsigned) -> std::optional<Rational> { return Rational(0); };
  return family;
}

LlnTest::LlnTest(const FiniteProbabilitySpace& q, const Rational& eps) : alphabet_(q.alphabet()) {
  one_ = binary_one(*alphabet_);
  q1_ = q.weight(one_);
  const Rational q0 = 1 - q1_;
  if (q1_ == 0 || q1_ == 1) throw Error(ErrorKind::DegenerateQ, "Q(1) must lie strictly between 0 and 1");
  if (eps <= 0 || eps > q0 * q1_) {
    throw Error(ErrorKind::EpsilonOutOfRange,
                "eps = " + to_string(eps) + " outside (0, " + to_string(q0 * q1_) + "]");
  }
  // Midpoints of (Q1 - 2eps, Q1 - eps), (Q1 + eps, Q1 + 2eps) and
  // (0, eps^2 / (2 Q0 Q1)).
  const Rational three_halves(3, 2);
  r_left_ = q1_ - three_halves * eps;
  r_right_ = q1_ + three_halves * eps;
  c_ = eps * eps / (4 * q0 * q1_);
  c_.canonicalize();
}

std::uint64_t LlnTest::growth(unsigned n) const {
  const Dec c = to_dec(c_);
  const Dec ln2 = boost::multiprecision::log(Dec(2));
  const Dec denom = 1 - boost::multiprecision::exp(-c);
  auto holds = [&](std::uint64_t m) {
    Dec lhs = 2 * boost::multiprecision::exp(-c * Dec(m)) / denom;
    Dec rhs = boost::multiprecision::exp(-Dec(n) * ln2);
    return lhs < rhs;
  };
  // m > ((n + 1) ln 2 - ln(1 - e^-c)) / c, then settle the boundary exactly.
  Dec x = (Dec(n + 1) * ln2 - boost::multiprecision::log(denom)) / c;
  auto m = static_cast<std::uint64_t>(boost::multiprecision::floor(x).convert_to<double>());
  if (m < 1) m = 1;
  while (!holds(m)) ++m;
  while (m > 1 && holds(m - 1)) --m;
  return m;
}

bool LlnTest::member(unsigned n, std::span<const Symbol> prefix) const {
  const std::uint64_t start = growth(n);
  BigInt ones(0);
  BigInt lhs;
  BigInt rhs;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i] == one_) ones += 1;
    const std::uint64_t m = i + 1;
    if (m < start) continue;
    // ones/m < r_L  <=>  ones * den < num * m
    lhs = ones * r_left_.get_den();
    rhs = r_left_.get_num() * BigInt(static_cast<unsigned long>(m));
    if (lhs < rhs) return true;
    lhs = ones * r_right_.get_den();
    rhs = r_right_.get_num() * BigInt(static_cast<unsigned long>(m));
    if (lhs > rhs) return true;
  }
  return false;
}

double LlnTest::tail_bound(unsigned n) const {
  const Dec c = to_dec(c_);
  Dec v = 2 * boost::multiprecision::exp(-c * Dec(growth(n))) / (1 - boost::multiprecision::exp(-c));
  return std::nextafter(v.convert_to<double>(), HUGE_VAL);
}

LlnTest lln_test(const FiniteProbabilitySpace& q, const Rational& eps) { return LlnTest(q, eps); }

// --- transformations -------------------------------------------------------

std::vector<Word> preimage_expansion(const RandomVariable& x, std::span<const Symbol> s) {
  std::vector<std::vector<Symbol>> pre(x.target()->size());
  for (Symbol a = 0; a < x.source()->size(); ++a) pre[x(a)].push_back(a);
  std::vector<Word> out{Word{}};
  for (Symbol t : s) {
    if (t >= pre.size()) throw Error(ErrorKind::UnknownSymbol, "string symbol out of range");
    std::vector<Word> next;
    next.reserve(out.size() * pre[t].size());
    for (const auto& w : out) {
      for (Symbol a : pre[t]) {
        Word v = w;
        v.push_back(a);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

TransformedLevel transform_map(const RandomVariable& x, const TestLevel& level,
                               const FiniteProbabilitySpace& space) {
  require_same(*x.target(), *level.alphabet, "level alphabet differs from random variable target");
  require_same(*x.source(), *space.alphabet(), "space alphabet differs from random variable source");
  TransformedLevel out;
  out.level.alphabet = space.alphabet();
  out.level.index = level.index;
  for (const auto& s : level.strings) {
    auto expansion = preimage_expansion(x, s);
    out.level.strings.insert(out.level.strings.end(), expansion.begin(), expansion.end());
  }
  sort_unique(out.level.strings);
  out.measure = open_measure(space, out.level.strings);
  return out;
}

std::vector<Word> shuffle_expansion(const Injection& f, std::span<const Symbol> s,
                                    std::size_t alphabet_size) {
  if (s.empty()) throw Error(ErrorKind::EmptyStringInLevel, "the empty string cannot be shuffled back");
  std::vector<std::uint64_t> image(s.size());
  std::set<std::uint64_t> seen;
  std::uint64_t length = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    image[k] = f(k + 1);
    if (!seen.insert(image[k]).second) {
      throw Error(ErrorKind::NotInjective, "f repeats " + std::to_string(image[k]) + " on {1.." +
                                               std::to_string(s.size()) + "}");
    }
    length = std::max(length, image[k]);
  }
  Word base(length, 0);
  std::vector<bool> fixed(length, false);
  for (std::size_t k = 0; k < s.size(); ++k) {
    base[image[k] - 1] = s[k];
    fixed[image[k] - 1] = true;
  }
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < length; ++i) {
    if (!fixed[i]) free.push_back(i);
  }
  std::vector<Word> out;
  // Odometer over the free positions.
  Word t = base;
  for (;;) {
    out.push_back(t);
    std::size_t i = 0;
    while (i < free.size()) {
      auto& slot = t[free[i]];
      if (++slot < alphabet_size) break;
      slot = 0;
      ++i;
    }
    if (i == free.size()) break;
  }
  return out;
}

TransformedLevel transform_shuffle(const Injection& f, const TestLevel& level,
                                   const FiniteProbabilitySpace& space) {
  require_same(*space.alphabet(), *level.alphabet, "level alphabet differs from space");
  TransformedLevel out;
  out.level.alphabet = space.alphabet();
  out.level.index = level.index;
  for (const auto& s : level.strings) {
    if (s.empty()) throw Error(ErrorKind::EmptyStringInLevel, "level contains the empty string");
  }
  for (const auto& s : level.strings) {
    auto expansion = shuffle_expansion(f, s, space.size());
    out.level.strings.insert(out.level.strings.end(), expansion.begin(), expansion.end());
  }
  sort_unique(out.level.strings);
  out.measure = open_measure(space, out.level.strings);
  return out;
}

SelectExpansion select_expansion(const SelectionRule& rule, std::span<const Symbol> s,
                                 const FiniteProbabilitySpace& space, std::size_t depth) {
  require_same(*rule.alphabet(), *space.alphabet(), "rule alphabet differs from space");
  SelectExpansion out;
  out.source.assign(s.begin(), s.end());
  out.source_measure = string_prob(space, s);
  Word t;
  const std::size_t k = space.size();
  auto dfs = [&](auto&& self, std::size_t placed) -> void {
    if (placed == s.size()) {
      out.strings.push_back(t);
      return;
    }
    if (t.size() >= depth) return;
    auto decision = rule.decide(t);
    if (!decision) {
      throw StreamError(ErrorKind::Stalled,
                        "selection rule undefined on " + space.alphabet()->render(t), t.size());
    }
    if (*decision) {
      t.push_back(s[placed]);
      self(self, placed + 1);
      t.pop_back();
    } else {
      for (Symbol a = 0; a < k; ++a) {
        t.push_back(a);
        self(self, placed);
        t.pop_back();
      }
    }
  };
  dfs(dfs, 0);
  out.measure = Rational(0);
  for (const auto& w : out.strings) out.measure += string_prob(space, w);
  return out;
}

TransformedSelectLevel transform_select(const SelectionRule& rule, const TestLevel& level,
                                        const FiniteProbabilitySpace& space, std::size_t depth) {
  require_same(*space.alphabet(), *level.alphabet, "level alphabet differs from space");
  TransformedSelectLevel out;
  out.level.alphabet = space.alphabet();
  out.level.index = level.index;
  for (const auto& s : level.strings) {
    auto e = select_expansion(rule, s, space, depth);
    out.level.strings.insert(out.level.strings.end(), e.strings.begin(), e.strings.end());
    out.per_string.push_back(std::move(e));
  }
  sort_unique(out.level.strings);
  out.measure = open_measure(space, out.level.strings);
  return out;
}

MergedSpace merged_space(const FiniteProbabilitySpace& space, const Event& b) {
  require_same(*space.alphabet(), *b.alphabet(), "event is over a different alphabet");
  const Rational pb = event_prob(space, b);
  if (pb == 0) throw Error(ErrorKind::ZeroConditionEvent, "P(B) = 0");
  std::vector<Symbol> from_b(b.members().size());
  for (std::size_t i = 0; i < from_b.size(); ++i) from_b[i] = static_cast<Symbol>(i);
  if (b.size() == space.size()) return MergedSpace{space, std::nullopt, from_b};
  std::vector<std::string> names;
  std::vector<Rational> weights;
  for (Symbol s : b.members()) {
    names.push_back(space.alphabet()->name(s));
    weights.push_back(space.weight(s));
  }
  names.push_back(space.alphabet()->fresh_name("_merged"));
  weights.emplace_back(1 - pb);
  auto merged = static_cast<Symbol>(names.size() - 1);
  return MergedSpace{FiniteProbabilitySpace(Alphabet::derived(std::move(names)), std::move(weights)),
                     merged, from_b};
}

TransformedConditionLevel transform_condition(const Event& b, const TestLevel& level,
                                              const FiniteProbabilitySpace& space, std::size_t depth) {
  TransformedConditionLevel out{merged_space(space, b), {}, Rational(0), Rational(0)};
  const auto b_alphabet = b.as_alphabet();
  require_same(*b_alphabet, *level.alphabet, "level must be over the conditioning event's members");
  const auto& q = out.merged.q;
  const Rational pb = event_prob(space, b);
  std::vector<Word> all_truncated;

  for (const auto& s : level.strings) {
    ConditionExpansion e;
    e.source = s;
    Word mapped;
    for (Symbol x : s) mapped.push_back(out.merged.from_b.at(x));
    const Rational q_sigma = string_prob(q, mapped);
    if (!out.merged.merged) {
      e.pattern = b_alphabet->render(s);
      e.closed_form = q_sigma;
      e.truncated.push_back(mapped);
    } else {
      const Symbol a = *out.merged.merged;
      const std::string& a_name = q.alphabet()->name(a);
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) e.pattern += ' ';
        e.pattern += a_name + "*" + b_alphabet->name(s[i]);
      }
      // 1 - Q(a) = P(B)
      e.closed_form = q_sigma / pow(pb, static_cast<unsigned>(s.size()));
      // All gap vectors (k_1..k_L) with k_1 + ... + k_L <= depth.
      Word t;
      auto dfs = [&](auto&& self, std::size_t i, std::size_t budget) -> void {
        if (i == mapped.size()) {
          e.truncated.push_back(t);
          return;
        }
        for (std::size_t k = 0; k <= budget; ++k) {
          t.insert(t.end(), k, a);
          t.push_back(mapped[i]);
          self(self, i + 1, budget - k);
          t.resize(t.size() - k - 1);
        }
      };
      dfs(dfs, 0, depth);
    }
    e.truncated_measure = Rational(0);
    for (const auto& w : e.truncated) e.truncated_measure += string_prob(q, w);
    all_truncated.insert(all_truncated.end(), e.truncated.begin(), e.truncated.end());
    out.per_string.push_back(std::move(e));
  }
  auto reduced = prefix_free_reduce(level.alphabet, level.strings);
  for (const auto& s : reduced.strings) {
    for (const auto& e : out.per_string) {
      if (e.source == s) {
        out.closed_form_measure += e.closed_form;
        break;
      }
    }
  }
  out.truncated_measure = open_measure(q, all_truncated);
  return out;
}

}  // namespace ensemble
