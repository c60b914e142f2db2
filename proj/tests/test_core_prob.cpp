#include <catch_amalgamated.hpp>

#include <random>

#include "ensemble/error.hpp"
#include "ensemble/space.hpp"
#include "helpers.hpp"

using namespace ensemble;
using testing::Q;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

AlphabetPtr bit_pairs() { return Alphabet::make({"00", "01", "10", "11"}); }

// Random rational space on k symbols with weights over denominator `den`;
// some weights may come out zero.
FiniteProbabilitySpace random_space(std::mt19937_64& rng, std::size_t k, unsigned den) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) names.push_back("s" + std::to_string(i));
  std::vector<unsigned> cuts;
  std::uniform_int_distribution<unsigned> pick(0, den);
  for (std::size_t i = 0; i + 1 < k; ++i) cuts.push_back(pick(rng));
  cuts.push_back(0);
  cuts.push_back(den);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rational> w;
  for (std::size_t i = 0; i < k; ++i) w.emplace_back(Rational(cuts[i + 1] - cuts[i], den));
  for (auto& r : w) r.canonicalize();
  return FiniteProbabilitySpace(Alphabet::make(names), w);
}

}  // namespace

TEST_CASE("make_space validates weights") {
  auto p3 = testing::p3();
  CHECK(p3.weight("x") == Q("1/2"));
  CHECK(p3.weight("z") == Q("1/6"));

  auto u = make_space(binary_alphabet(), {{"0", Q("1/2")}, {"1", Q("1/2")}});
  CHECK(u == testing::u2());

  auto ab = Alphabet::make({"a", "b"});
  try {
    make_space(ab, {{"a", Q("2/3")}, {"b", Q("2/3")}});
    FAIL("expected SumNotOne");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SumNotOne);
    CHECK(std::string(e.what()).find("deficit 1/3, over") != std::string::npos);
  }
  CHECK(kind_of([&] { make_space(ab, {{"a", Q("-1/2")}, {"b", Q("3/2")}}); }) == ErrorKind::NegativeWeight);
  CHECK(kind_of([&] { make_space(ab, {{"a", Q("1")}}); }) == ErrorKind::MissingWeight);
  CHECK(kind_of([&] { make_space(ab, {{"a", Q("1")}, {"b", Q("0")}, {"c", Q("0")}}); }) ==
        ErrorKind::UnknownSymbol);
  // Zero weights are allowed.
  CHECK_NOTHROW(make_space(ab, {{"a", Q("1")}, {"b", Q("0")}}));
}

TEST_CASE("alphabets reject malformed symbol lists") {
  CHECK(kind_of([] { Alphabet::make({}); }) == ErrorKind::InvalidAlphabet);
  CHECK(kind_of([] { Alphabet::make({"a", "a"}); }) == ErrorKind::InvalidAlphabet);
  CHECK(kind_of([] { Alphabet::make({"a|b"}); }) == ErrorKind::InvalidAlphabet);
  CHECK(kind_of([] { Alphabet::make({"a b"}); }) == ErrorKind::InvalidAlphabet);
  CHECK(kind_of([] { Alphabet::make({""}); }) == ErrorKind::InvalidAlphabet);
  auto a = Alphabet::make({"a", "bb"});
  CHECK_FALSE(a->single_char());
  CHECK(a->render(a->parse_word("bb,a,bb")) == "bb,a,bb");
  CHECK(a->parse_word("~").empty());
  CHECK(kind_of([&] { a->index("c"); }) == ErrorKind::UnknownSymbol);
}

TEST_CASE("rationals parse and print canonically") {
  CHECK(to_string(Q("2/4")) == "1/2");
  CHECK(to_string(Q("0.25")) == "1/4");
  CHECK(to_string(Q("3")) == "3");
  CHECK(kind_of([] { parse_rational("1/0"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_rational("abc"); }) == ErrorKind::ParseError);
  CHECK(dyadic_exponent(Q("1/8")) == 3u);
  CHECK_FALSE(dyadic_exponent(Q("1/3")).has_value());
  CHECK(dyadic_exponent(Q("1")) == 0u);
  CHECK(pow2_neg(5) == Q("1/32"));
}

TEST_CASE("uniform_space") {
  auto u4 = uniform_space(Alphabet::make({"a", "b", "c", "d"}));
  for (const auto& w : u4.weights()) CHECK(w == Q("1/4"));
  CHECK(uniform_space(Alphabet::make({"m"})).weight("m") == 1);
  CHECK(testing::u2().weight("1") == Q("1/2"));
}

TEST_CASE("event_prob") {
  auto p3 = testing::p3();
  CHECK(event_prob(p3, Event::of(p3.alphabet(), {"x", "y"})) == Q("5/6"));
  CHECK(event_prob(p3, Event(p3.alphabet(), {})) == 0);
  CHECK(event_prob(p3, Event::whole(p3.alphabet())) == 1);
  CHECK(kind_of([&] { event_prob(p3, Event::whole(binary_alphabet())); }) == ErrorKind::AlphabetMismatch);
}

TEST_CASE("string_prob") {
  auto p3 = testing::p3();
  auto a = p3.alphabet();
  CHECK(string_prob(p3, testing::w(a, "xyz")) == Q("1/36"));
  CHECK(string_prob(p3, Word{}) == 1);
  CHECK(string_prob(p3, testing::w(a, "zz")) == Q("1/36"));
  CHECK(kind_of([&] { string_prob(p3, Word{7}); }) == ErrorKind::UnknownSymbol);
}

TEST_CASE("string_prob is multiplicative and sums over one-symbol extensions") {
  auto p3 = testing::p3();
  for (const auto& s : testing::all_words_upto(3, 3)) {
    Rational sum = 0;
    for (Symbol a = 0; a < 3; ++a) {
      Word sa = s;
      sa.push_back(a);
      sum += string_prob(p3, sa);
    }
    CHECK(sum == string_prob(p3, s));
    for (const auto& t : testing::all_words_upto(3, 2)) {
      Word st = s;
      st.insert(st.end(), t.begin(), t.end());
      CHECK(string_prob(p3, st) == string_prob(p3, s) * string_prob(p3, t));
    }
  }
}

TEST_CASE("conditional_space") {
  auto p3 = testing::p3();
  auto a = p3.alphabet();
  auto pb = conditional_space(p3, Event::of(a, {"x", "y"}));
  CHECK(pb.alphabet()->symbols() == std::vector<std::string>{"x", "y"});
  CHECK(pb.weight("x") == Q("3/5"));
  CHECK(pb.weight("y") == Q("2/5"));
  CHECK(conditional_space(p3, Event::whole(a)) == p3);
  CHECK(conditional_space(p3, Event::of(a, {"z"})).weight("z") == 1);

  auto zero = make_space(a, {{"x", Q("1")}, {"y", Q("0")}, {"z", Q("0")}});
  CHECK(kind_of([&] { conditional_space(zero, Event::of(a, {"y", "z"})); }) == ErrorKind::ZeroConditionEvent);
}

TEST_CASE("induced_space") {
  auto p3 = testing::p3();
  auto a = p3.alphabet();
  auto chi = RandomVariable::indicator(Event::of(a, {"x", "y"}));
  auto ind = induced_space(chi, p3);
  CHECK(ind.weight("1") == Q("5/6"));
  CHECK(ind.weight("0") == Q("1/6"));
  CHECK(induced_space(RandomVariable::identity(a), p3) == p3);
  auto c = Alphabet::make({"c"});
  CHECK(induced_space(RandomVariable::constant(a, c, 0), p3).weight("c") == 1);
  CHECK(kind_of([&] { induced_space(chi, testing::u2()); }) == ErrorKind::AlphabetMismatch);

  auto contracted = induced_space(RandomVariable::contraction(a, a->index("z"), a->index("x")), p3);
  CHECK(contracted.alphabet()->symbols() == std::vector<std::string>{"x", "y"});
  CHECK(contracted.weight("x") == Q("2/3"));
}

TEST_CASE("product_space") {
  auto u2 = testing::u2();
  std::vector<FiniteProbabilitySpace> two{u2, u2};
  auto uu = product_space(two);
  REQUIRE(uu.size() == 4);
  for (const auto& w : uu.weights()) CHECK(w == Q("1/4"));
  CHECK(uu.alphabet()->symbols() == std::vector<std::string>{"0|0", "0|1", "1|0", "1|1"});

  auto p3 = testing::p3();
  std::vector<FiniteProbabilitySpace> one{p3};
  auto wrapped = product_space(one);
  CHECK(wrapped.weights() == p3.weights());
  CHECK(wrapped.alphabet()->factors().size() == 1);

  std::vector<FiniteProbabilitySpace> with_mass{uniform_space(Alphabet::make({"a"})), p3};
  auto pm = product_space(with_mass);
  CHECK(pm.weight("a|x") == Q("1/2"));
  CHECK(pm.weight("a|y") == Q("1/3"));
  CHECK(pm.weight("a|z") == Q("1/6"));
}

TEST_CASE("events_independent") {
  auto a = bit_pairs();
  auto u = uniform_space(a);
  auto first = Event::of(a, {"10", "11"});
  auto second = Event::of(a, {"01", "11"});
  std::vector<Event> ab{first, second};
  CHECK(events_independent(u, ab).independent);

  std::vector<Event> aa{first, first};
  auto v = events_independent(u, aa);
  CHECK_FALSE(v.independent);
  CHECK(v.witness == std::vector<std::size_t>{0, 1});
  CHECK(v.joint == Q("1/2"));
  CHECK(v.product == Q("1/4"));

  std::vector<Event> with_empty{Event(a, {}), second};
  CHECK(events_independent(u, with_empty).independent);

  // Pairwise independent but not mutually independent.
  auto xor_event = Event::of(a, {"01", "10"});
  std::vector<Event> three{first, second, xor_event};
  auto t = events_independent(u, three);
  CHECK_FALSE(t.independent);
  CHECK(t.witness == std::vector<std::size_t>{0, 1, 2});

  std::vector<Event> many(21, first);
  CHECK(kind_of([&] { events_independent(u, many); }) == ErrorKind::TooManyEvents);
}

TEST_CASE("rvs_independent") {
  auto a = bit_pairs();
  auto u = uniform_space(a);
  auto bits = binary_alphabet();
  auto first = RandomVariable::from_names(a, bits, {{"00", "0"}, {"01", "0"}, {"10", "1"}, {"11", "1"}});
  auto second = RandomVariable::from_names(a, bits, {{"00", "0"}, {"01", "1"}, {"10", "0"}, {"11", "1"}});
  auto x = RandomVariable::from_names(a, bits, {{"00", "0"}, {"01", "1"}, {"10", "1"}, {"11", "0"}});
  std::vector<RandomVariable> fs{first, second};
  CHECK(rvs_independent(u, fs).independent);
  std::vector<RandomVariable> fx{first, x};
  CHECK(rvs_independent(u, fx).independent);
  std::vector<RandomVariable> ff{first, first};
  auto v = rvs_independent(u, ff);
  CHECK_FALSE(v.independent);
  CHECK(v.witness == std::vector<Symbol>{0, 0});
  CHECK(v.joint == Q("1/2"));
  CHECK(v.product == Q("1/4"));
}

TEST_CASE("independence verdicts agree with brute force on small spaces") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 2 + trial % 3;
    auto p = random_space(rng, k, 6);
    auto a = p.alphabet();
    // Two or three random events.
    std::vector<Event> events;
    const std::size_t n = 2 + trial % 2;
    std::uniform_int_distribution<unsigned> mask(0, (1u << k) - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned m = mask(rng);
      std::vector<Symbol> members;
      for (Symbol s = 0; s < k; ++s) {
        if (m & (1u << s)) members.push_back(s);
      }
      events.emplace_back(a, members);
    }
    // Oracle: every subcollection of size >= 2.
    bool expected = true;
    for (unsigned pick = 0; pick < (1u << n); ++pick) {
      if (__builtin_popcount(pick) < 2) continue;
      Rational joint = 0;
      Rational prod = 1;
      for (Symbol s = 0; s < k; ++s) {
        bool all = true;
        for (std::size_t i = 0; i < n; ++i) {
          if ((pick >> i) & 1u) all = all && events[i].contains(s);
        }
        if (all) joint += p.weight(s);
      }
      for (std::size_t i = 0; i < n; ++i) {
        if ((pick >> i) & 1u) {
          Rational pi = 0;
          for (Symbol s : events[i].members()) pi += p.weight(s);
          prod *= pi;
        }
      }
      expected = expected && joint == prod;
    }
    CHECK(events_independent(p, events).independent == expected);

    std::vector<RandomVariable> chis;
    for (const auto& e : events) chis.push_back(RandomVariable::indicator(e));
    CHECK(rvs_independent(p, chis).independent == expected);

    // Joint law of the tuple against the product of marginals.
    auto joint = induced_space(RandomVariable::tuple(chis), p);
    std::vector<FiniteProbabilitySpace> marg;
    for (const auto& c : chis) marg.push_back(induced_space(c, p));
    CHECK((joint == product_space(marg)) == expected);
  }
}

TEST_CASE("conditional spaces sum to one") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = random_space(rng, 4, 12);
    std::vector<Symbol> members;
    for (Symbol s = 0; s < 4; ++s) {
      if (rng() & 1u) members.push_back(s);
    }
    Event b(p.alphabet(), members);
    if (event_prob(p, b) == 0) continue;
    auto pb = conditional_space(p, b);
    Rational total = 0;
    for (const auto& w : pb.weights()) total += w;
    CHECK(total == 1);
  }
}
