#include <catch_amalgamated.hpp>

#include <random>

#include "ensemble/error.hpp"
#include "ensemble/secrecy.hpp"
#include "secrecy_corpus.hpp"

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

EncryptionScheme xor_pad() {
  auto bits = binary_alphabet();
  return EncryptionScheme(bits, bits, uniform_space(bits), {{0, 1}, {1, 0}});
}

EncryptionScheme biased_bits() {
  auto bits = binary_alphabet();
  return EncryptionScheme(bits, bits, FiniteProbabilitySpace(bits, {Rational(1), Rational(0)}), {{0, 1}, {1, 0}});
}

}  // namespace

TEST_CASE("validate_scheme") {
  CHECK(validate_scheme(xor_pad()).ok);

  auto bits = binary_alphabet();
  auto constant = EncryptionScheme(bits, testing::named("c", 1), uniform_space(bits), {{0, 0}, {0, 0}});
  auto v = validate_scheme(constant);
  CHECK_FALSE(v.ok);
  REQUIRE(v.witness.has_value());
  CHECK(*v.witness == std::make_pair(Symbol{1}, Symbol{0}));

  auto one = testing::named("m", 1);
  auto trivial = EncryptionScheme(one, one, uniform_space(one), {{0}});
  CHECK(validate_scheme(trivial).ok);

  auto wrong_dec = EncryptionScheme(bits, bits, uniform_space(bits), {{0, 1}, {1, 0}}, {{0, 0}, {1, 1}});
  CHECK_FALSE(validate_scheme(wrong_dec).ok);

  CHECK(kind_of([&] { EncryptionScheme(bits, bits, uniform_space(bits), {{0, 1}}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { EncryptionScheme(bits, bits, uniform_space(bits), {{0, 1}, {1}}); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { EncryptionScheme(bits, bits, uniform_space(bits), {{0, 2}, {1, 0}}); }) ==
        ErrorKind::UnknownSymbol);
}

TEST_CASE("joint_distribution") {
  auto bits = binary_alphabet();
  auto jd = joint_distribution(xor_pad(), uniform_space(bits));
  for (const auto& row : jd.joint)
    for (const auto& v : row) CHECK(v == Q("1/4"));
  CHECK(jd.cipher_marginal == std::vector<Rational>{Q("1/2"), Q("1/2")});

  auto p3 = otp_scheme(3);
  auto point = FiniteProbabilitySpace(p3.messages(), {Rational(0), Rational(1), Rational(0)});
  auto jp = joint_distribution(p3, point);
  CHECK(jp.message_marginal == point.weights());

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    auto s = testing::random_scheme(rng);
    auto p = testing::grid_key_space(s.messages(), rng, false);
    auto j = joint_distribution(s, p);
    Rational total = 0;
    for (const auto& row : j.joint)
      for (const auto& v : row) total += v;
    REQUIRE(total == 1);
    for (Symbol m = 0; m < j.joint.size(); ++m) {
      Rational row = 0;
      for (const auto& v : j.joint[m]) row += v;
      REQUIRE(row == p.weight(m));
    }
  }
  CHECK(kind_of([&] { joint_distribution(xor_pad(), testing::p3()); }) == ErrorKind::AlphabetMismatch);
}

TEST_CASE("is_perfectly_secret examples") {
  for (unsigned m = 1; m <= 8; ++m) {
    auto otp = otp_scheme(m);
    auto v = is_perfectly_secret(otp);
    CHECK(v.secret);
    CHECK_FALSE(v.witness.has_value());
  }
  auto v = is_perfectly_secret(biased_bits());
  CHECK_FALSE(v.secret);
  REQUIRE(v.witness.has_value());
  CHECK(*v.witness == std::make_pair(Symbol{0}, Symbol{0}));
  CHECK(v.joint == Q("1/2"));
  CHECK(v.product == Q("1/4"));

  std::mt19937_64 rng(1);
  auto one = testing::named("m", 1);
  auto keys = testing::grid_key_space(testing::named("k", 3), rng, false);
  auto trivial = EncryptionScheme(one, testing::named("c", 3), keys, {{0, 2, 1}});
  CHECK(is_perfectly_secret(trivial).secret);
}

TEST_CASE("secrecy_under examples") {
  auto bits = binary_alphabet();
  CHECK(secrecy_under(xor_pad(), FiniteProbabilitySpace(bits, {Q("2/3"), Q("1/3")})).secret);
  CHECK_FALSE(secrecy_under(biased_bits(), uniform_space(bits)).secret);
  CHECK(secrecy_under(biased_bits(), FiniteProbabilitySpace(bits, {Q("1"), Q("0")})).secret);
  CHECK(kind_of([&] { secrecy_under(xor_pad(), testing::p3()); }) == ErrorKind::AlphabetMismatch);
}

TEST_CASE("otp_scheme") {
  auto two = otp_scheme(2);
  for (Symbol m = 0; m < 2; ++m)
    for (Symbol k = 0; k < 2; ++k) CHECK(two.enc(m, k) == (m ^ k));
  auto one = otp_scheme(1);
  CHECK(one.messages()->size() == 1);
  CHECK(validate_scheme(one).ok);
  CHECK(is_perfectly_secret(one).secret);
  for (unsigned m = 1; m <= 64; ++m) REQUIRE(validate_scheme(otp_scheme(m)).ok);
  CHECK(kind_of([] { otp_scheme(0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("uniform check agrees with the spanning set and with the definition") {
  std::mt19937_64 rng(31);
  std::size_t secret = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    auto s = testing::random_scheme(rng);
    const bool uniform = is_perfectly_secret(s).secret;
    bool spanning = true;
    for (const auto& p : testing::spanning_set(s.messages())) {
      const bool under = secrecy_under(s, p).secret;
      REQUIRE(under == testing::independent_by_definition(s, p));
      spanning = spanning && under;
    }
    REQUIRE(uniform == spanning);
    REQUIRE(uniform == testing::independent_by_definition(s, uniform_space(s.messages())));
    // A secret scheme stays secret under arbitrary message distributions.
    if (uniform) {
      ++secret;
      for (int i = 0; i < 3; ++i) {
        auto p = testing::grid_key_space(s.messages(), rng, false);
        REQUIRE(secrecy_under(s, p).secret);
      }
    }
  }
  CHECK(secret > 200);
  CHECK(secret < 1900);
}

TEST_CASE("perfect secrecy means the cipher law does not depend on the message") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    auto s = testing::random_scheme(rng);
    const auto g = cipher_given_message(s);
    bool same_rows = true;
    for (const auto& row : g) same_rows = same_rows && row == g.front();
    REQUIRE(same_rows == is_perfectly_secret(s).secret);
    for (const auto& row : g) {
      Rational total = 0;
      for (const auto& v : row) total += v;
      REQUIRE(total == 1);
    }
  }
}

TEST_CASE("key size report") {
  auto r = key_size_report(otp_scheme(5));
  CHECK(r.keys_with_positive_weight == 5);
  CHECK(r.messages == 5);
  CHECK(r.satisfied);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    auto s = testing::random_scheme(rng);
    auto k = key_size_report(s);
    REQUIRE(k.satisfied);
    if (validate_scheme(s).ok && is_perfectly_secret(s).secret) {
      REQUIRE(k.keys_with_positive_weight >= k.messages);
    }
  }
}

TEST_CASE("perturbed one-time pad keys break secrecy") {
  for (unsigned m = 2; m <= 16; ++m) {
    auto otp = otp_scheme(m);
    auto w = otp.key_space().weights();
    w[0] += Q("1/100");
    w[1] -= Q("1/100");
    auto skewed = otp.with_keys(FiniteProbabilitySpace(otp.keys(), w));
    auto v = is_perfectly_secret(skewed);
    REQUIRE_FALSE(v.secret);
    REQUIRE(v.witness.has_value());
    REQUIRE(v.joint != v.product);
  }
  CHECK(kind_of([] { otp_scheme(2).with_keys(testing::p3()); }) == ErrorKind::AlphabetMismatch);
}
