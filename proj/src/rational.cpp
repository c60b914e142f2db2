#include "ensemble/rational.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "ensemble/error.hpp"

namespace ensemble {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw Error(ErrorKind::ParseError, "malformed rational '" + std::string(whole) + "'");
  }
  BigInt value(std::string(s), 10);
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      int_part.remove_prefix(1);
    }
    if ((!int_part.empty() && !all_digits(int_part)) || !all_digits(frac)) {
      throw Error(ErrorKind::ParseError, "malformed decimal '" + std::string(text) + "'");
    }
    BigInt num(std::string(int_part.empty() ? "0" : int_part) + std::string(frac), 10);
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational r(negative ? BigInt(-num) : num, den);
    r.canonicalize();
    return r;
  }
  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal(const Rational& value, int digits) {
  using Dec = boost::multiprecision::cpp_dec_float_50;
  Dec num(value.get_num().get_str());
  Dec den(value.get_den().get_str());
  Dec q = num / den;
  return q.str(digits, std::ios_base::fmtflags(0));
}

double to_double(const Rational& value) { return value.get_d(); }

Rational pow2_neg(unsigned k) {
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, k);
  return Rational(BigInt(1), den);
}

std::optional<unsigned> dyadic_exponent(const Rational& value) {
  if (value.get_num() != 1) return std::nullopt;
  const BigInt& den = value.get_den();
  if (mpz_popcount(den.get_mpz_t()) != 1) return std::nullopt;
  return static_cast<unsigned>(mpz_scan1(den.get_mpz_t(), 0));
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  result.canonicalize();
  return result;
}

}  // namespace ensemble
