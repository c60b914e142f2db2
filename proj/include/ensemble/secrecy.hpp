#pragma once

#include <optional>
#include <vector>

#include "ensemble/space.hpp"

namespace ensemble {

/// Finite encryption scheme (P_key, Enc, Dec) with extensional tables.
class EncryptionScheme {
 public:
  /// enc[m][k] = c. Dec is derived by inverting Enc per key; cipher texts not
  /// reached under a key decrypt to the first message.
  EncryptionScheme(AlphabetPtr messages, AlphabetPtr ciphers, FiniteProbabilitySpace key_space,
                   std::vector<std::vector<Symbol>> enc);
  /// Explicit Dec table dec[c][k] = m.
  EncryptionScheme(AlphabetPtr messages, AlphabetPtr ciphers, FiniteProbabilitySpace key_space,
                   std::vector<std::vector<Symbol>> enc, std::vector<std::vector<Symbol>> dec);

  const AlphabetPtr& messages() const noexcept { return messages_; }
  const AlphabetPtr& keys() const noexcept { return key_space_.alphabet(); }
  const AlphabetPtr& ciphers() const noexcept { return ciphers_; }
  const FiniteProbabilitySpace& key_space() const noexcept { return key_space_; }
  Symbol enc(Symbol m, Symbol k) const { return enc_.at(m).at(k); }
  Symbol dec(Symbol c, Symbol k) const { return dec_.at(c).at(k); }

  /// Same tables under another key distribution over the same keys.
  EncryptionScheme with_keys(FiniteProbabilitySpace key_space) const;

 private:
  AlphabetPtr messages_;
  AlphabetPtr ciphers_;
  FiniteProbabilitySpace key_space_;
  std::vector<std::vector<Symbol>> enc_;
  std::vector<std::vector<Symbol>> dec_;
};

struct SchemeValidation {
  bool ok = true;
  std::optional<std::pair<Symbol, Symbol>> witness;  // (m, k) with Dec(Enc(m,k),k) != m
};

SchemeValidation validate_scheme(const EncryptionScheme& scheme);

/// Exact tables from the three identities
///   P(M=m) = P_msg(m)
///   P(C=c) = sum_{m',k} P_msg(m') P_key(k) [Enc(m',k)=c]
///   P(M=m, C=c) = P_msg(m) sum_k P_key(k) [Enc(m,k)=c]
struct JointDistribution {
  std::vector<Rational> message_marginal;
  std::vector<Rational> cipher_marginal;
  std::vector<std::vector<Rational>> joint;  // [m][c]
};

JointDistribution joint_distribution(const EncryptionScheme& scheme,
                                     const FiniteProbabilitySpace& p_msg);

struct SecrecyVerdict {
  bool secret = true;
  std::optional<std::pair<Symbol, Symbol>> witness;  // (m, c)
  Rational joint;
  Rational product;
};

/// Independence of M and C under U_M x P_key, which decides perfect secrecy.
SecrecyVerdict is_perfectly_secret(const EncryptionScheme& scheme);
/// Independence of M and C under p_msg x P_key.
SecrecyVerdict secrecy_under(const EncryptionScheme& scheme, const FiniteProbabilitySpace& p_msg);

/// g(m, c) = sum_k P_key(k) [Enc(m,k)=c]; independent of m exactly when the
/// scheme is perfectly secret.
std::vector<std::vector<Rational>> cipher_given_message(const EncryptionScheme& scheme);

/// Auxiliary check: a correct scheme maps the messages injectively under
/// every key, so perfect secrecy forces #K >= #M (for messages with a positive
/// chance of each cipher). Reports both sizes.
struct KeySizeReport {
  std::size_t keys_with_positive_weight = 0;
  std::size_t messages = 0;
  bool satisfied = true;
};
KeySizeReport key_size_report(const EncryptionScheme& scheme);

/// Z_m with uniform keys, Enc = m + k mod m, Dec = c - k mod m.
EncryptionScheme otp_scheme(unsigned modulus);

}  // namespace ensemble
