#include "ensemble/secrecy.hpp"

#include <string>

#include "ensemble/error.hpp"

namespace ensemble {

namespace {

void check_table(const std::vector<std::vector<Symbol>>& table, std::size_t rows, std::size_t cols,
                 std::size_t range, const char* what) {
  if (table.size() != rows) throw Error(ErrorKind::InvalidArgument, std::string(what) + " table has wrong row count");
  for (const auto& row : table) {
    if (row.size() != cols) throw Error(ErrorKind::InvalidArgument, std::string(what) + " table has wrong column count");
    for (Symbol v : row) {
      if (v >= range) throw Error(ErrorKind::UnknownSymbol, std::string(what) + " table value out of range");
    }
  }
}

std::vector<std::vector<Symbol>> invert(const std::vector<std::vector<Symbol>>& enc, std::size_t ciphers,
                                        std::size_t keys) {
  std::vector<std::vector<Symbol>> dec(ciphers, std::vector<Symbol>(keys, 0));
  std::vector<std::vector<bool>> set(ciphers, std::vector<bool>(keys, false));
  for (Symbol m = 0; m < enc.size(); ++m) {
    for (Symbol k = 0; k < keys; ++k) {
      const Symbol c = enc[m][k];
      if (!set[c][k]) {
        dec[c][k] = m;
        set[c][k] = true;
      }
    }
  }
  return dec;
}

}  // namespace

EncryptionScheme::EncryptionScheme(AlphabetPtr messages, AlphabetPtr ciphers, FiniteProbabilitySpace key_space,
                                   std::vector<std::vector<Symbol>> enc)
    : messages_(std::move(messages)),
      ciphers_(std::move(ciphers)),
      key_space_(std::move(key_space)),
      enc_(std::move(enc)) {
  check_table(enc_, messages_->size(), key_space_.size(), ciphers_->size(), "enc");
  dec_ = invert(enc_, ciphers_->size(), key_space_.size());
}

EncryptionScheme::EncryptionScheme(AlphabetPtr messages, AlphabetPtr ciphers, FiniteProbabilitySpace key_space,
                                   std::vector<std::vector<Symbol>> enc, std::vector<std::vector<Symbol>> dec)
    : messages_(std::move(messages)),
      ciphers_(std::move(ciphers)),
      key_space_(std::move(key_space)),
      enc_(std::move(enc)),
      dec_(std::move(dec)) {
  check_table(enc_, messages_->size(), key_space_.size(), ciphers_->size(), "enc");
  check_table(dec_, ciphers_->size(), key_space_.size(), messages_->size(), "dec");
}

EncryptionScheme EncryptionScheme::with_keys(FiniteProbabilitySpace key_space) const {
  require_same(*key_space.alphabet(), *keys(), "new key space must use the same keys");
  return EncryptionScheme(messages_, ciphers_, std::move(key_space), enc_, dec_);
}

SchemeValidation validate_scheme(const EncryptionScheme& scheme) {
  for (Symbol m = 0; m < scheme.messages()->size(); ++m) {
    for (Symbol k = 0; k < scheme.keys()->size(); ++k) {
      if (scheme.dec(scheme.enc(m, k), k) != m) return {false, std::make_pair(m, k)};
    }
  }
  return {};
}

std::vector<std::vector<Rational>> cipher_given_message(const EncryptionScheme& scheme) {
  const auto& pk = scheme.key_space();
  std::vector<std::vector<Rational>> g(scheme.messages()->size(),
                                       std::vector<Rational>(scheme.ciphers()->size(), Rational(0)));
  for (Symbol m = 0; m < g.size(); ++m) {
    for (Symbol k = 0; k < pk.size(); ++k) g[m][scheme.enc(m, k)] += pk.weight(k);
  }
  return g;
}

JointDistribution joint_distribution(const EncryptionScheme& scheme, const FiniteProbabilitySpace& p_msg) {
  require_same(*p_msg.alphabet(), *scheme.messages(), "message distribution alphabet");
  const auto g = cipher_given_message(scheme);
  const std::size_t nm = scheme.messages()->size();
  const std::size_t nc = scheme.ciphers()->size();
  JointDistribution out;
  out.message_marginal = p_msg.weights();
  out.cipher_marginal.assign(nc, Rational(0));
  out.joint.assign(nm, std::vector<Rational>(nc, Rational(0)));
  for (Symbol m = 0; m < nm; ++m) {
    for (Symbol c = 0; c < nc; ++c) {
      out.joint[m][c] = p_msg.weight(m) * g[m][c];
      out.cipher_marginal[c] += out.joint[m][c];
    }
  }
  return out;
}

SecrecyVerdict secrecy_under(const EncryptionScheme& scheme, const FiniteProbabilitySpace& p_msg) {
  const auto jd = joint_distribution(scheme, p_msg);
  SecrecyVerdict v;
  for (Symbol m = 0; m < jd.joint.size(); ++m) {
    for (Symbol c = 0; c < jd.cipher_marginal.size(); ++c) {
      const Rational product = jd.message_marginal[m] * jd.cipher_marginal[c];
      if (jd.joint[m][c] != product) {
        v.secret = false;
        v.witness = std::make_pair(m, c);
        v.joint = jd.joint[m][c];
        v.product = product;
        return v;
      }
    }
  }
  return v;
}

SecrecyVerdict is_perfectly_secret(const EncryptionScheme& scheme) {
  return secrecy_under(scheme, uniform_space(scheme.messages()));
}

KeySizeReport key_size_report(const EncryptionScheme& scheme) {
  KeySizeReport r;
  for (const auto& w : scheme.key_space().weights()) {
    if (w > 0) ++r.keys_with_positive_weight;
  }
  r.messages = scheme.messages()->size();
  const bool applies = validate_scheme(scheme).ok && is_perfectly_secret(scheme).secret;
  r.satisfied = !applies || r.keys_with_positive_weight >= r.messages;
  return r;
}

EncryptionScheme otp_scheme(unsigned modulus) {
  if (modulus == 0) throw Error(ErrorKind::InvalidArgument, "modulus must be at least 1");
  std::vector<std::string> names;
  for (unsigned i = 0; i < modulus; ++i) names.push_back(std::to_string(i));
  const auto z = Alphabet::make(names);
  std::vector<std::vector<Symbol>> enc(modulus, std::vector<Symbol>(modulus));
  std::vector<std::vector<Symbol>> dec(modulus, std::vector<Symbol>(modulus));
  for (unsigned a = 0; a < modulus; ++a) {
    for (unsigned k = 0; k < modulus; ++k) {
      enc[a][k] = (a + k) % modulus;
      dec[a][k] = (a + modulus - k) % modulus;
    }
  }
  return EncryptionScheme(z, z, uniform_space(z), std::move(enc), std::move(dec));
}

}  // namespace ensemble
