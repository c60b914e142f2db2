#include "ensemble/alphabet.hpp"

#include <cctype>

#include "ensemble/error.hpp"

namespace ensemble {

namespace {

bool valid_user_symbol(const std::string& s) {
  if (s.empty() || s == "~") return false;
  for (char ch : s) {
    if (ch == kTupleSeparator || ch == ',' || ch == '#' ||
        std::isspace(static_cast<unsigned char>(ch))) {
      return false;
    }
  }
  return true;
}

}  // namespace

void Alphabet::index_symbols() {
  if (symbols_.empty()) throw Error(ErrorKind::InvalidAlphabet, "alphabet must be nonempty");
  lookup_.clear();
  single_char_ = true;
  for (Symbol i = 0; i < symbols_.size(); ++i) {
    if (!lookup_.emplace(symbols_[i], i).second) {
      throw Error(ErrorKind::InvalidAlphabet, "duplicate symbol '" + symbols_[i] + "'");
    }
    if (symbols_[i].size() != 1) single_char_ = false;
  }
}

AlphabetPtr Alphabet::make(std::vector<std::string> symbols) {
  for (const auto& s : symbols) {
    if (!valid_user_symbol(s)) {
      throw Error(ErrorKind::InvalidAlphabet, "invalid symbol '" + s + "'");
    }
  }
  auto a = std::shared_ptr<Alphabet>(new Alphabet());
  a->symbols_ = std::move(symbols);
  a->index_symbols();
  return a;
}

AlphabetPtr Alphabet::derived(std::vector<std::string> symbols) {
  auto a = std::shared_ptr<Alphabet>(new Alphabet());
  a->symbols_ = std::move(symbols);
  a->index_symbols();
  return a;
}

std::string Alphabet::fresh_name(std::string stem) const {
  while (contains(stem)) stem += '_';
  return stem;
}

AlphabetPtr Alphabet::product(std::span<const AlphabetPtr> factors) {
  if (factors.empty()) throw Error(ErrorKind::InvalidAlphabet, "product of no alphabets");
  std::vector<std::string> symbols{""};
  for (std::size_t f = 0; f < factors.size(); ++f) {
    std::vector<std::string> next;
    next.reserve(symbols.size() * factors[f]->size());
    for (const auto& prefix : symbols) {
      for (const auto& s : factors[f]->symbols()) {
        next.push_back(f == 0 ? s : prefix + kTupleSeparator + s);
      }
    }
    symbols = std::move(next);
  }
  auto a = std::shared_ptr<Alphabet>(new Alphabet());
  a->symbols_ = std::move(symbols);
  a->factors_.assign(factors.begin(), factors.end());
  a->index_symbols();
  return a;
}

bool Alphabet::contains(std::string_view name) const {
  return lookup_.find(std::string(name)) != lookup_.end();
}

Symbol Alphabet::index(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) {
    throw Error(ErrorKind::UnknownSymbol, "symbol '" + std::string(name) + "' not in alphabet");
  }
  return it->second;
}

std::vector<Symbol> Alphabet::split(Symbol s) const {
  if (factors_.empty()) throw Error(ErrorKind::InvalidArgument, "not a product alphabet");
  std::vector<Symbol> parts(factors_.size());
  for (std::size_t f = factors_.size(); f-- > 0;) {
    parts[f] = static_cast<Symbol>(s % factors_[f]->size());
    s = static_cast<Symbol>(s / factors_[f]->size());
  }
  return parts;
}

Symbol Alphabet::join(std::span<const Symbol> parts) const {
  if (parts.size() != factors_.size()) {
    throw Error(ErrorKind::InvalidArgument, "tuple arity does not match product alphabet");
  }
  Symbol s = 0;
  for (std::size_t f = 0; f < parts.size(); ++f) {
    s = static_cast<Symbol>(s * factors_[f]->size() + parts[f]);
  }
  return s;
}

std::string Alphabet::render(std::span<const Symbol> word) const {
  if (word.empty()) return "~";
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (!single_char_ && i > 0) out += ',';
    out += symbols_.at(word[i]);
  }
  return out;
}

Word Alphabet::parse_word(std::string_view text) const {
  Word w;
  if (text == "~" || text.empty()) return w;
  if (single_char_) {
    for (char ch : text) w.push_back(index(std::string_view(&ch, 1)));
    return w;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    w.push_back(index(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return w;
}

void require_same(const Alphabet& a, const Alphabet& b, std::string_view what) {
  if (&a != &b && !(a == b)) {
    throw Error(ErrorKind::AlphabetMismatch, std::string(what));
  }
}

AlphabetPtr binary_alphabet() {
  static const AlphabetPtr bits = Alphabet::make({"0", "1"});
  return bits;
}

Symbol binary_one(const Alphabet& a) {
  if (a.size() != 2 || !a.contains("0") || !a.contains("1")) {
    throw Error(ErrorKind::AlphabetMismatch, "expected the binary alphabet {0,1}");
  }
  return a.index("1");
}

Symbol binary_zero(const Alphabet& a) { return binary_one(a) == 0 ? 1 : 0; }

}  // namespace ensemble
