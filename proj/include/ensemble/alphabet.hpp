#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ensemble {

/// Index of a symbol inside its alphabet.
using Symbol = std::uint32_t;

/// Finite string over an alphabet, stored as symbol indices.
using Word = std::vector<Symbol>;

/// Separator used to render tuple symbols of product alphabets.
inline constexpr char kTupleSeparator = '|';

/// Nonempty ordered finite set of distinct symbol tokens. Immutable;
/// shared between spaces, events and streams through AlphabetPtr.
class Alphabet {
 public:
  /// User alphabets: symbols must be nonempty, distinct, free of whitespace
  /// and of the reserved tuple separator.
  static std::shared_ptr<const Alphabet> make(std::vector<std::string> symbols);

  /// Alphabets derived from existing ones (subsets, merged symbols): only
  /// nonemptiness and distinctness are checked, so tuple symbols survive.
  static std::shared_ptr<const Alphabet> derived(std::vector<std::string> symbols);

  /// A symbol name not present in this alphabet, based on `stem`.
  std::string fresh_name(std::string stem) const;

  /// Alphabet of tuples (a1|a2|...|an), enumerated in lexicographic order of
  /// the factor indices (last factor varies fastest).
  static std::shared_ptr<const Alphabet> product(
      std::span<const std::shared_ptr<const Alphabet>> factors);

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& name(Symbol s) const { return symbols_.at(s); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }

  bool contains(std::string_view name) const;
  /// Throws Error(UnknownSymbol).
  Symbol index(std::string_view name) const;

  /// Factor alphabets when this is a product alphabet, empty otherwise.
  const std::vector<std::shared_ptr<const Alphabet>>& factors() const noexcept {
    return factors_;
  }
  /// Decomposes a product symbol into its factor symbols.
  std::vector<Symbol> split(Symbol s) const;
  /// Inverse of split.
  Symbol join(std::span<const Symbol> parts) const;

  bool operator==(const Alphabet& other) const noexcept {
    return symbols_ == other.symbols_;
  }

  /// Renders a word; symbols are concatenated when every symbol is a single
  /// character, otherwise separated by commas.
  std::string render(std::span<const Symbol> word) const;
  /// Inverse of render. "~" denotes the empty string.
  Word parse_word(std::string_view text) const;

  bool single_char() const noexcept { return single_char_; }

 private:
  Alphabet() = default;
  void index_symbols();

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Symbol> lookup_;
  std::vector<std::shared_ptr<const Alphabet>> factors_;
  bool single_char_ = true;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

/// Throws Error(AlphabetMismatch) unless both alphabets have identical
/// symbol lists.
void require_same(const Alphabet& a, const Alphabet& b, std::string_view what);

/// The binary alphabet {0, 1}, in that order.
AlphabetPtr binary_alphabet();

/// Index of symbol "1" (resp. "0") in an alphabet that must be exactly
/// {0, 1} in some order. Throws Error(AlphabetMismatch) otherwise.
Symbol binary_one(const Alphabet& a);
Symbol binary_zero(const Alphabet& a);

}  // namespace ensemble
