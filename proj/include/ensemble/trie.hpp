#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ensemble/alphabet.hpp"

namespace ensemble {

/// Trie over symbol indices with a fixed fan-out. Used for prefix queries on
/// level sets and for antichain reduction.
class PrefixTrie {
 public:
  explicit PrefixTrie(std::size_t fanout);

  void insert(std::span<const Symbol> word);

  /// True when some stored word is a prefix of `word` (equality included).
  bool covers(std::span<const Symbol> word) const;
  /// True when some stored word is a proper prefix of `word`.
  bool covers_strictly(std::span<const Symbol> word) const;
  /// Length of the shortest stored prefix of `word`, or -1.
  std::ptrdiff_t shortest_cover(std::span<const Symbol> word) const;

  /// Stored words that have no stored proper prefix, in lexicographic order.
  std::vector<Word> minimal_words() const;

  bool empty() const noexcept { return words_ == 0; }

 private:
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;
  std::uint32_t child(std::uint32_t node, Symbol s) const {
    return children_[static_cast<std::size_t>(node) * fanout_ + s];
  }

  std::size_t fanout_;
  std::vector<std::uint32_t> children_;
  std::vector<bool> terminal_;
  std::size_t words_ = 0;
};

}  // namespace ensemble
