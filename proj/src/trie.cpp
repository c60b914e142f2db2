#include "ensemble/trie.hpp"

#include "ensemble/error.hpp"

namespace ensemble {

PrefixTrie::PrefixTrie(std::size_t fanout)
    : fanout_(fanout), children_(fanout, kNone), terminal_(1, false) {
  if (fanout == 0) throw Error(ErrorKind::InvalidArgument, "trie fan-out must be positive");
}

void PrefixTrie::insert(std::span<const Symbol> word) {
  std::uint32_t node = 0;
  for (Symbol s : word) {
    if (s >= fanout_) throw Error(ErrorKind::UnknownSymbol, "symbol index out of range");
    auto slot = static_cast<std::size_t>(node) * fanout_ + s;
    if (children_[slot] == kNone) {
      children_[slot] = static_cast<std::uint32_t>(terminal_.size());
      terminal_.push_back(false);
      children_.resize(children_.size() + fanout_, kNone);
    }
    node = children_[slot];
  }
  if (!terminal_[node]) ++words_;
  terminal_[node] = true;
}

std::ptrdiff_t PrefixTrie::shortest_cover(std::span<const Symbol> word) const {
  std::uint32_t node = 0;
  if (terminal_[0]) return 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= fanout_) return -1;
    node = child(node, word[i]);
    if (node == kNone) return -1;
    if (terminal_[node]) return static_cast<std::ptrdiff_t>(i + 1);
  }
  return -1;
}

bool PrefixTrie::covers(std::span<const Symbol> word) const { return shortest_cover(word) >= 0; }

bool PrefixTrie::covers_strictly(std::span<const Symbol> word) const {
  auto len = shortest_cover(word);
  return len >= 0 && static_cast<std::size_t>(len) < word.size();
}

std::vector<Word> PrefixTrie::minimal_words() const {
  std::vector<Word> out;
  Word path;
  // Depth-first, children in symbol order, stopping at the first terminal.
  struct Frame {
    std::uint32_t node;
    Symbol next;
  };
  std::vector<Frame> stack{{0, 0}};
  if (terminal_[0]) return {Word{}};
  while (!stack.empty()) {
    auto& top = stack.back();
    if (top.next == fanout_) {
      stack.pop_back();
      if (!path.empty()) path.pop_back();
      continue;
    }
    Symbol s = top.next++;
    std::uint32_t c = child(top.node, s);
    if (c == kNone) continue;
    path.push_back(s);
    if (terminal_[c]) {
      out.push_back(path);
      path.pop_back();
      continue;
    }
    stack.push_back({c, 0});
  }
  return out;
}

}  // namespace ensemble
