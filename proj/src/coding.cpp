#include "ensemble/coding.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "ensemble/error.hpp"

namespace ensemble {

namespace {

using Dec = boost::multiprecision::cpp_dec_float_50;

Dec to_dec(const Rational& r) { return Dec(r.get_num().get_str()) / Dec(r.get_den().get_str()); }

std::string dec_string(const Dec& v) {
  std::ostringstream os;
  os << std::setprecision(50) << v;
  return os.str();
}

// Binary trie over the codewords; leaf nodes carry the source symbol.
class CodeTrie {
 public:
  explicit CodeTrie(const InstantaneousCode& code) {
    nodes_.push_back({{-1, -1}, -1});
    for (Symbol s = 0; s < code.codewords().size(); ++s) {
      std::size_t at = 0;
      for (char c : code.codeword(s)) {
        const int bit = c == '1' ? 1 : 0;
        if (nodes_[at].child[bit] < 0) {
          nodes_[at].child[bit] = static_cast<int>(nodes_.size());
          nodes_.push_back({{-1, -1}, -1});
        }
        at = static_cast<std::size_t>(nodes_[at].child[bit]);
      }
      nodes_[at].symbol = static_cast<long>(s);
    }
  }
  int child(std::size_t node, int bit) const { return nodes_[node].child[bit]; }
  long symbol(std::size_t node) const { return nodes_[node].symbol; }

 private:
  struct Node {
    std::array<int, 2> child;
    long symbol;
  };
  std::vector<Node> nodes_;
};

void require_valid(const InstantaneousCode& code) {
  const auto audit = validate_code(code);
  if (!audit.ok) throw Error(ErrorKind::InvalidArgument, "code is not instantaneous");
}

class EncodeStream final : public SymbolStream {
 public:
  EncodeStream(const InstantaneousCode& code, StreamPtr src)
      : SymbolStream(binary_alphabet()), src_(std::move(src)) {
    require_same(*code.source(), *src_->alphabet(), "stream alphabet differs from code source");
    for (const auto& w : code.codewords()) {
      Word bits;
      for (char c : w) bits.push_back(c == '1' ? 1 : 0);
      words_.push_back(std::move(bits));
    }
  }
  Symbol next() override {
    while (pending_.empty()) {
      const Symbol s = src_->next();
      if (s >= words_.size()) throw Error(ErrorKind::UnknownSymbol, "symbol has no codeword");
      pending_.insert(pending_.end(), words_[s].begin(), words_[s].end());
    }
    const Symbol b = pending_.front();
    pending_.pop_front();
    return b;
  }
  std::string origin() const override { return "encode(" + src_->origin() + ")"; }

 private:
  StreamPtr src_;
  std::vector<Word> words_;
  std::deque<Symbol> pending_;
};

class DecodeStream final : public SymbolStream {
 public:
  DecodeStream(const InstantaneousCode& code, StreamPtr bits)
      : SymbolStream(code.source()), trie_(code), src_(std::move(bits)), one_(binary_one(*src_->alphabet())) {}
  Symbol next() override {
    std::size_t node = 0;
    const std::uint64_t start = consumed_;
    for (;;) {
      const int bit = src_->next() == one_ ? 1 : 0;
      ++consumed_;
      const int child = trie_.child(node, bit);
      if (child < 0) {
        throw Error(ErrorKind::UnparsableBits, "no codeword matches at offset " + std::to_string(start));
      }
      node = static_cast<std::size_t>(child);
      if (trie_.symbol(node) >= 0) return static_cast<Symbol>(trie_.symbol(node));
    }
  }
  std::string origin() const override { return "decode(" + src_->origin() + ")"; }

 private:
  CodeTrie trie_;
  StreamPtr src_;
  Symbol one_;
  std::uint64_t consumed_ = 0;
};

}  // namespace

InstantaneousCode::InstantaneousCode(AlphabetPtr source, std::vector<std::string> codewords)
    : source_(std::move(source)), codewords_(std::move(codewords)) {
  if (codewords_.size() != source_->size()) {
    throw Error(ErrorKind::InvalidArgument, "code must assign a codeword to every symbol");
  }
  for (const auto& w : codewords_) {
    if (w.find_first_not_of("01") != std::string::npos) {
      throw Error(ErrorKind::InvalidArgument, "codeword '" + w + "' is not a binary string");
    }
  }
}

InstantaneousCode InstantaneousCode::from_map(AlphabetPtr source,
                                              const std::map<std::string, std::string>& codewords) {
  std::vector<std::string> words(source->size());
  std::vector<bool> seen(source->size(), false);
  for (const auto& [name, word] : codewords) {
    const Symbol s = source->index(name);
    words[s] = word;
    seen[s] = true;
  }
  for (Symbol s = 0; s < seen.size(); ++s) {
    if (!seen[s]) throw Error(ErrorKind::InvalidArgument, "no codeword for symbol '" + source->name(s) + "'");
  }
  return InstantaneousCode(std::move(source), std::move(words));
}

CodeAudit validate_code(const InstantaneousCode& code) {
  CodeAudit audit;
  audit.kraft_sum = 0;
  const auto& words = code.codewords();
  for (const auto& w : words) audit.kraft_sum += pow2_neg(static_cast<unsigned>(w.size()));

  for (Symbol s = 0; s < words.size(); ++s) {
    if (words[s].empty()) {
      audit.ok = false;
      audit.violation = CodeViolation::EmptyCodeword;
      audit.symbols = {s};
      return audit;
    }
  }
  std::vector<Symbol> order(words.size());
  std::iota(order.begin(), order.end(), Symbol{0});
  std::stable_sort(order.begin(), order.end(), [&](Symbol a, Symbol b) { return words[a] < words[b]; });
  // In lexicographic order a prefix relation always shows up between neighbours.
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& u = words[order[i - 1]];
    const auto& w = words[order[i]];
    if (u == w) {
      audit.ok = false;
      audit.violation = CodeViolation::DuplicateCodeword;
      audit.symbols = {std::min(order[i - 1], order[i]), std::max(order[i - 1], order[i])};
      return audit;
    }
  }
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& u = words[order[i - 1]];
    const auto& w = words[order[i]];
    if (w.compare(0, u.size(), u) == 0) {
      audit.ok = false;
      audit.violation = CodeViolation::PrefixViolation;
      audit.symbols = {order[i - 1], order[i]};
      return audit;
    }
  }
  return audit;
}

Entropy shannon_entropy(const FiniteProbabilitySpace& space) {
  Entropy h;
  Dec total = 0;
  Rational exact = 0;
  bool dyadic = true;
  for (const auto& w : space.weights()) {
    if (w == 0) continue;
    const Dec p = to_dec(w);
    total -= p * boost::multiprecision::log2(p);
    if (auto k = dyadic_exponent(w)) {
      exact += w * Rational(*k);
    } else {
      dyadic = false;
    }
  }
  if (dyadic) {
    h.exact = exact;
    total = to_dec(exact);
  }
  h.decimal = dec_string(total);
  h.bits = total.convert_to<double>();
  return h;
}

Rational avg_length(const FiniteProbabilitySpace& space, const InstantaneousCode& code) {
  require_same(*space.alphabet(), *code.source(), "space and code alphabets differ");
  Rational total = 0;
  for (Symbol s = 0; s < space.size(); ++s) {
    total += space.weight(s) * Rational(static_cast<unsigned long>(code.codeword(s).size()));
  }
  return total;
}

OptimalityVerdict is_abs_optimal(const FiniteProbabilitySpace& space, const InstantaneousCode& code) {
  require_same(*space.alphabet(), *code.source(), "space and code alphabets differ");
  OptimalityVerdict v;
  for (Symbol s = 0; s < space.size(); ++s) {
    const Rational dyadic = pow2_neg(static_cast<unsigned>(code.codeword(s).size()));
    if (space.weight(s) != dyadic) {
      v.optimal = false;
      v.mismatches.push_back({s, space.weight(s), dyadic, space.weight(s) == 0});
    }
  }
  return v;
}

InstantaneousCode build_dyadic_code(const FiniteProbabilitySpace& space) {
  std::vector<unsigned> lengths(space.size());
  for (Symbol s = 0; s < space.size(); ++s) {
    const auto k = dyadic_exponent(space.weight(s));
    if (!k) {
      throw Error(ErrorKind::NotDyadic, "weight " + to_string(space.weight(s)) + " of '" +
                                            space.alphabet()->name(s) + "' is not a power of 1/2");
    }
    lengths[s] = std::max(*k, 1u);
  }
  std::vector<Symbol> order(space.size());
  std::iota(order.begin(), order.end(), Symbol{0});
  std::stable_sort(order.begin(), order.end(), [&](Symbol a, Symbol b) { return lengths[a] < lengths[b]; });

  std::vector<std::string> words(space.size());
  BigInt next = 0;
  unsigned len = lengths[order.front()];
  for (Symbol s : order) {
    next <<= (lengths[s] - len);
    len = lengths[s];
    std::string w = next.get_str(2);
    words[s] = std::string(len - w.size(), '0') + w;
    ++next;
  }
  return InstantaneousCode(space.alphabet(), std::move(words));
}

FiniteProbabilitySpace code_q_space(const InstantaneousCode& code) {
  const auto& src = *code.source();
  std::vector<std::string> names = src.symbols();
  names.push_back(src.fresh_name("_fresh"));
  std::vector<Rational> weights;
  Rational kraft = 0;
  for (const auto& w : code.codewords()) {
    weights.push_back(pow2_neg(static_cast<unsigned>(w.size())));
    kraft += weights.back();
  }
  weights.push_back(1 - kraft);
  return FiniteProbabilitySpace(Alphabet::derived(std::move(names)), std::move(weights));
}

Word encode_word(const InstantaneousCode& code, std::span<const Symbol> symbols) {
  Word bits;
  for (Symbol s : symbols) {
    if (s >= code.codewords().size()) throw Error(ErrorKind::UnknownSymbol, "symbol has no codeword");
    for (char c : code.codeword(s)) bits.push_back(c == '1' ? 1 : 0);
  }
  return bits;
}

DecodeResult decode_word(const InstantaneousCode& code, std::span<const Symbol> bits) {
  const CodeTrie trie(code);
  DecodeResult out;
  std::size_t node = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw Error(ErrorKind::UnknownSymbol, "input is not a bit string");
    const int child = trie.child(node, static_cast<int>(bits[i]));
    if (child < 0) {
      throw Error(ErrorKind::UnparsableBits, "no codeword matches at offset " + std::to_string(start));
    }
    node = static_cast<std::size_t>(child);
    if (trie.symbol(node) >= 0) {
      out.symbols.push_back(static_cast<Symbol>(trie.symbol(node)));
      node = 0;
      start = i + 1;
    }
  }
  out.remainder.assign(bits.begin() + static_cast<std::ptrdiff_t>(start), bits.end());
  return out;
}

StreamPtr encode_stream(const InstantaneousCode& code, StreamPtr s) {
  require_valid(code);
  return std::make_unique<EncodeStream>(code, std::move(s));
}

StreamPtr decode_stream(const InstantaneousCode& code, StreamPtr bits) {
  require_valid(code);
  return std::make_unique<DecodeStream>(code, std::move(bits));
}

}  // namespace ensemble
