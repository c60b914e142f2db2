#include "ensemble/selection.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "ensemble/error.hpp"

namespace ensemble {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view context) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::ParseError,
                "expected an integer in '" + std::string(context) + "', got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::uint64_t> parse_list(std::string_view text, std::string_view context) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    auto v = parse_int(text.substr(start, comma - start), context);
    if (v < 1) throw Error(ErrorKind::ParseError, "indices are 1-based in '" + std::string(context) + "'");
    out.push_back(static_cast<std::uint64_t>(v));
    start = comma + 1;
  }
  return out;
}

}  // namespace

Injection Injection::identity() { return affine(1, 0); }

Injection Injection::affine(std::int64_t a, std::int64_t b) {
  if (a < 1 || a + b < 1) {
    throw Error(ErrorKind::NotInjective, "affine map needs a >= 1 and a + b >= 1");
  }
  Injection f;
  f.kind_ = Kind::Affine;
  f.a_ = a;
  f.b_ = b;
  if (a == 1 && b == 0) {
    f.description_ = "identity";
  } else {
    f.description_ = "affine:" + std::to_string(a) + "," + std::to_string(b);
  }
  return f;
}

Injection Injection::table(std::vector<std::uint64_t> values) {
  std::unordered_set<std::uint64_t> seen;
  for (auto v : values) {
    if (v == 0) throw Error(ErrorKind::InvalidArgument, "injection values are 1-based");
    if (!seen.insert(v).second) {
      throw Error(ErrorKind::NotInjective, "index " + std::to_string(v) + " repeats");
    }
  }
  Injection f;
  f.kind_ = Kind::Table;
  f.description_ = "table:";
  for (std::size_t i = 0; i < values.size(); ++i) {
    f.description_ += (i ? "," : "") + std::to_string(values[i]);
  }
  f.values_ = std::move(values);
  return f;
}

Injection Injection::blocks(std::vector<std::uint64_t> perm) {
  auto sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i + 1) {
      throw Error(ErrorKind::NotInjective, "block map must permute {1..m}");
    }
  }
  if (perm.empty()) throw Error(ErrorKind::InvalidArgument, "empty block permutation");
  Injection f = table(perm);
  f.kind_ = Kind::Blocks;
  f.description_.replace(0, 5, "blocks");
  return f;
}

Injection Injection::parse(std::string_view spec) {
  auto colon = spec.find(':');
  std::string_view head = spec.substr(0, colon);
  std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (head == "identity") return identity();
  if (head == "even") return affine(2, 0);
  if (head == "odd") return affine(2, -1);
  if (head == "shift") return affine(1, parse_int(arg, spec));
  if (head == "affine") {
    auto comma = arg.find(',');
    if (comma == std::string_view::npos) throw Error(ErrorKind::ParseError, "affine:<a>,<b> expected");
    return affine(parse_int(arg.substr(0, comma), spec), parse_int(arg.substr(comma + 1), spec));
  }
  if (head == "table") return table(parse_list(arg, spec));
  if (head == "blocks") return blocks(parse_list(arg, spec));
  throw Error(ErrorKind::ParseError, "unknown injection '" + std::string(spec) + "'");
}

std::uint64_t Injection::operator()(std::uint64_t k) const {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "injection argument is 1-based");
  switch (kind_) {
    case Kind::Affine:
      return static_cast<std::uint64_t>(a_ * static_cast<std::int64_t>(k) + b_);
    case Kind::Table:
      if (k > values_.size()) {
        throw Error(ErrorKind::InvalidArgument,
                    "table injection undefined at " + std::to_string(k));
      }
      return values_[k - 1];
    case Kind::Blocks: {
      const std::uint64_t m = values_.size();
      const std::uint64_t block = (k - 1) / m;
      return block * m + values_[(k - 1) % m];
    }
  }
  return k;
}

std::optional<std::uint64_t> Injection::domain_limit() const {
  if (kind_ == Kind::Table) return values_.size();
  return std::nullopt;
}

bool Injection::monotone() const noexcept { return kind_ == Kind::Affine; }

// --- selection rules -------------------------------------------------------

struct SelectionRule::Node {
  enum class Op { True, False, Undef, LenMod, Suffix, LenLess, LenAtLeast, Not, And, Or };
  Op op = Op::True;
  std::uint64_t m = 0;
  std::uint64_t r = 0;
  Word word;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const SelectionRule::Node>;
using Op = SelectionRule::Node::Op;

std::optional<bool> eval(const SelectionRule::Node& n, std::span<const Symbol> prefix) {
  switch (n.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Undef: return std::nullopt;
    case Op::LenMod: return prefix.size() % n.m == n.r;
    case Op::Suffix:
      if (prefix.size() < n.word.size()) return false;
      return std::equal(n.word.begin(), n.word.end(), prefix.end() - static_cast<std::ptrdiff_t>(n.word.size()));
    case Op::LenLess: return prefix.size() < n.m;
    case Op::LenAtLeast: return prefix.size() >= n.m;
    case Op::Not: {
      auto v = eval(*n.lhs, prefix);
      if (!v) return std::nullopt;
      return !*v;
    }
    case Op::And: {
      auto a = eval(*n.lhs, prefix);
      if (!a) return std::nullopt;
      if (!*a) return false;
      return eval(*n.rhs, prefix);
    }
    case Op::Or: {
      auto a = eval(*n.lhs, prefix);
      if (!a) return std::nullopt;
      if (*a) return true;
      return eval(*n.rhs, prefix);
    }
  }
  return std::nullopt;
}

class RuleParser {
 public:
  RuleParser(std::string_view text, const Alphabet& alphabet) : text_(text), alphabet_(alphabet) {}

  NodePtr parse() {
    auto n = parse_or();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::ParseError,
                "selection rule '" + std::string(text_) + "': " + why + " at offset " + std::to_string(pos_));
  }
  void skip_space() {
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }
  bool eat(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  static NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<SelectionRule::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }
  std::uint64_t number() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    if (start == pos_) fail("expected a number");
    return static_cast<std::uint64_t>(parse_int(text_.substr(start, pos_ - start), text_));
  }
  std::string_view token() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != ')' && text_[pos_] != '&' &&
           text_[pos_] != '|') {
      ++pos_;
    }
    if (start == pos_) fail("expected a symbol");
    return text_.substr(start, pos_ - start);
  }
  NodePtr parse_or() {
    auto lhs = parse_and();
    while (eat("||")) lhs = make(Op::Or, lhs, parse_and());
    return lhs;
  }
  NodePtr parse_and() {
    auto lhs = parse_unary();
    while (eat("&&")) lhs = make(Op::And, lhs, parse_unary());
    return lhs;
  }
  NodePtr parse_unary() {
    if (eat("!")) return make(Op::Not, parse_unary());
    if (eat("(")) {
      auto n = parse_or();
      if (!eat(")")) fail("expected ')'");
      return n;
    }
    if (eat("true")) return make(Op::True);
    if (eat("false")) return make(Op::False);
    if (eat("undef")) return make(Op::Undef);
    if (eat("len")) {
      auto n = std::make_shared<SelectionRule::Node>();
      if (eat("%")) {
        n->op = Op::LenMod;
        n->m = number();
        if (n->m == 0) fail("modulus must be positive");
        if (!eat("==")) fail("expected '=='");
        n->r = number();
      } else if (eat(">=")) {
        n->op = Op::LenAtLeast;
        n->m = number();
      } else if (eat("<")) {
        n->op = Op::LenLess;
        n->m = number();
      } else {
        fail("expected '%', '<' or '>=' after len");
      }
      return n;
    }
    if (eat("last")) {
      if (!eat("==")) fail("expected '=='");
      auto n = std::make_shared<SelectionRule::Node>();
      n->op = Op::Suffix;
      n->word = {alphabet_.index(token())};
      return n;
    }
    if (eat("suffix")) {
      if (!eat("==")) fail("expected '=='");
      auto n = std::make_shared<SelectionRule::Node>();
      n->op = Op::Suffix;
      n->word = alphabet_.parse_word(token());
      return n;
    }
    fail("unexpected token");
  }

  std::string_view text_;
  const Alphabet& alphabet_;
  std::size_t pos_ = 0;
};

std::string expand_builtin(std::string_view spec) {
  if (spec == "always") return "true";
  if (spec == "never") return "false";
  if (spec == "even") return "len%2==0";
  if (spec == "odd") return "len%2==1";
  if (spec.starts_with("after:")) return "last==" + std::string(spec.substr(6));
  if (spec.starts_with("stall-at:")) {
    auto n = std::string(spec.substr(9));
    return "len<" + n + " || undef";
  }
  return std::string(spec);
}

}  // namespace

SelectionRule SelectionRule::parse(std::string_view spec, const AlphabetPtr& alphabet) {
  SelectionRule rule;
  rule.alphabet_ = alphabet;
  rule.description_ = std::string(spec);
  auto expr = expand_builtin(spec);
  rule.root_ = RuleParser(expr, *alphabet).parse();
  return rule;
}

SelectionRule SelectionRule::always(const AlphabetPtr& alphabet) { return parse("always", alphabet); }

std::optional<bool> SelectionRule::decide(std::span<const Symbol> prefix) const {
  return eval(*root_, prefix);
}

}  // namespace ensemble
