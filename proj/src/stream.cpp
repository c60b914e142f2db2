#include "ensemble/stream.hpp"

#include <deque>

#include "ensemble/error.hpp"

namespace ensemble {

namespace {

std::string describe_space(const FiniteProbabilitySpace& space) {
  std::string out = "{";
  for (Symbol s = 0; s < space.size(); ++s) {
    if (s) out += ",";
    out += space.alphabet()->name(s) + ":" + to_string(space.weight(s));
  }
  return out + "}";
}

class PseudoEnsembleStream final : public SymbolStream {
 public:
  PseudoEnsembleStream(const FiniteProbabilitySpace& space, std::uint64_t seed)
      : SymbolStream(space.alphabet()), rng_(seed) {
    origin_ = "pseudo_ensemble(" + describe_space(space) + ",seed=" + std::to_string(seed) + ")";
    Rational cumulative(0);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, 64);
    for (Symbol s = 0; s < space.size(); ++s) {
      cumulative += space.weight(s);
      // ceil(cumulative * 2^64), at most 2^64.
      BigInt num = cumulative.get_num() * scale;
      BigInt t;
      mpz_cdiv_q(t.get_mpz_t(), num.get_mpz_t(), cumulative.get_den_mpz_t());
      unsigned __int128 v = 0;
      if (t >= scale) {
        v = static_cast<unsigned __int128>(1) << 64;
      } else {
        BigInt hi = t >> 32;
        BigInt lo = t - (hi << 32);
        v = (static_cast<unsigned __int128>(hi.get_ui()) << 32) | lo.get_ui();
      }
      thresholds_.push_back(v);
    }
  }

  Symbol next() override {
    const unsigned __int128 u = rng_.next();
    for (Symbol s = 0; s < thresholds_.size(); ++s) {
      if (u < thresholds_[s]) return s;
    }
    return static_cast<Symbol>(thresholds_.size() - 1);
  }
  std::string origin() const override { return origin_; }

 private:
  SplitMix64 rng_;
  std::vector<unsigned __int128> thresholds_;
  std::string origin_;
};

class WordStream final : public SymbolStream {
 public:
  WordStream(AlphabetPtr alphabet, Word word, std::string origin, bool cyclic)
      : SymbolStream(std::move(alphabet)), word_(std::move(word)), origin_(std::move(origin)), cyclic_(cyclic) {
    for (Symbol s : word_) {
      if (s >= this->alphabet()->size()) throw Error(ErrorKind::UnknownSymbol, "word symbol out of range");
    }
    if (cyclic_ && word_.empty()) throw Error(ErrorKind::InvalidArgument, "cannot cycle an empty word");
  }
  Symbol next() override {
    if (pos_ == word_.size()) {
      if (!cyclic_) throw StreamError(ErrorKind::Starved, "finite input exhausted", pos_);
      pos_ = 0;
    }
    return word_[pos_++];
  }
  std::string origin() const override { return origin_; }

 private:
  Word word_;
  std::string origin_;
  bool cyclic_;
  std::size_t pos_ = 0;
};

class MapStream final : public SymbolStream {
 public:
  MapStream(RandomVariable x, StreamPtr src)
      : SymbolStream(x.target()), x_(std::move(x)), src_(std::move(src)) {}
  Symbol next() override { return x_(src_->next()); }
  std::string origin() const override { return "map(" + src_->origin() + ")"; }

 private:
  RandomVariable x_;
  StreamPtr src_;
};

class FilterStream final : public SymbolStream {
 public:
  FilterStream(const Event& b, StreamPtr src, std::uint64_t budget)
      : SymbolStream(b.as_alphabet()), src_(std::move(src)), budget_(budget) {
    reindex_.assign(b.alphabet()->size(), kDrop);
    for (std::size_t i = 0; i < b.members().size(); ++i) reindex_[b.members()[i]] = static_cast<Symbol>(i);
  }
  Symbol next() override {
    while (scanned_ < budget_) {
      Symbol s = src_->next();
      ++scanned_;
      if (reindex_[s] != kDrop) return reindex_[s];
    }
    throw StreamError(ErrorKind::Starved, "filter budget exhausted", scanned_);
  }
  std::string origin() const override { return "filter(" + src_->origin() + ")"; }

 private:
  static constexpr Symbol kDrop = 0xFFFFFFFFu;
  StreamPtr src_;
  std::uint64_t budget_;
  std::uint64_t scanned_ = 0;
  std::vector<Symbol> reindex_;
};

class ShuffleStream final : public SymbolStream {
 public:
  ShuffleStream(Injection f, StreamPtr src)
      : SymbolStream(src->alphabet()), f_(std::move(f)), src_(std::move(src)) {}
  Symbol next() override {
    const std::uint64_t idx = f_(++k_);
    if (idx <= base_ || (idx - base_ <= buffer_.size() && buffer_[idx - base_ - 1].second)) {
      throw Error(ErrorKind::NotInjective, "index " + std::to_string(idx) + " requested twice");
    }
    while (base_ + buffer_.size() < idx) buffer_.emplace_back(src_->next(), false);
    auto& slot = buffer_[idx - base_ - 1];
    slot.second = true;
    const Symbol out = slot.first;
    // Monotone injections never revisit indices below idx.
    while (!buffer_.empty() && (buffer_.front().second || (f_.monotone() && base_ < idx))) {
      buffer_.pop_front();
      ++base_;
    }
    return out;
  }
  std::string origin() const override { return "shuffle[" + f_.describe() + "](" + src_->origin() + ")"; }

 private:
  Injection f_;
  StreamPtr src_;
  std::deque<std::pair<Symbol, bool>> buffer_;  // (symbol, already emitted)
  std::uint64_t base_ = 0;  // source symbols dropped from the front
  std::uint64_t k_ = 0;
};

class SelectStream final : public SymbolStream {
 public:
  SelectStream(SelectionRule rule, StreamPtr src, std::uint64_t budget)
      : SymbolStream(src->alphabet()), rule_(std::move(rule)), src_(std::move(src)), budget_(budget) {
    require_same(*rule_.alphabet(), *alphabet(), "selection rule alphabet differs from stream");
  }
  Symbol next() override {
    for (;;) {
      auto decision = rule_.decide(history_);
      if (!decision) {
        throw StreamError(ErrorKind::Stalled,
                          "selection rule undefined on prefix of length " + std::to_string(history_.size()),
                          history_.size());
      }
      if (history_.size() >= budget_) {
        throw StreamError(ErrorKind::Starved, "selection budget exhausted", history_.size());
      }
      Symbol s = src_->next();
      history_.push_back(s);
      if (*decision) return s;
    }
  }
  std::string origin() const override {
    return "select[" + rule_.describe() + "](" + src_->origin() + ")";
  }

 private:
  SelectionRule rule_;
  StreamPtr src_;
  std::uint64_t budget_;
  Word history_;
};

class ProductStream final : public SymbolStream {
 public:
  ProductStream(AlphabetPtr alphabet, std::vector<StreamPtr> parts)
      : SymbolStream(std::move(alphabet)), parts_(std::move(parts)), values_(parts_.size()) {}
  Symbol next() override {
    for (std::size_t i = 0; i < parts_.size(); ++i) values_[i] = parts_[i]->next();
    return alphabet()->join(values_);
  }
  std::string origin() const override {
    std::string out = "product(";
    for (std::size_t i = 0; i < parts_.size(); ++i) out += (i ? "," : "") + parts_[i]->origin();
    return out + ")";
  }

 private:
  std::vector<StreamPtr> parts_;
  std::vector<Symbol> values_;
};

class InterleaveStream final : public SymbolStream {
 public:
  InterleaveStream(StreamPtr a, StreamPtr b)
      : SymbolStream(a->alphabet()), a_(std::move(a)), b_(std::move(b)) {
    require_same(*a_->alphabet(), *b_->alphabet(), "interleaved streams need one alphabet");
  }
  Symbol next() override {
    turn_ = !turn_;
    return turn_ ? a_->next() : b_->next();
  }
  std::string origin() const override { return "interleave(" + a_->origin() + "," + b_->origin() + ")"; }

 private:
  StreamPtr a_;
  StreamPtr b_;
  bool turn_ = false;
};

class VonNeumannStream final : public SymbolStream {
 public:
  VonNeumannStream(StreamPtr src, std::uint64_t budget)
      : SymbolStream(binary_alphabet()), src_(std::move(src)), budget_(budget) {
    one_ = binary_one(*src_->alphabet());
  }
  Symbol next() override {
    while (scanned_ + 2 <= budget_) {
      Symbol first = src_->next();
      Symbol second = src_->next();
      scanned_ += 2;
      if (first != second) return first == one_ ? 1 : 0;
    }
    throw StreamError(ErrorKind::Starved, "von Neumann budget exhausted", scanned_);
  }
  std::string origin() const override { return "von_neumann(" + src_->origin() + ")"; }

 private:
  StreamPtr src_;
  std::uint64_t budget_;
  std::uint64_t scanned_ = 0;
  Symbol one_ = 1;
};

}  // namespace

StreamPtr pseudo_ensemble(const FiniteProbabilitySpace& space, std::uint64_t seed) {
  return std::make_unique<PseudoEnsembleStream>(space, seed);
}

StreamPtr from_word(AlphabetPtr alphabet, Word word, std::string origin) {
  return std::make_unique<WordStream>(std::move(alphabet), std::move(word), std::move(origin), false);
}

StreamPtr from_prefix(const FinitePrefix& prefix) {
  return from_word(prefix.alphabet, prefix.symbols, prefix.origin);
}

StreamPtr cycle(AlphabetPtr alphabet, Word period) {
  auto origin = "cycle(" + alphabet->render(period) + ")";
  return std::make_unique<WordStream>(std::move(alphabet), std::move(period), std::move(origin), true);
}

StreamPtr map_rv(const RandomVariable& x, StreamPtr s) {
  require_same(*x.source(), *s->alphabet(), "random variable source differs from stream alphabet");
  return std::make_unique<MapStream>(x, std::move(s));
}

StreamPtr filter_event(const Event& b, StreamPtr s, std::uint64_t budget) {
  require_same(*b.alphabet(), *s->alphabet(), "event alphabet differs from stream alphabet");
  if (b.empty()) throw Error(ErrorKind::InvalidArgument, "filter event must be nonempty");
  return std::make_unique<FilterStream>(b, std::move(s), budget);
}

StreamPtr shuffle(const Injection& f, StreamPtr s) {
  return std::make_unique<ShuffleStream>(f, std::move(s));
}

StreamPtr select(const SelectionRule& rule, StreamPtr s, std::uint64_t budget) {
  return std::make_unique<SelectStream>(rule, std::move(s), budget);
}

StreamPtr product_stream(std::vector<StreamPtr> streams) {
  if (streams.empty()) throw Error(ErrorKind::InvalidArgument, "product of no streams");
  std::vector<AlphabetPtr> factors;
  for (const auto& s : streams) factors.push_back(s->alphabet());
  return std::make_unique<ProductStream>(Alphabet::product(factors), std::move(streams));
}

StreamPtr interleave(StreamPtr a, StreamPtr b) {
  return std::make_unique<InterleaveStream>(std::move(a), std::move(b));
}

StreamPtr von_neumann(StreamPtr s, std::uint64_t budget) {
  return std::make_unique<VonNeumannStream>(std::move(s), budget);
}

FinitePrefix take_prefix(SymbolStream& s, std::size_t n) {
  FinitePrefix out{s.alphabet(), {}, s.origin() + "[0:" + std::to_string(n) + "]"};
  out.symbols.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.symbols.push_back(s.next());
  return out;
}

FinitePrefix take_available(SymbolStream& s, std::size_t n) {
  FinitePrefix out{s.alphabet(), {}, ""};
  try {
    for (std::size_t i = 0; i < n; ++i) out.symbols.push_back(s.next());
  } catch (const StreamError& e) {
    if (e.kind() != ErrorKind::Starved) throw;
  }
  out.origin = s.origin() + "[0:" + std::to_string(out.symbols.size()) + "]";
  return out;
}

}  // namespace ensemble
