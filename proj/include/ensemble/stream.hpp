#pragma once

// Lazily generated symbol streams and the sequence operators acting on them.
// Streams are single-consumer; every derived stream that may skip input has
// an explicit scan budget and throws StreamError(Starved) when it runs out.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ensemble/alphabet.hpp"
#include "ensemble/selection.hpp"
#include "ensemble/space.hpp"

namespace ensemble {

class SymbolStream {
 public:
  virtual ~SymbolStream() = default;
  SymbolStream(const SymbolStream&) = delete;
  SymbolStream& operator=(const SymbolStream&) = delete;

  /// Next symbol. Throws StreamError (Starved/Stalled) when none can be
  /// produced.
  virtual Symbol next() = 0;
  const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
  /// Reproducible description of the producing pipeline.
  virtual std::string origin() const = 0;

 protected:
  explicit SymbolStream(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {}

 private:
  AlphabetPtr alphabet_;
};

using StreamPtr = std::unique_ptr<SymbolStream>;

/// Immutable finite prefix with its provenance.
struct FinitePrefix {
  AlphabetPtr alphabet;
  Word symbols;
  std::string origin;

  std::size_t size() const noexcept { return symbols.size(); }
  std::string render() const { return alphabet->render(symbols); }
};

/// SplitMix64: state += 0x9E3779B97F4A7C15, output = mix(state) with the
/// (30, 0xBF58476D1CE4E5B9), (27, 0x94D049BB133111EB), 31 shift-multiply
/// finalizer. Counter-based, so the n-th output depends only on seed and n.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// I.i.d. draws from `space`: a 64-bit output u selects the first symbol i
/// with u < ceil(2^64 * (w_0 + ... + w_i)); the last nonzero symbol takes
/// everything above. Zero-weight symbols are never produced.
StreamPtr pseudo_ensemble(const FiniteProbabilitySpace& space, std::uint64_t seed);

/// Finite stream over a stored word; Starved once exhausted.
StreamPtr from_word(AlphabetPtr alphabet, Word word, std::string origin = "word");
StreamPtr from_prefix(const FinitePrefix& prefix);
/// Periodic repetition of a nonempty word.
StreamPtr cycle(AlphabetPtr alphabet, Word period);

StreamPtr map_rv(const RandomVariable& x, StreamPtr s);
/// Keeps members of `b`; the output alphabet is b's member alphabet.
/// `budget` caps the total number of source symbols scanned.
StreamPtr filter_event(const Event& b, StreamPtr s, std::uint64_t budget);
StreamPtr shuffle(const Injection& f, StreamPtr s);
/// output(k) = s(s_f(s, k) + 1) where s_f(s, k) is the k-th l >= 0 with
/// rule(s|l) = YES.
StreamPtr select(const SelectionRule& rule, StreamPtr s, std::uint64_t budget);
StreamPtr product_stream(std::vector<StreamPtr> streams);
StreamPtr interleave(StreamPtr a, StreamPtr b);
/// Pairs 01 -> 0, 10 -> 1, 00/11 -> nothing. Input alphabet must be {0, 1}.
StreamPtr von_neumann(StreamPtr s, std::uint64_t budget);

FinitePrefix take_prefix(SymbolStream& s, std::size_t n);
/// Pulls up to `n` symbols, stopping quietly at the first Starved.
FinitePrefix take_available(SymbolStream& s, std::size_t n);

}  // namespace ensemble
