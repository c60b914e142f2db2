#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ensemble {

enum class ErrorKind {
  InvalidArgument,
  InvalidAlphabet,
  UnknownSymbol,
  MissingWeight,
  NegativeWeight,
  SumNotOne,
  AlphabetMismatch,
  ZeroConditionEvent,
  TooManyEvents,
  Starved,
  Stalled,
  NotInjective,
  EmptyStringInLevel,
  NotPrefixFreeLevel,
  UncertifiedOracleLevel,
  EpsilonOutOfRange,
  DegenerateQ,
  EmptyPrefix,
  LengthMismatch,
  Inconclusive,
  NotDyadic,
  UnparsableBits,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `kind()` is stable and is what
/// callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by derived streams that run out of budget (Starved) or meet an
/// undefined selection decision (Stalled). Carries how many source symbols
/// were scanned before giving up.
class StreamError : public Error {
 public:
  StreamError(ErrorKind kind, const std::string& message, std::uint64_t scanned)
      : Error(kind, message + " (scanned " + std::to_string(scanned) + ")"),
        scanned_(scanned) {}

  std::uint64_t scanned() const noexcept { return scanned_; }

 private:
  std::uint64_t scanned_;
};

}  // namespace ensemble
