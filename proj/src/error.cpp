#include "ensemble/error.hpp"

namespace ensemble {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidAlphabet: return "InvalidAlphabet";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::MissingWeight: return "MissingWeight";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::SumNotOne: return "SumNotOne";
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::ZeroConditionEvent: return "ZeroConditionEvent";
    case ErrorKind::TooManyEvents: return "TooManyEvents";
    case ErrorKind::Starved: return "Starved";
    case ErrorKind::Stalled: return "Stalled";
    case ErrorKind::NotInjective: return "NotInjective";
    case ErrorKind::EmptyStringInLevel: return "EmptyStringInLevel";
    case ErrorKind::NotPrefixFreeLevel: return "NotPrefixFreeLevel";
    case ErrorKind::UncertifiedOracleLevel: return "UncertifiedOracleLevel";
    case ErrorKind::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorKind::DegenerateQ: return "DegenerateQ";
    case ErrorKind::EmptyPrefix: return "EmptyPrefix";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::Inconclusive: return "Inconclusive";
    case ErrorKind::NotDyadic: return "NotDyadic";
    case ErrorKind::UnparsableBits: return "UnparsableBits";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace ensemble
