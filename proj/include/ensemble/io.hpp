#pragma once

// Text file formats.
//
//   space:   one `<symbol> <p>/<q>` per line, `#` comments; weights must sum
//            to exactly 1.
//   seq:     whitespace-separated symbol tokens. For the alphabet {0,1} there
//            are binary forms: one byte per bit (0x00/0x01) or packed MSB-first
//            with an 8-byte big-endian bit count header.
//   test:    `space <file>` header, then `level <n>: <string> <string> ...`;
//            strings use Alphabet::render syntax, `~` is the empty string.
//   code:    `<symbol> <binary codeword>` per line.
//   scheme:  `keys:` section with `<key> <weight>` lines, `enc:` section with
//            `<m> <k> <c>` lines, optional `dec:` section with `<c> <k> <m>`.

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "ensemble/coding.hpp"
#include "ensemble/mltest.hpp"
#include "ensemble/secrecy.hpp"
#include "ensemble/space.hpp"
#include "ensemble/stream.hpp"

namespace ensemble::io {

FiniteProbabilitySpace parse_space(std::istream& in);
FiniteProbabilitySpace read_space(const std::filesystem::path& path);
std::string format_space(const FiniteProbabilitySpace& space);

enum class SeqFormat { Text, BinaryBytes, BinaryPacked };

/// Reads a sequence file. For text files the alphabet is the given one, or
/// when null the distinct tokens in order of first appearance.
FinitePrefix read_sequence(const std::filesystem::path& path, AlphabetPtr alphabet,
                           SeqFormat format = SeqFormat::Text);
void write_sequence(const std::filesystem::path& path, const FinitePrefix& prefix,
                    SeqFormat format = SeqFormat::Text);
std::string format_sequence_text(const FinitePrefix& prefix);

struct TestFile {
  FiniteProbabilitySpace space;
  std::vector<TestLevel> levels;
};

/// Relative `space` paths resolve against the test file's directory.
TestFile read_test(const std::filesystem::path& path);
TestFile parse_test(std::istream& in, const FiniteProbabilitySpace& space);

InstantaneousCode parse_code(std::istream& in);
InstantaneousCode read_code(const std::filesystem::path& path);
std::string format_code(const InstantaneousCode& code);

EncryptionScheme parse_scheme(std::istream& in);
EncryptionScheme read_scheme(const std::filesystem::path& path);

}  // namespace ensemble::io
