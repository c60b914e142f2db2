#include "ensemble/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "ensemble/error.hpp"

namespace ensemble::io {

namespace {

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "'");
  return in;
}

// Splits a line into whitespace tokens after removing a '#' comment.
std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line.substr(0, line.find('#')));
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

Symbol intern(std::vector<std::string>& names, std::map<std::string, Symbol>& index, const std::string& name) {
  auto [it, inserted] = index.emplace(name, static_cast<Symbol>(names.size()));
  if (inserted) names.push_back(name);
  return it->second;
}

}  // namespace

FiniteProbabilitySpace parse_space(std::istream& in) {
  std::vector<std::string> names;
  std::vector<Rational> weights;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    const auto t = tokens(line);
    if (t.empty()) continue;
    if (t.size() != 2) parse_fail(no, "expected '<symbol> <weight>'");
    names.push_back(t[0]);
    try {
      weights.push_back(parse_rational(t[1]));
    } catch (const Error& e) {
      parse_fail(no, e.what());
    }
  }
  if (names.empty()) throw Error(ErrorKind::ParseError, "space file lists no symbols");
  return FiniteProbabilitySpace(Alphabet::make(std::move(names)), std::move(weights));
}

FiniteProbabilitySpace read_space(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_space(in);
}

std::string format_space(const FiniteProbabilitySpace& space) {
  std::string out;
  for (Symbol s = 0; s < space.size(); ++s) {
    out += space.alphabet()->name(s) + " " + to_string(space.weight(s)) + "\n";
  }
  return out;
}

FinitePrefix read_sequence(const std::filesystem::path& path, AlphabetPtr alphabet, SeqFormat format) {
  FinitePrefix out{alphabet, {}, "file:" + path.filename().string()};
  if (format != SeqFormat::Text) {
    if (!out.alphabet) out.alphabet = binary_alphabet();
    const Symbol one = binary_one(*out.alphabet);
    const Symbol zero = binary_zero(*out.alphabet);
    auto in = open_in(path, true);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (format == SeqFormat::BinaryBytes) {
      out.symbols.reserve(bytes.size());
      for (std::size_t i = 0; i < bytes.size(); ++i) {
        const auto b = static_cast<unsigned char>(bytes[i]);
        if (b > 1) throw Error(ErrorKind::ParseError, "byte " + std::to_string(i) + " is neither 0 nor 1");
        out.symbols.push_back(b ? one : zero);
      }
      return out;
    }
    if (bytes.size() < 8) throw Error(ErrorKind::ParseError, "packed sequence lacks its length header");
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n = (n << 8) | static_cast<unsigned char>(bytes[i]);
    if (bytes.size() - 8 != (n + 7) / 8) {
      throw Error(ErrorKind::ParseError, "packed sequence length does not match its header");
    }
    out.symbols.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto b = static_cast<unsigned char>(bytes[8 + i / 8]);
      out.symbols.push_back((b >> (7 - i % 8)) & 1u ? one : zero);
    }
    return out;
  }

  auto in = open_in(path);
  std::vector<std::string> names;
  std::map<std::string, Symbol> index;
  for (std::string tok; in >> tok;) {
    if (!alphabet) {
      out.symbols.push_back(intern(names, index, tok));
    } else if (alphabet->contains(tok)) {
      out.symbols.push_back(alphabet->index(tok));
    } else if (alphabet->single_char()) {
      for (char c : tok) out.symbols.push_back(alphabet->index(std::string(1, c)));
    } else {
      alphabet->index(tok);
    }
  }
  if (!alphabet) {
    if (names.empty()) throw Error(ErrorKind::ParseError, "empty sequence file gives no alphabet");
    out.alphabet = Alphabet::make(std::move(names));
  }
  return out;
}

std::string format_sequence_text(const FinitePrefix& prefix) {
  std::string out;
  for (std::size_t i = 0; i < prefix.symbols.size(); ++i) {
    out += prefix.alphabet->name(prefix.symbols[i]);
    out += (i + 1) % 64 == 0 || i + 1 == prefix.symbols.size() ? '\n' : ' ';
  }
  return out;
}

void write_sequence(const std::filesystem::path& path, const FinitePrefix& prefix, SeqFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
  if (format == SeqFormat::Text) {
    out << format_sequence_text(prefix);
  } else {
    const Symbol one = binary_one(*prefix.alphabet);
    if (format == SeqFormat::BinaryBytes) {
      for (Symbol s : prefix.symbols) out.put(s == one ? 1 : 0);
    } else {
      const std::uint64_t n = prefix.symbols.size();
      for (int i = 7; i >= 0; --i) out.put(static_cast<char>((n >> (8 * i)) & 0xFF));
      std::vector<unsigned char> packed((n + 7) / 8, 0);
      for (std::uint64_t i = 0; i < n; ++i) {
        if (prefix.symbols[i] == one) packed[i / 8] |= static_cast<unsigned char>(0x80u >> (i % 8));
      }
      out.write(reinterpret_cast<const char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
    }
  }
  if (!out) throw Error(ErrorKind::IoError, "failed writing '" + path.string() + "'");
}

TestFile parse_test(std::istream& in, const FiniteProbabilitySpace& space) {
  TestFile file{space, {}};
  std::set<unsigned> seen;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    auto t = tokens(line);
    if (t.empty() || t[0] == "space") continue;
    if (t[0] != "level" || t.size() < 2 || t[1].empty() || t[1].back() != ':') {
      parse_fail(no, "expected 'level <n>: <strings>'");
    }
    TestLevel level{space.alphabet(), 0, {}, std::nullopt};
    try {
      const long n = std::stol(t[1].substr(0, t[1].size() - 1));
      if (n < 1) parse_fail(no, "level index must be >= 1");
      level.index = static_cast<unsigned>(n);
    } catch (const std::logic_error&) {
      parse_fail(no, "bad level index '" + t[1] + "'");
    }
    if (!seen.insert(level.index).second) parse_fail(no, "level " + std::to_string(level.index) + " repeated");
    for (std::size_t i = 2; i < t.size(); ++i) level.strings.push_back(space.alphabet()->parse_word(t[i]));
    file.levels.push_back(std::move(level));
  }
  std::sort(file.levels.begin(), file.levels.end(),
            [](const TestLevel& a, const TestLevel& b) { return a.index < b.index; });
  return file;
}

TestFile read_test(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  std::optional<std::filesystem::path> space_path;
  while (std::getline(in, line)) {
    const auto t = tokens(line);
    if (t.empty()) continue;
    if (t[0] == "space" && t.size() == 2) space_path = t[1];
    break;
  }
  if (!space_path) throw Error(ErrorKind::ParseError, "test file must start with 'space <file>'");
  if (space_path->is_relative()) space_path = path.parent_path() / *space_path;
  const auto space = read_space(*space_path);
  in.clear();
  in.seekg(0);
  return parse_test(in, space);
}

InstantaneousCode parse_code(std::istream& in) {
  std::vector<std::string> names;
  std::vector<std::string> words;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    const auto t = tokens(line);
    if (t.empty()) continue;
    if (t.size() != 2) parse_fail(no, "expected '<symbol> <codeword>'");
    names.push_back(t[0]);
    words.push_back(t[1]);
  }
  if (names.empty()) throw Error(ErrorKind::ParseError, "code file lists no symbols");
  return InstantaneousCode(Alphabet::make(std::move(names)), std::move(words));
}

InstantaneousCode read_code(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_code(in);
}

std::string format_code(const InstantaneousCode& code) {
  std::string out;
  for (Symbol s = 0; s < code.codewords().size(); ++s) {
    out += code.source()->name(s) + " " + code.codeword(s) + "\n";
  }
  return out;
}

EncryptionScheme parse_scheme(std::istream& in) {
  enum class Section { None, Keys, Enc, Dec } section = Section::None;
  std::vector<std::string> key_names;
  std::vector<Rational> key_weights;
  std::map<std::string, Symbol> key_index;
  std::vector<std::string> msg_names, cipher_names;
  std::map<std::string, Symbol> msg_index, cipher_index;
  std::vector<std::tuple<std::string, std::string, std::string, std::size_t>> enc_rows, dec_rows;

  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    const auto t = tokens(line);
    if (t.empty()) continue;
    if (t.size() == 1 && t[0] == "keys:") { section = Section::Keys; continue; }
    if (t.size() == 1 && t[0] == "enc:") { section = Section::Enc; continue; }
    if (t.size() == 1 && t[0] == "dec:") { section = Section::Dec; continue; }
    switch (section) {
      case Section::None:
        parse_fail(no, "content before a 'keys:', 'enc:' or 'dec:' header");
      case Section::Keys:
        if (t.size() != 2) parse_fail(no, "expected '<key> <weight>'");
        if (key_index.count(t[0])) parse_fail(no, "key '" + t[0] + "' repeated");
        intern(key_names, key_index, t[0]);
        try {
          key_weights.push_back(parse_rational(t[1]));
        } catch (const Error& e) {
          parse_fail(no, e.what());
        }
        break;
      case Section::Enc:
        if (t.size() != 3) parse_fail(no, "expected '<m> <k> <c>'");
        intern(msg_names, msg_index, t[0]);
        intern(cipher_names, cipher_index, t[2]);
        enc_rows.emplace_back(t[0], t[1], t[2], no);
        break;
      case Section::Dec:
        if (t.size() != 3) parse_fail(no, "expected '<c> <k> <m>'");
        intern(cipher_names, cipher_index, t[0]);
        dec_rows.emplace_back(t[0], t[1], t[2], no);
        break;
    }
  }
  if (key_names.empty()) throw Error(ErrorKind::ParseError, "scheme has no keys");
  if (msg_names.empty()) throw Error(ErrorKind::ParseError, "scheme has no enc table");

  auto key_alpha = Alphabet::make(key_names);
  FiniteProbabilitySpace keys(key_alpha, std::move(key_weights));
  auto msgs = Alphabet::make(msg_names);
  auto ciphers = Alphabet::make(cipher_names);

  auto lookup = [](const std::map<std::string, Symbol>& idx, const std::string& name, std::size_t no,
                   const char* what) {
    auto it = idx.find(name);
    if (it == idx.end()) parse_fail(no, std::string("unknown ") + what + " '" + name + "'");
    return it->second;
  };

  constexpr Symbol kUnset = ~Symbol{0};
  std::vector<std::vector<Symbol>> enc(msgs->size(), std::vector<Symbol>(keys.size(), kUnset));
  for (const auto& [m, k, c, no] : enc_rows) {
    auto& cell = enc[msg_index.at(m)][lookup(key_index, k, no, "key")];
    if (cell != kUnset) parse_fail(no, "enc(" + m + "," + k + ") given twice");
    cell = cipher_index.at(c);
  }
  for (Symbol m = 0; m < enc.size(); ++m) {
    for (Symbol k = 0; k < keys.size(); ++k) {
      if (enc[m][k] == kUnset) {
        throw Error(ErrorKind::ParseError, "enc(" + msgs->name(m) + "," + key_alpha->name(k) + ") missing");
      }
    }
  }
  if (dec_rows.empty()) return EncryptionScheme(msgs, ciphers, std::move(keys), std::move(enc));

  std::vector<std::vector<Symbol>> dec(ciphers->size(), std::vector<Symbol>(keys.size(), kUnset));
  for (const auto& [c, k, m, no] : dec_rows) {
    auto& cell = dec[cipher_index.at(c)][lookup(key_index, k, no, "key")];
    if (cell != kUnset) parse_fail(no, "dec(" + c + "," + k + ") given twice");
    cell = lookup(msg_index, m, no, "message");
  }
  for (Symbol c = 0; c < dec.size(); ++c) {
    for (Symbol k = 0; k < keys.size(); ++k) {
      if (dec[c][k] == kUnset) {
        throw Error(ErrorKind::ParseError, "dec(" + ciphers->name(c) + "," + key_alpha->name(k) + ") missing");
      }
    }
  }
  return EncryptionScheme(msgs, ciphers, std::move(keys), std::move(enc), std::move(dec));
}

EncryptionScheme read_scheme(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_scheme(in);
}

}  // namespace ensemble::io
