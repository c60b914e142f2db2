#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ensemble/coding.hpp"
#include "ensemble/diagnostics.hpp"
#include "ensemble/error.hpp"
#include "ensemble/io.hpp"
#include "ensemble/mltest.hpp"
#include "ensemble/secrecy.hpp"
#include "ensemble/stream.hpp"

namespace fs = std::filesystem;
using namespace ensemble;

namespace {

constexpr int kOk = 0;
constexpr int kVerdictFailure = 1;
constexpr int kInputError = 2;

struct Options {
  std::string format = "table";
  std::string encoding = "text";
};

Options g_opts;

io::SeqFormat seq_format() {
  if (g_opts.encoding == "bytes") return io::SeqFormat::BinaryBytes;
  if (g_opts.encoding == "packed") return io::SeqFormat::BinaryPacked;
  return io::SeqFormat::Text;
}

// Title plus ordered key/value rows, printed as `key=value` lines or as an
// aligned table.
struct Report {
  std::string title;
  std::vector<std::pair<std::string, std::string>> rows;

  void add(std::string key, std::string value) { rows.emplace_back(std::move(key), std::move(value)); }

  void print(std::ostream& os) const {
    if (g_opts.format == "kv") {
      os << "title=" << title << "\n";
      for (const auto& [k, v] : rows) os << k << "=" << v << "\n";
      return;
    }
    os << title << "\n";
    std::size_t width = 0;
    for (const auto& row : rows) width = std::max(width, row.first.size());
    for (const auto& [k, v] : rows) os << "  " << std::left << std::setw(static_cast<int>(width)) << k << "  " << v << "\n";
  }
};

void print(const DiagnosticReport& r) { std::cout << (g_opts.format == "kv" ? r.render_kv() : r.render_table()); }

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string yes(bool b) { return b ? "true" : "false"; }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

FinitePrefix load_sequence(const std::string& path, const AlphabetPtr& alphabet) {
  return io::read_sequence(path, alphabet, seq_format());
}

void emit_sequence(const FinitePrefix& p, const std::string& out) {
  if (out.empty() || out == "-") {
    if (seq_format() != io::SeqFormat::Text) throw Error(ErrorKind::InvalidArgument, "binary encodings need --out");
    std::cout << io::format_sequence_text(p);
    return;
  }
  io::write_sequence(out, p, seq_format());
}

// ---------------------------------------------------------------- gen / pipe

struct GenArgs {
  std::string space;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::string out;
};

int run_gen(const GenArgs& a) {
  const auto space = io::read_space(a.space);
  auto stream = pseudo_ensemble(space, a.seed);
  auto prefix = take_prefix(*stream, a.n);
  emit_sequence(prefix, a.out);
  if (!a.out.empty() && a.out != "-") {
    Report r{"generated pseudo-ensemble", {}};
    r.add("origin", stream->origin());
    r.add("symbols", std::to_string(prefix.size()));
    r.add("out", a.out);
    r.print(std::cout);
  }
  return kOk;
}

struct PipeArgs {
  std::string in;
  std::string space;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> ops;
  std::size_t n = 0;
  std::uint64_t budget = 1000000;
  std::string out;
};

Event event_of(const AlphabetPtr& a, const std::string& list) { return Event::of(a, split(list, ',')); }

// `from=to,...`; unlisted symbols keep their name. Target symbols are ordered
// by first appearance while walking the source alphabet.
RandomVariable map_of(const AlphabetPtr& source, const std::string& spec) {
  std::map<std::string, std::string> pairs;
  for (const auto& item : split(spec, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "map entry '" + item + "' needs '='");
    source->index(item.substr(0, eq));
    pairs[item.substr(0, eq)] = item.substr(eq + 1);
  }
  std::vector<std::string> targets;
  std::map<std::string, std::string> full;
  for (const auto& s : source->symbols()) {
    auto it = pairs.find(s);
    const std::string t = it == pairs.end() ? s : it->second;
    full[s] = t;
    if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
  }
  return RandomVariable::from_names(source, Alphabet::make(targets), full);
}

StreamPtr apply_op(const std::string& op, StreamPtr s, std::uint64_t budget) {
  const auto colon = op.find(':');
  const std::string head = op.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : op.substr(colon + 1);
  const auto& a = s->alphabet();
  if (head == "map") return map_rv(map_of(a, arg), std::move(s));
  if (head == "chara") return map_rv(RandomVariable::indicator(event_of(a, arg)), std::move(s));
  if (head == "filter") return filter_event(event_of(a, arg), std::move(s), budget);
  if (head == "shuffle") return shuffle(Injection::parse(arg), std::move(s));
  if (head == "select") return select(SelectionRule::parse(arg, a), std::move(s), budget);
  if (head == "vonneumann") return von_neumann(std::move(s), budget);
  throw Error(ErrorKind::ParseError, "unknown operator '" + op + "'");
}

int run_pipe(const PipeArgs& a) {
  StreamPtr s;
  std::size_t n = a.n;
  if (!a.in.empty()) {
    AlphabetPtr alphabet = a.space.empty() ? nullptr : io::read_space(a.space).alphabet();
    auto prefix = load_sequence(a.in, alphabet);
    if (n == 0) n = std::numeric_limits<std::size_t>::max();
    s = from_prefix(prefix);
  } else {
    if (a.space.empty() || !a.seed) throw Error(ErrorKind::InvalidArgument, "pipe needs --in, or --space with --seed");
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "generated input needs --n");
    s = pseudo_ensemble(io::read_space(a.space), *a.seed);
  }
  for (const auto& op : a.ops) s = apply_op(op, std::move(s), a.budget);

  FinitePrefix out{s->alphabet(), {}, ""};
  std::optional<std::string> stopped;
  try {
    for (std::size_t i = 0; i < n; ++i) out.symbols.push_back(s->next());
  } catch (const StreamError& e) {
    stopped = e.what();
  }
  out.origin = s->origin();
  emit_sequence(out, a.out);
  const bool short_output = a.n != 0 && out.size() < a.n;
  if (short_output || (!a.out.empty() && a.out != "-")) {
    Report r{"pipeline", {}};
    r.add("origin", s->origin());
    r.add("symbols", std::to_string(out.size()));
    if (a.n != 0) r.add("requested", std::to_string(a.n));
    if (stopped) r.add("stopped", *stopped);
    r.print(short_output ? std::cerr : std::cout);
  }
  return short_output ? kVerdictFailure : kOk;
}

// ---------------------------------------------------------------------- test

struct TestArgs {
  std::string file;
  std::string space;
  std::optional<unsigned> level;
  std::string seq;
  std::optional<std::string> lln_eps;
  std::string op;
  std::size_t depth = 8;
};

io::TestFile load_test(const TestArgs& a) {
  if (a.space.empty()) return io::read_test(a.file);
  std::ifstream in(a.file);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + a.file + "'");
  return io::parse_test(in, io::read_space(a.space));
}

std::vector<TestLevel> selected(const io::TestFile& t, std::optional<unsigned> level) {
  std::vector<TestLevel> out;
  for (const auto& l : t.levels) {
    if (!level || l.index == *level) out.push_back(l);
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "no matching level in the test file");
  return out;
}

int run_certify(const TestArgs& a) {
  const auto t = load_test(a);
  Report r{"certify " + a.file, {}};
  bool all = true;
  for (const auto& level : selected(t, a.level)) {
    const auto res = certify_level(t.space, level);
    const std::string key = "level." + std::to_string(level.index);
    r.add(key + ".strings", std::to_string(level.strings.size()));
    r.add(key + ".measure", to_string(res.measure));
    r.add(key + ".bound", to_string(res.bound));
    r.add(key + ".check", "measure < bound");
    r.add(key + ".certified", yes(res.certified));
    all = all && res.certified;
  }
  r.add("verdict", all ? "certified" : "violation");
  r.print(std::cout);
  return all ? kOk : kVerdictFailure;
}

int run_member(const TestArgs& a) {
  if (!a.level) throw Error(ErrorKind::InvalidArgument, "member needs --level");
  Report r{"member", {}};
  bool covered = false;
  if (a.lln_eps) {
    if (a.space.empty()) throw Error(ErrorKind::InvalidArgument, "--lln needs --space");
    const auto q = io::read_space(a.space);
    const auto prefix = load_sequence(a.seq, q.alphabet());
    const LlnTest t = lln_test(q, parse_rational(*a.lln_eps));
    covered = t.member(*a.level, prefix.symbols);
    r.title = "member lln";
    r.add("input", prefix.origin);
    r.add("prefix_length", std::to_string(prefix.size()));
    r.add("c", to_string(t.c()));
    r.add("r_left", to_string(t.r_left()));
    r.add("r_right", to_string(t.r_right()));
    r.add("level", std::to_string(*a.level));
    r.add("f(n)", std::to_string(t.growth(*a.level)));
    r.add("check", "some m in [f(n), |prefix|] has N_1/m outside [r_left, r_right]");
  } else {
    const auto t = load_test(a);
    const auto level = selected(t, a.level).front();
    const auto prefix = load_sequence(a.seq, t.space.alphabet());
    covered = member(level, prefix.symbols);
    r.title = "member " + a.file;
    r.add("input", prefix.origin);
    r.add("prefix_length", std::to_string(prefix.size()));
    r.add("level", std::to_string(level.index));
    for (const auto& s : level.strings) {
      if (s.size() <= prefix.size() && std::equal(s.begin(), s.end(), prefix.symbols.begin())) {
        r.add("covered_by", t.space.alphabet()->render(s));
        break;
      }
    }
  }
  r.add("member", yes(covered));
  if (!covered) r.add("note", "provisional: a longer prefix may still be covered");
  r.print(std::cout);
  return covered ? kVerdictFailure : kOk;
}

int run_transform(const TestArgs& a) {
  const auto colon = a.op.find(':');
  const std::string head = a.op.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : a.op.substr(colon + 1);
  if (a.space.empty()) throw Error(ErrorKind::InvalidArgument, "transform needs --space (the source space)");
  const auto space = io::read_space(a.space);

  Report r{"transform " + a.op, {}};
  bool ok = true;
  auto levels_over = [&](const FiniteProbabilitySpace& level_space) {
    std::ifstream in(a.file);
    if (!in) throw Error(ErrorKind::IoError, "cannot open '" + a.file + "'");
    return selected(io::parse_test(in, level_space), a.level);
  };

  if (head == "map") {
    const auto x = map_of(space.alphabet(), arg);
    const auto image = induced_space(x, space);
    for (const auto& level : levels_over(image)) {
      const auto t = transform_map(x, level, space);
      const auto before = open_measure(image, level.strings);
      const std::string key = "level." + std::to_string(level.index);
      r.add(key + ".measure", to_string(before));
      r.add(key + ".transformed_strings", std::to_string(t.level.strings.size()));
      r.add(key + ".transformed_measure", to_string(t.measure));
      r.add(key + ".check", "equal");
      ok = ok && t.measure == before;
    }
  } else if (head == "shuffle") {
    const auto f = Injection::parse(arg);
    for (const auto& level : levels_over(space)) {
      const auto t = transform_shuffle(f, level, space);
      const auto before = open_measure(space, level.strings);
      const std::string key = "level." + std::to_string(level.index);
      r.add(key + ".measure", to_string(before));
      r.add(key + ".transformed_strings", std::to_string(t.level.strings.size()));
      r.add(key + ".transformed_measure", to_string(t.measure));
      r.add(key + ".check", "equal");
      ok = ok && t.measure == before;
    }
  } else if (head == "select") {
    const auto rule = SelectionRule::parse(arg, space.alphabet());
    for (const auto& level : levels_over(space)) {
      const auto t = transform_select(rule, level, space, a.depth);
      const auto before = open_measure(space, level.strings);
      const std::string key = "level." + std::to_string(level.index);
      r.add(key + ".measure", to_string(before));
      r.add(key + ".depth", std::to_string(a.depth));
      r.add(key + ".transformed_measure", to_string(t.measure));
      r.add(key + ".check", "per string: measure of F(s) up to depth <= P(s)");
      bool bounded = true;
      for (const auto& e : t.per_string) bounded = bounded && e.bounded();
      r.add(key + ".bounded", yes(bounded));
      ok = ok && bounded;
    }
  } else if (head == "filter") {
    const auto b = event_of(space.alphabet(), arg);
    const auto pb = conditional_space(space, b);
    for (const auto& level : levels_over(pb)) {
      const auto t = transform_condition(b, level, space, a.depth);
      const auto before = open_measure(pb, level.strings);
      const std::string key = "level." + std::to_string(level.index);
      r.add(key + ".measure", to_string(before));
      r.add(key + ".closed_form", to_string(t.closed_form_measure));
      r.add(key + ".depth", std::to_string(a.depth));
      r.add(key + ".truncated_measure", to_string(t.truncated_measure));
      r.add(key + ".check", "closed form = measure under P_B, truncated <= closed form");
      const bool good = t.closed_form_measure == before && t.truncated_measure <= t.closed_form_measure;
      r.add(key + ".holds", yes(good));
      ok = ok && good;
    }
  } else {
    throw Error(ErrorKind::ParseError, "unknown transform '" + a.op + "' (map:, shuffle:, select:, filter:)");
  }
  r.add("verdict", ok ? "holds" : "violated");
  r.print(std::cout);
  return ok ? kOk : kVerdictFailure;
}

// ---------------------------------------------------------------------- diag

struct DiagArgs {
  std::string space;
  std::vector<std::string> seqs;
  std::optional<double> eps;
  std::string eps_rational;
  std::uint64_t n = 0;
};

double eps_or_default(const DiagArgs& a, std::uint64_t n, Report* note) {
  if (a.eps) return *a.eps;
  const double e = default_epsilon(n);
  if (note) note->add("default_eps", num(e) + " (Chernoff, confidence 1e-6)");
  return e;
}

int run_lln(const DiagArgs& a) {
  if (a.seqs.size() != 1) throw Error(ErrorKind::InvalidArgument, "lln takes exactly one --seq");
  const auto space = io::read_space(a.space);
  const auto prefix = load_sequence(a.seqs[0], space.alphabet());
  const double eps = a.eps ? *a.eps : default_epsilon(std::max<std::size_t>(prefix.size(), 1));
  auto report = lln_report(space, prefix, eps);
  if (!a.eps) report.title += ", eps from Chernoff at confidence 1e-6";
  print(report);
  return report.passed() ? kOk : kVerdictFailure;
}

int run_chernoff(const DiagArgs& a) {
  const auto q = io::read_space(a.space);
  const Rational eps = parse_rational(a.eps_rational);
  const double bound = chernoff_bound(q, eps, a.n);
  Report r{"chernoff bound", {}};
  r.add("eps", to_string(eps));
  r.add("n", std::to_string(a.n));
  r.add("formula", "2 exp(-eps^2 n / (2 Q(0) Q(1)))");
  r.add("bound", num(bound));
  r.print(std::cout);
  return kOk;
}

int run_compress(const DiagArgs& a) {
  if (a.seqs.size() != 1) throw Error(ErrorKind::InvalidArgument, "compress takes exactly one --seq");
  const auto bits = load_sequence(a.seqs[0], binary_alphabet());
  Report r{"incompressibility proxy", {}};
  r.add("input", bits.origin);
  r.add("bits", std::to_string(bits.size()));
  r.add("compressor", "zlib deflate level=" + std::to_string(CompressorConfig::kLevel) +
                          " windowBits=" + std::to_string(CompressorConfig::kWindowBits) +
                          " memLevel=" + std::to_string(CompressorConfig::kMemLevel));
  try {
    const double ratio = incompressibility_proxy(bits);
    r.add("ratio", num(ratio));
    r.add("note", "compressed/raw bytes; a heuristic, never a randomness verdict");
    r.print(std::cout);
    return kOk;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Inconclusive) throw;
    r.add("ratio", "inconclusive");
    r.add("minimum_bits", std::to_string(CompressorConfig::kMinBits));
    r.print(std::cout);
    return kVerdictFailure;
  }
}

std::vector<FinitePrefix> load_all(const std::vector<std::string>& paths) {
  std::vector<FinitePrefix> out;
  for (const auto& p : paths) out.push_back(load_sequence(p, nullptr));
  return out;
}

int run_indep(const DiagArgs& a) {
  if (a.seqs.size() < 2) throw Error(ErrorKind::InvalidArgument, "indep needs at least two --seq");
  const auto prefixes = load_all(a.seqs);
  const double eps = a.eps ? *a.eps : default_epsilon(std::max<std::size_t>(prefixes[0].size(), 1));
  auto report = empirical_independence(prefixes, eps);
  print(report);
  return report.passed() ? kOk : kVerdictFailure;
}

int run_equiv(const DiagArgs& a) {
  if (a.seqs.size() != 2) throw Error(ErrorKind::InvalidArgument, "equiv needs exactly two --seq");
  AlphabetPtr alphabet = a.space.empty() ? nullptr : io::read_space(a.space).alphabet();
  const auto x = load_sequence(a.seqs[0], alphabet);
  const auto y = load_sequence(a.seqs[1], alphabet ? alphabet : x.alphabet);
  const double eps = a.eps ? *a.eps : default_epsilon(std::max<std::size_t>(std::min(x.size(), y.size()), 1));
  auto report = equivalence_check(x, y, eps);
  print(report);
  return report.passed() ? kOk : kVerdictFailure;
}

// ---------------------------------------------------------------------- code

struct CodeArgs {
  std::string code;
  std::string space;
  std::string seq;
  std::string out;
};

int run_audit(const CodeArgs& a) {
  const auto code = io::read_code(a.code);
  const auto audit = validate_code(code);
  Report r{"code audit " + a.code, {}};
  r.add("kraft_sum", to_string(audit.kraft_sum));
  r.add("kraft_check", "sum 2^-|C(a)| <= 1: " + yes(audit.kraft_sum <= 1));
  static const char* names[] = {"none", "empty codeword", "duplicate codeword", "prefix violation"};
  r.add("instantaneous", yes(audit.ok));
  if (!audit.ok) {
    r.add("violation", names[static_cast<int>(audit.violation)]);
    std::string syms;
    for (Symbol s : audit.symbols) syms += (syms.empty() ? "" : ",") + code.source()->name(s);
    r.add("symbols", syms);
  }
  bool ok = audit.ok;
  if (!a.space.empty()) {
    const auto space = io::read_space(a.space);
    const auto h = shannon_entropy(space);
    r.add("entropy", h.exact ? to_string(*h.exact) : h.decimal);
    r.add("avg_length", to_string(avg_length(space, code)));
    const auto v = is_abs_optimal(space, code);
    r.add("optimality_check", "P(a) = 2^-|C(a)| for every a");
    r.add("absolutely_optimal", yes(v.optimal));
    for (const auto& m : v.mismatches) {
      r.add("mismatch." + code.source()->name(m.symbol),
            "P=" + to_string(m.weight) + " 2^-|C|=" + to_string(m.dyadic) + (m.zero_weight ? " (zero weight)" : ""));
    }
    ok = ok && v.optimal;
  }
  r.print(std::cout);
  return ok ? kOk : kVerdictFailure;
}

int run_encode(const CodeArgs& a) {
  const auto code = io::read_code(a.code);
  const auto audit = validate_code(code);
  if (!audit.ok) throw Error(ErrorKind::InvalidArgument, "code is not instantaneous");
  const auto msg = load_sequence(a.seq, code.source());
  FinitePrefix bits{binary_alphabet(), encode_word(code, msg.symbols), "encode(" + msg.origin + ")"};
  emit_sequence(bits, a.out);
  return kOk;
}

int run_decode(const CodeArgs& a) {
  const auto code = io::read_code(a.code);
  if (!validate_code(code).ok) throw Error(ErrorKind::InvalidArgument, "code is not instantaneous");
  const auto bits = load_sequence(a.seq, binary_alphabet());
  const auto d = decode_word(code, bits.symbols);
  FinitePrefix msg{code.source(), d.symbols, "decode(" + bits.origin + ")"};
  emit_sequence(msg, a.out);
  if (!d.remainder.empty()) {
    std::cerr << "remainder: " << binary_alphabet()->render(d.remainder) << " (" << d.remainder.size()
              << " trailing bits of an incomplete codeword)\n";
  }
  return kOk;
}

int run_build(const CodeArgs& a) {
  const auto space = io::read_space(a.space);
  const auto code = build_dyadic_code(space);
  const std::string text = io::format_code(code);
  if (a.out.empty() || a.out == "-") {
    std::cout << text;
  } else {
    std::ofstream out(a.out);
    out << text;
    if (!out) throw Error(ErrorKind::IoError, "cannot write '" + a.out + "'");
  }
  return kOk;
}

// ------------------------------------------------------------------- secrecy

struct SecrecyArgs {
  std::string scheme;
  std::string msg_space;
};

int run_secrecy(const SecrecyArgs& a) {
  const auto scheme = io::read_scheme(a.scheme);
  Report r{"secrecy check " + a.scheme, {}};
  r.add("messages", std::to_string(scheme.messages()->size()));
  r.add("keys", std::to_string(scheme.keys()->size()));
  r.add("ciphers", std::to_string(scheme.ciphers()->size()));
  const auto valid = validate_scheme(scheme);
  r.add("correct", yes(valid.ok));
  if (!valid.ok) {
    r.add("correctness_witness", "Dec(Enc(" + scheme.messages()->name(valid.witness->first) + "," +
                                     scheme.keys()->name(valid.witness->second) + ")) differs");
  }
  SecrecyVerdict v;
  if (a.msg_space.empty()) {
    v = is_perfectly_secret(scheme);
    r.add("check", "M and C independent under uniform messages x P_key");
  } else {
    FiniteProbabilitySpace p = io::read_space(a.msg_space);
    v = secrecy_under(scheme, p);
    r.add("check", "M and C independent under " + a.msg_space + " x P_key");
  }
  if (!v.secret) {
    r.add("witness", "m=" + scheme.messages()->name(v.witness->first) + " c=" +
                         scheme.ciphers()->name(v.witness->second));
    r.add("joint", to_string(v.joint));
    r.add("product", to_string(v.product));
  }
  const auto keys = key_size_report(scheme);
  r.add("key_size", std::to_string(keys.keys_with_positive_weight) + " positive-weight keys, " +
                        std::to_string(keys.messages) + " messages" + (keys.satisfied ? "" : " (violates #K >= #M)"));
  const bool ok = valid.ok && v.secret;
  std::string verdict = ok ? (a.msg_space.empty() ? "perfectly secret" : "independent") : "not perfectly secret";
  if (!valid.ok) verdict = "incorrect scheme";
  r.add("verdict", verdict);
  r.print(std::cout);
  return ok ? kOk : kVerdictFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ensemble-lab: exact probability spaces, explicit Martin-Loef tests, diagnostics, codes and secrecy"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", g_opts.format, "Report layout")->check(CLI::IsMember({"kv", "table"}));
  app.add_option("--encoding", g_opts.encoding, "Sequence file encoding")
      ->check(CLI::IsMember({"text", "bytes", "packed"}));

  int rc = kOk;

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Sample a pseudo-ensemble prefix");
  gen_cmd->add_option("--space", gen.space, "Space file")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--seed", gen.seed, "PRNG seed")->required();
  gen_cmd->add_option("--n", gen.n, "Number of symbols")->required();
  gen_cmd->add_option("--out", gen.out, "Output file (stdout when omitted)");
  gen_cmd->callback([&] { rc = run_gen(gen); });

  PipeArgs pipe;
  auto* pipe_cmd = app.add_subcommand("pipe", "Apply an operator chain to a sequence");
  pipe_cmd->add_option("--in", pipe.in, "Input sequence file")->check(CLI::ExistingFile);
  pipe_cmd->add_option("--space", pipe.space, "Space file (alphabet, or source for --seed)")
      ->check(CLI::ExistingFile);
  pipe_cmd->add_option("--seed", pipe.seed, "Generate the input from --space with this seed");
  pipe_cmd->add_option("--op", pipe.ops,
                       "Operator: map:a=b,..  chara:a,..  filter:a,..  shuffle:<injection>  select:<rule>  vonneumann");
  pipe_cmd->add_option("--n", pipe.n, "Output symbols (all available when reading a file)");
  pipe_cmd->add_option("--budget", pipe.budget, "Scan budget for filter/select/vonneumann");
  pipe_cmd->add_option("--out", pipe.out, "Output file (stdout when omitted)");
  pipe_cmd->callback([&] { rc = run_pipe(pipe); });

  TestArgs test;
  auto* test_cmd = app.add_subcommand("test", "Martin-Loef test levels");
  test_cmd->require_subcommand(1);
  auto* certify_cmd = test_cmd->add_subcommand("certify", "Check measure < 2^-n for each level");
  certify_cmd->add_option("file", test.file, "Test file")->required()->check(CLI::ExistingFile);
  certify_cmd->add_option("--space", test.space, "Space file (overrides the test header)")->check(CLI::ExistingFile);
  certify_cmd->add_option("--level", test.level, "Only this level");
  certify_cmd->callback([&] { rc = run_certify(test); });

  auto* member_cmd = test_cmd->add_subcommand("member", "Is a prefix covered by a level");
  member_cmd->add_option("file", test.file, "Test file")->check(CLI::ExistingFile);
  member_cmd->add_option("--seq", test.seq, "Sequence file")->required()->check(CLI::ExistingFile);
  member_cmd->add_option("--space", test.space, "Space file")->check(CLI::ExistingFile);
  member_cmd->add_option("--level", test.level, "Level index")->required();
  member_cmd->add_option("--lln", test.lln_eps, "Use the law-of-large-numbers test with this rational eps");
  member_cmd->callback([&] {
    if (test.file.empty() && !test.lln_eps) throw CLI::ValidationError("member", "give a test file or --lln");
    rc = run_member(test);
  });

  auto* transform_cmd = test_cmd->add_subcommand("transform", "Carry a test back through an operator");
  transform_cmd->add_option("file", test.file, "Test file for the derived sequence")->required()->check(CLI::ExistingFile);
  transform_cmd->add_option("--space", test.space, "Source space file")->required()->check(CLI::ExistingFile);
  transform_cmd->add_option("--op", test.op, "map:a=b,..  shuffle:<injection>  select:<rule>  filter:a,..")->required();
  transform_cmd->add_option("--level", test.level, "Only this level");
  transform_cmd->add_option("--depth", test.depth, "Truncation depth for select/filter");
  transform_cmd->callback([&] { rc = run_transform(test); });

  DiagArgs diag;
  auto* diag_cmd = app.add_subcommand("diag", "Empirical diagnostics on finite prefixes");
  diag_cmd->require_subcommand(1);
  auto* lln_cmd = diag_cmd->add_subcommand("lln", "Per-symbol frequency deviations");
  lln_cmd->add_option("--space", diag.space, "Space file")->required()->check(CLI::ExistingFile);
  lln_cmd->add_option("--seq", diag.seqs, "Sequence file")->required()->check(CLI::ExistingFile);
  lln_cmd->add_option("--eps", diag.eps, "Deviation threshold");
  lln_cmd->callback([&] { rc = run_lln(diag); });

  auto* chernoff_cmd = diag_cmd->add_subcommand("chernoff", "Two-sided Chernoff bound");
  chernoff_cmd->add_option("--space", diag.space, "Binary space file")->required()->check(CLI::ExistingFile);
  chernoff_cmd->add_option("--eps", diag.eps_rational, "Rational eps")->required();
  chernoff_cmd->add_option("--n", diag.n, "Sample size")->required();
  chernoff_cmd->callback([&] { rc = run_chernoff(diag); });

  auto* compress_cmd = diag_cmd->add_subcommand("compress", "Compression-ratio proxy for bit sequences");
  compress_cmd->add_option("--seq", diag.seqs, "Bit sequence file")->required()->check(CLI::ExistingFile);
  compress_cmd->callback([&] { rc = run_compress(diag); });

  auto* indep_cmd = diag_cmd->add_subcommand("indep", "Empirical independence of equal-length prefixes");
  indep_cmd->add_option("--seq", diag.seqs, "Sequence files")->required()->check(CLI::ExistingFile);
  indep_cmd->add_option("--eps", diag.eps, "Threshold");
  indep_cmd->callback([&] { rc = run_indep(diag); });

  auto* equiv_cmd = diag_cmd->add_subcommand("equiv", "Frequency-table distance of two prefixes");
  equiv_cmd->add_option("--seq", diag.seqs, "Two sequence files")->required()->check(CLI::ExistingFile);
  equiv_cmd->add_option("--space", diag.space, "Space file fixing the alphabet")->check(CLI::ExistingFile);
  equiv_cmd->add_option("--eps", diag.eps, "Threshold");
  equiv_cmd->callback([&] { rc = run_equiv(diag); });

  CodeArgs code;
  auto* code_cmd = app.add_subcommand("code", "Instantaneous codes");
  code_cmd->require_subcommand(1);
  auto* audit_cmd = code_cmd->add_subcommand("audit", "Validate a code; with --space also entropy and optimality");
  audit_cmd->add_option("code", code.code, "Code file")->required()->check(CLI::ExistingFile);
  audit_cmd->add_option("--space", code.space, "Space file")->check(CLI::ExistingFile);
  audit_cmd->callback([&] { rc = run_audit(code); });

  auto* encode_cmd = code_cmd->add_subcommand("encode", "Encode a sequence");
  encode_cmd->add_option("code", code.code, "Code file")->required()->check(CLI::ExistingFile);
  encode_cmd->add_option("--seq", code.seq, "Sequence file")->required()->check(CLI::ExistingFile);
  encode_cmd->add_option("--out", code.out, "Output file (stdout when omitted)");
  encode_cmd->callback([&] { rc = run_encode(code); });

  auto* decode_cmd = code_cmd->add_subcommand("decode", "Decode a bit sequence");
  decode_cmd->add_option("code", code.code, "Code file")->required()->check(CLI::ExistingFile);
  decode_cmd->add_option("--seq", code.seq, "Bit sequence file")->required()->check(CLI::ExistingFile);
  decode_cmd->add_option("--out", code.out, "Output file (stdout when omitted)");
  decode_cmd->callback([&] { rc = run_decode(code); });

  auto* build_cmd = code_cmd->add_subcommand("build", "Canonical code for a dyadic space");
  build_cmd->add_option("--space", code.space, "Space file")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--out", code.out, "Output file (stdout when omitted)");
  build_cmd->callback([&] { rc = run_build(code); });

  SecrecyArgs sec;
  auto* secrecy_cmd = app.add_subcommand("secrecy", "Encryption schemes");
  secrecy_cmd->require_subcommand(1);
  auto* check_cmd = secrecy_cmd->add_subcommand("check", "Decide perfect secrecy");
  check_cmd->add_option("scheme", sec.scheme, "Scheme file")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--msg", sec.msg_space, "Check under this message distribution only")
      ->check(CLI::ExistingFile);
  check_cmd->callback([&] { rc = run_secrecy(sec); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return rc;
}
