#include "ensemble/diagnostics.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "ensemble/error.hpp"

namespace ensemble {

namespace {

using Dec = boost::multiprecision::cpp_dec_float_50;

Dec to_dec(const Rational& r) { return Dec(r.get_num().get_str()) / Dec(r.get_den().get_str()); }

double round_up(const Dec& v) { return std::nextafter(v.convert_to<double>(), HUGE_VAL); }

Dec chernoff_value(const Dec& p0, const Dec& p1, const Dec& eps, std::uint64_t n) {
  return 2 * boost::multiprecision::exp(-(eps * eps) / (2 * p0 * p1) * Dec(n));
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

FrequencyTable freq_table(const AlphabetPtr& alphabet, std::span<const Symbol> symbols) {
  FrequencyTable t{alphabet, std::vector<std::uint64_t>(alphabet->size(), 0), symbols.size()};
  for (Symbol s : symbols) {
    if (s >= alphabet->size()) throw Error(ErrorKind::UnknownSymbol, "symbol index out of range");
    ++t.counts[s];
  }
  return t;
}

FrequencyTable freq_table(const FinitePrefix& prefix) { return freq_table(prefix.alphabet, prefix.symbols); }

bool DiagnosticReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

std::string DiagnosticReport::render_table() const {
  std::ostringstream os;
  os << title << "\n";
  os << "input: " << provenance << "\n";
  std::size_t w_check = 5, w_stat = 9, w_thr = 9;
  for (const auto& v : verdicts) {
    w_check = std::max(w_check, v.check.size());
    w_stat = std::max(w_stat, fmt(v.statistic).size());
    w_thr = std::max(w_thr, fmt(v.threshold).size());
  }
  auto col = [&os](const std::string& text, std::size_t width) {
    os << std::left << std::setw(static_cast<int>(width)) << text << "  ";
  };
  col("check", w_check);
  col("statistic", w_stat);
  col("threshold", w_thr);
  col("ok", 4);
  os << "formula\n";
  for (const auto& v : verdicts) {
    col(v.check, w_check);
    col(fmt(v.statistic), w_stat);
    col(fmt(v.threshold), w_thr);
    col(v.passed ? "pass" : "FAIL", 4);
    os << v.formula;
    if (!v.note.empty()) os << "  [" << v.note << "]";
    os << "\n";
  }
  os << "overall: " << (passed() ? "pass" : "FAIL") << "\n";
  return os.str();
}

std::string DiagnosticReport::render_kv() const {
  std::ostringstream os;
  os << "title=" << title << "\n";
  os << "provenance=" << provenance << "\n";
  os << "passed=" << (passed() ? "true" : "false") << "\n";
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const auto& v = verdicts[i];
    const std::string p = "verdict." + std::to_string(i) + ".";
    os << p << "check=" << v.check << "\n";
    os << p << "statistic=" << fmt(v.statistic) << "\n";
    os << p << "threshold=" << fmt(v.threshold) << "\n";
    os << p << "passed=" << (v.passed ? "true" : "false") << "\n";
    os << p << "formula=" << v.formula << "\n";
    if (!v.note.empty()) os << p << "note=" << v.note << "\n";
  }
  return os.str();
}

DiagnosticReport lln_report(const FiniteProbabilitySpace& space, const FinitePrefix& prefix, double eps) {
  require_same(*space.alphabet(), *prefix.alphabet, "prefix alphabet differs from space");
  if (prefix.symbols.empty()) throw Error(ErrorKind::EmptyPrefix, "law of large numbers needs n > 0");
  const auto table = freq_table(prefix);
  const std::uint64_t n = table.total;
  DiagnosticReport report{"law of large numbers, n=" + std::to_string(n), prefix.origin, {}};

  std::optional<Symbol> certain;
  for (Symbol a = 0; a < space.size(); ++a) {
    if (space.weight(a) == 1) certain = a;
  }
  for (Symbol a = 0; a < space.size(); ++a) {
    const auto& name = space.alphabet()->name(a);
    const Rational& w = space.weight(a);
    const double p = to_double(w);
    Verdict v;
    v.check = "deviation[" + name + "]";
    v.statistic = std::fabs(table.frequency(a) - p);
    v.threshold = eps;
    v.passed = v.statistic <= eps;
    v.formula = "|N_a/n - P(a)| <= eps";
    if (w > 0 && w < 1) {
      const Dec p1 = to_dec(w);
      const Dec p0 = 1 - p1;
      const Dec e(eps);
      if (e > 0 && e <= p0 * p1) {
        v.note = "chernoff 2exp(-eps^2 n/(2P(a)(1-P(a))))=" + fmt(round_up(chernoff_value(p0, p1, e, n)));
      } else {
        v.note = "chernoff n/a: eps > P(a)(1-P(a))";
      }
    }
    report.verdicts.push_back(std::move(v));

    if (w == 0) {
      Verdict z;
      z.check = "zero-weight[" + name + "]";
      z.statistic = static_cast<double>(table.counts[a]);
      z.threshold = 0;
      z.passed = table.counts[a] == 0;
      z.formula = "N_a = 0 when P(a) = 0";
      report.verdicts.push_back(std::move(z));
    }
  }
  if (certain) {
    Verdict v;
    v.check = "point-mass[" + space.alphabet()->name(*certain) + "]";
    v.statistic = static_cast<double>(n - table.counts[*certain]);
    v.threshold = 0;
    v.passed = table.counts[*certain] == n;
    v.formula = "only a occurs when P(a) = 1";
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

double chernoff_bound(const FiniteProbabilitySpace& q, const Rational& eps, std::uint64_t n) {
  const Symbol one = binary_one(*q.alphabet());
  const Rational q1 = q.weight(one);
  const Rational q0 = 1 - q1;
  if (eps <= 0 || eps > q0 * q1) {
    throw Error(ErrorKind::EpsilonOutOfRange,
                "eps = " + to_string(eps) + " outside (0, " + to_string(q0 * q1) + "]");
  }
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "Chernoff bound needs n >= 1");
  return round_up(chernoff_value(to_dec(q0), to_dec(q1), to_dec(eps), n));
}

double default_epsilon(std::uint64_t n, double confidence) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "default epsilon needs n >= 1");
  if (!(confidence > 0 && confidence < 1)) {
    throw Error(ErrorKind::InvalidArgument, "confidence must lie in (0, 1)");
  }
  // 2 exp(-eps^2 n / (2 * 1/4)) = confidence
  return std::sqrt(std::log(2.0 / confidence) / (2.0 * static_cast<double>(n)));
}

std::vector<std::uint8_t> pack_bits(const FinitePrefix& bits) {
  const Symbol one = binary_one(*bits.alphabet);
  std::vector<std::uint8_t> out((bits.symbols.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.symbols.size(); ++i) {
    if (bits.symbols[i] == one) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

double incompressibility_proxy(const FinitePrefix& bits) {
  binary_one(*bits.alphabet);
  if (bits.symbols.size() < CompressorConfig::kMinBits) {
    throw Error(ErrorKind::Inconclusive, "compression proxy needs at least " +
                                             std::to_string(CompressorConfig::kMinBits) + " bits");
  }
  auto packed = pack_bits(bits);
  z_stream zs{};
  if (deflateInit2(&zs, CompressorConfig::kLevel, Z_DEFLATED, CompressorConfig::kWindowBits,
                   CompressorConfig::kMemLevel, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorKind::IoError, "zlib initialisation failed");
  }
  std::vector<std::uint8_t> out(deflateBound(&zs, packed.size()));
  zs.next_in = packed.data();
  zs.avail_in = static_cast<uInt>(packed.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorKind::IoError, "zlib deflate did not finish");
  return static_cast<double>(produced) / static_cast<double>(packed.size());
}

double independence_distance(std::span<const FinitePrefix> prefixes) {
  if (prefixes.empty()) throw Error(ErrorKind::InvalidArgument, "no prefixes given");
  const std::size_t n = prefixes.front().size();
  for (const auto& p : prefixes) {
    if (p.size() != n) throw Error(ErrorKind::LengthMismatch, "prefixes differ in length");
  }
  if (n == 0) throw Error(ErrorKind::LengthMismatch, "prefixes must be nonempty");

  std::vector<FrequencyTable> marginals;
  for (const auto& p : prefixes) marginals.push_back(freq_table(p));

  // Tuples encoded in mixed radix over the alphabet sizes.
  std::unordered_map<std::string, std::uint64_t> joint;
  std::string key(prefixes.size() * sizeof(Symbol), '\0');
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < prefixes.size(); ++c) {
      std::memcpy(key.data() + c * sizeof(Symbol), &prefixes[c].symbols[i], sizeof(Symbol));
    }
    ++joint[key];
  }

  // Every tuple of observed symbols, including those with zero joint count.
  std::vector<std::vector<Symbol>> observed(prefixes.size());
  for (std::size_t c = 0; c < prefixes.size(); ++c) {
    for (Symbol s = 0; s < marginals[c].counts.size(); ++s) {
      if (marginals[c].counts[s] > 0) observed[c].push_back(s);
    }
  }
  double worst = 0.0;
  std::vector<std::size_t> pos(prefixes.size(), 0);
  for (;;) {
    double product = 1.0;
    for (std::size_t c = 0; c < prefixes.size(); ++c) {
      const Symbol s = observed[c][pos[c]];
      product *= marginals[c].frequency(s);
      std::memcpy(key.data() + c * sizeof(Symbol), &s, sizeof(Symbol));
    }
    auto it = joint.find(key);
    const double jf = it == joint.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n);
    worst = std::max(worst, std::fabs(jf - product));
    std::size_t c = prefixes.size();
    while (c > 0) {
      if (++pos[c - 1] < observed[c - 1].size()) break;
      pos[c - 1] = 0;
      --c;
    }
    if (c == 0) break;
  }
  return worst;
}

DiagnosticReport empirical_independence(std::span<const FinitePrefix> prefixes, double eps) {
  DiagnosticReport report{"empirical independence, n=" + std::to_string(prefixes.empty() ? 0 : prefixes.front().size()),
                          "", {}};
  for (std::size_t i = 0; i < prefixes.size(); ++i) {
    report.provenance += (i ? " x " : "") + prefixes[i].origin;
  }
  Verdict v;
  v.check = "independence";
  v.statistic = independence_distance(prefixes);
  v.threshold = eps;
  v.passed = v.statistic <= eps;
  v.formula = "max_t |joint(t) - prod_i marginal_i(t_i)| <= eps";
  v.note = "empirical surrogate (L-infinity), not a randomness verdict";
  report.verdicts.push_back(std::move(v));
  return report;
}

double equivalence_distance(const FinitePrefix& a, const FinitePrefix& b) {
  require_same(*a.alphabet, *b.alphabet, "compared prefixes need one alphabet");
  if (a.symbols.empty() || b.symbols.empty()) throw Error(ErrorKind::EmptyPrefix, "empty prefix");
  const auto ta = freq_table(a);
  const auto tb = freq_table(b);
  double worst = 0.0;
  for (Symbol s = 0; s < ta.counts.size(); ++s) {
    worst = std::max(worst, std::fabs(ta.frequency(s) - tb.frequency(s)));
  }
  return worst;
}

DiagnosticReport equivalence_check(const FinitePrefix& a, const FinitePrefix& b, double eps) {
  DiagnosticReport report{"ensemble equivalence", a.origin + " vs " + b.origin, {}};
  Verdict v;
  v.check = "equivalence";
  v.statistic = equivalence_distance(a, b);
  v.threshold = eps;
  v.passed = v.statistic <= eps;
  v.formula = "max_a |freq_A(a) - freq_B(a)| <= eps";
  v.note = "empirical surrogate (L-infinity), not a randomness verdict";
  report.verdicts.push_back(std::move(v));
  return report;
}

}  // namespace ensemble
