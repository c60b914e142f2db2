#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "ensemble/coding.hpp"
#include "ensemble/diagnostics.hpp"
#include "ensemble/error.hpp"
#include "ensemble/io.hpp"
#include "ensemble/mltest.hpp"
#include "ensemble/secrecy.hpp"
#include "ensemble/stream.hpp"

namespace py = pybind11;
using namespace ensemble;

namespace {

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(to_string(r));
}

Rational rational(const py::handle& value) {
  return parse_rational(py::str(value).cast<std::string>());
}

std::vector<py::object> fractions(const std::vector<Rational>& values) {
  std::vector<py::object> out;
  for (const auto& v : values) out.push_back(fraction(v));
  return out;
}

std::vector<std::string> names(const Alphabet& a, const Word& w) {
  std::vector<std::string> out;
  for (Symbol s : w) out.push_back(a.name(s));
  return out;
}

Word indices(const Alphabet& a, const std::vector<std::string>& tokens) {
  Word out;
  for (const auto& t : tokens) out.push_back(a.index(t));
  return out;
}

std::vector<Word> words(const Alphabet& a, const std::vector<std::string>& texts) {
  std::vector<Word> out;
  for (const auto& t : texts) out.push_back(a.parse_word(t));
  return out;
}

FiniteProbabilitySpace space_from_dict(const py::dict& weights) {
  std::vector<std::string> symbols;
  std::vector<Rational> w;
  for (auto item : weights) {
    symbols.push_back(py::str(item.first).cast<std::string>());
    w.push_back(rational(item.second));
  }
  return FiniteProbabilitySpace(Alphabet::make(symbols), std::move(w));
}

Event event_of(const AlphabetPtr& a, const std::vector<std::string>& members) { return Event::of(a, members); }

// Python handle for a single-consumer stream; operators move the stream out.
struct Stream {
  StreamPtr inner;

  SymbolStream& get() {
    if (!inner) throw Error(ErrorKind::InvalidArgument, "stream was already consumed by another operator");
    return *inner;
  }
  StreamPtr take() {
    get();
    return std::move(inner);
  }
};

Stream wrap(StreamPtr s) { return Stream{std::move(s)}; }

py::dict verdict_dict(const Verdict& v) {
  py::dict d;
  d["check"] = v.check;
  d["statistic"] = v.statistic;
  d["threshold"] = v.threshold;
  d["passed"] = v.passed;
  d["formula"] = v.formula;
  d["note"] = v.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact finite probability, Martin-Lof tests and sequence diagnostics";

  static py::exception<Error> error_type(m, "EnsembleError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      if (auto* se = dynamic_cast<const StreamError*>(&e)) exc.attr("scanned") = se->scanned();
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<FiniteProbabilitySpace>(m, "Space")
      .def(py::init(&space_from_dict), py::arg("weights"))
      .def_static(
          "uniform", [](const std::vector<std::string>& symbols) { return uniform_space(Alphabet::make(symbols)); },
          py::arg("symbols"))
      .def_property_readonly("symbols", [](const FiniteProbabilitySpace& s) { return s.alphabet()->symbols(); })
      .def_property_readonly("weights",
                             [](const FiniteProbabilitySpace& s) {
                               py::dict d;
                               for (Symbol i = 0; i < s.size(); ++i) d[py::str(s.alphabet()->name(i))] = fraction(s.weight(i));
                               return d;
                             })
      .def("__len__", &FiniteProbabilitySpace::size)
      .def("__eq__", [](const FiniteProbabilitySpace& a, const FiniteProbabilitySpace& b) { return a == b; })
      .def("__repr__", [](const FiniteProbabilitySpace& s) { return "Space(" + io::format_space(s) + ")"; })
      .def(
          "event_prob",
          [](const FiniteProbabilitySpace& s, const std::vector<std::string>& members) {
            return fraction(event_prob(s, event_of(s.alphabet(), members)));
          },
          py::arg("members"))
      .def(
          "string_prob",
          [](const FiniteProbabilitySpace& s, const std::string& word) {
            return fraction(string_prob(s, s.alphabet()->parse_word(word)));
          },
          py::arg("word"))
      .def(
          "conditional",
          [](const FiniteProbabilitySpace& s, const std::vector<std::string>& members) {
            return conditional_space(s, event_of(s.alphabet(), members));
          },
          py::arg("members"))
      .def("format", [](const FiniteProbabilitySpace& s) { return io::format_space(s); });

  m.def(
      "product_space", [](const std::vector<FiniteProbabilitySpace>& spaces) { return product_space(spaces); },
      py::arg("spaces"));
  m.def(
      "events_independent",
      [](const FiniteProbabilitySpace& s, const std::vector<std::vector<std::string>>& events) {
        std::vector<Event> evs;
        for (const auto& e : events) evs.push_back(event_of(s.alphabet(), e));
        const auto v = events_independent(s, evs);
        return py::make_tuple(v.independent, v.witness);
      },
      py::arg("space"), py::arg("events"));

  py::class_<FinitePrefix>(m, "Prefix")
      .def_property_readonly("symbols", [](const FinitePrefix& p) { return names(*p.alphabet, p.symbols); })
      .def_property_readonly("alphabet", [](const FinitePrefix& p) { return p.alphabet->symbols(); })
      .def_readonly("origin", &FinitePrefix::origin)
      .def("__len__", &FinitePrefix::size)
      .def("render", &FinitePrefix::render)
      .def("__repr__", [](const FinitePrefix& p) { return "Prefix(" + p.render() + ")"; });

  m.def(
      "prefix",
      [](const std::vector<std::string>& symbols, std::optional<std::vector<std::string>> alphabet) {
        std::vector<std::string> alpha;
        if (alphabet) {
          alpha = *alphabet;
        } else {
          for (const auto& s : symbols) {
            if (std::find(alpha.begin(), alpha.end(), s) == alpha.end()) alpha.push_back(s);
          }
        }
        auto a = Alphabet::make(alpha);
        return FinitePrefix{a, indices(*a, symbols), "python"};
      },
      py::arg("symbols"), py::arg("alphabet") = py::none());

  py::class_<Stream>(m, "Stream")
      .def_property_readonly("alphabet", [](Stream& s) { return s.get().alphabet()->symbols(); })
      .def_property_readonly("origin", [](Stream& s) { return s.get().origin(); })
      .def("next", [](Stream& s) { return s.get().alphabet()->name(s.get().next()); })
      .def(
          "take", [](Stream& s, std::size_t n) { return take_prefix(s.get(), n); }, py::arg("n"))
      .def(
          "take_available", [](Stream& s, std::size_t n) { return take_available(s.get(), n); }, py::arg("n"));

  m.def(
      "pseudo_ensemble", [](const FiniteProbabilitySpace& s, std::uint64_t seed) { return wrap(pseudo_ensemble(s, seed)); },
      py::arg("space"), py::arg("seed"));
  m.def(
      "from_prefix", [](const FinitePrefix& p) { return wrap(from_prefix(p)); }, py::arg("prefix"));
  m.def(
      "map_rv",
      [](Stream& s, const std::map<std::string, std::string>& mapping, std::optional<std::vector<std::string>> target) {
        std::vector<std::string> tgt;
        if (target) {
          tgt = *target;
        } else {
          for (const auto& [from, to] : mapping) {
            if (std::find(tgt.begin(), tgt.end(), to) == tgt.end()) tgt.push_back(to);
          }
        }
        auto x = RandomVariable::from_names(s.get().alphabet(), Alphabet::make(tgt), mapping);
        return wrap(map_rv(x, s.take()));
      },
      py::arg("stream"), py::arg("mapping"), py::arg("target") = py::none());
  m.def(
      "indicator",
      [](Stream& s, const std::vector<std::string>& members) {
        const auto x = RandomVariable::indicator(event_of(s.get().alphabet(), members));
        return wrap(map_rv(x, s.take()));
      },
      py::arg("stream"), py::arg("members"));
  m.def(
      "filter_event",
      [](Stream& s, const std::vector<std::string>& members, std::uint64_t budget) {
        const auto b = event_of(s.get().alphabet(), members);
        return wrap(filter_event(b, s.take(), budget));
      },
      py::arg("stream"), py::arg("members"), py::arg("budget"));
  m.def(
      "shuffle", [](Stream& s, const std::string& spec) { return wrap(shuffle(Injection::parse(spec), s.take())); },
      py::arg("stream"), py::arg("injection"));
  m.def(
      "select",
      [](Stream& s, const std::string& rule, std::uint64_t budget) {
        const auto r = SelectionRule::parse(rule, s.get().alphabet());
        return wrap(select(r, s.take(), budget));
      },
      py::arg("stream"), py::arg("rule"), py::arg("budget"));
  m.def(
      "interleave", [](Stream& a, Stream& b) { return wrap(interleave(a.take(), b.take())); }, py::arg("a"),
      py::arg("b"));
  m.def(
      "von_neumann", [](Stream& s, std::uint64_t budget) { return wrap(von_neumann(s.take(), budget)); },
      py::arg("stream"), py::arg("budget"));

  m.def(
      "open_measure",
      [](const FiniteProbabilitySpace& s, const std::vector<std::string>& strings) {
        return fraction(open_measure(s, words(*s.alphabet(), strings)));
      },
      py::arg("space"), py::arg("strings"));
  m.def(
      "certify_level",
      [](const FiniteProbabilitySpace& s, unsigned index, const std::vector<std::string>& strings) {
        const auto r = certify_level(s, TestLevel{s.alphabet(), index, words(*s.alphabet(), strings), std::nullopt});
        py::dict d;
        d["certified"] = r.certified;
        d["measure"] = fraction(r.measure);
        d["bound"] = fraction(r.bound);
        return d;
      },
      py::arg("space"), py::arg("index"), py::arg("strings"));
  m.def(
      "member",
      [](const FiniteProbabilitySpace& s, const std::vector<std::string>& strings, const std::string& prefix) {
        return member(TestLevel{s.alphabet(), 1, words(*s.alphabet(), strings), std::nullopt},
                      s.alphabet()->parse_word(prefix));
      },
      py::arg("space"), py::arg("strings"), py::arg("prefix"));
  m.def(
      "lln_parameters",
      [](const FiniteProbabilitySpace& q, py::handle eps) {
        const LlnTest t(q, rational(eps));
        py::dict d;
        d["r_left"] = fraction(t.r_left());
        d["r_right"] = fraction(t.r_right());
        d["c"] = fraction(t.c());
        return d;
      },
      py::arg("q"), py::arg("eps"));

  py::class_<DiagnosticReport>(m, "Report")
      .def_readonly("title", &DiagnosticReport::title)
      .def_readonly("provenance", &DiagnosticReport::provenance)
      .def_property_readonly("passed", &DiagnosticReport::passed)
      .def_property_readonly("verdicts",
                             [](const DiagnosticReport& r) {
                               py::list out;
                               for (const auto& v : r.verdicts) out.append(verdict_dict(v));
                               return out;
                             })
      .def("render_table", &DiagnosticReport::render_table)
      .def("render_kv", &DiagnosticReport::render_kv);

  m.def("frequencies", [](const FinitePrefix& p) {
    const auto t = freq_table(p);
    py::dict d;
    for (Symbol i = 0; i < t.counts.size(); ++i) d[py::str(t.alphabet->name(i))] = t.counts[i];
    return d;
  });
  m.def("lln_report", &lln_report, py::arg("space"), py::arg("prefix"), py::arg("eps"));
  m.def(
      "chernoff_bound",
      [](const FiniteProbabilitySpace& q, py::handle eps, std::uint64_t n) { return chernoff_bound(q, rational(eps), n); },
      py::arg("q"), py::arg("eps"), py::arg("n"));
  m.def("default_epsilon", &default_epsilon, py::arg("n"), py::arg("confidence") = 1e-6);
  m.def("incompressibility_proxy", &incompressibility_proxy, py::arg("bits"));
  m.def(
      "independence_distance",
      [](const std::vector<FinitePrefix>& prefixes) { return independence_distance(prefixes); }, py::arg("prefixes"));
  m.def("equivalence_distance", &equivalence_distance, py::arg("a"), py::arg("b"));

  py::class_<InstantaneousCode>(m, "Code")
      .def(py::init([](const py::dict& table) {
             std::vector<std::string> symbols;
             std::vector<std::string> codewords;
             for (auto item : table) {
               symbols.push_back(py::str(item.first).cast<std::string>());
               codewords.push_back(py::str(item.second).cast<std::string>());
             }
             return InstantaneousCode(Alphabet::make(symbols), codewords);
           }),
           py::arg("codewords"))
      .def_property_readonly("table",
                             [](const InstantaneousCode& c) {
                               py::dict d;
                               for (Symbol i = 0; i < c.codewords().size(); ++i) {
                                 d[py::str(c.source()->name(i))] = c.codeword(i);
                               }
                               return d;
                             })
      .def("format", [](const InstantaneousCode& c) { return io::format_code(c); });

  m.def("validate_code", [](const InstantaneousCode& c) {
    static const char* kinds[] = {"None", "EmptyCodeword", "DuplicateCodeword", "PrefixViolation"};
    const auto a = validate_code(c);
    py::dict d;
    d["ok"] = a.ok;
    d["violation"] = kinds[static_cast<int>(a.violation)];
    d["symbols"] = names(*c.source(), a.symbols);
    d["kraft_sum"] = fraction(a.kraft_sum);
    return d;
  });
  m.def("shannon_entropy", [](const FiniteProbabilitySpace& s) {
    const auto h = shannon_entropy(s);
    py::dict d;
    d["decimal"] = h.decimal;
    d["bits"] = h.bits;
    d["exact"] = h.exact ? fraction(*h.exact) : py::none();
    return d;
  });
  m.def(
      "avg_length", [](const FiniteProbabilitySpace& s, const InstantaneousCode& c) { return fraction(avg_length(s, c)); },
      py::arg("space"), py::arg("code"));
  m.def(
      "is_abs_optimal",
      [](const FiniteProbabilitySpace& s, const InstantaneousCode& c) { return is_abs_optimal(s, c).optimal; },
      py::arg("space"), py::arg("code"));
  m.def("build_dyadic_code", &build_dyadic_code, py::arg("space"));
  m.def("code_q_space", &code_q_space, py::arg("code"));
  m.def(
      "encode",
      [](const InstantaneousCode& c, const std::vector<std::string>& symbols) {
        return binary_alphabet()->render(encode_word(c, indices(*c.source(), symbols)));
      },
      py::arg("code"), py::arg("symbols"));
  m.def(
      "decode",
      [](const InstantaneousCode& c, const std::string& bits) {
        const auto r = decode_word(c, binary_alphabet()->parse_word(bits.empty() ? "~" : bits));
        return py::make_tuple(names(*c.source(), r.symbols), binary_alphabet()->render(r.remainder));
      },
      py::arg("code"), py::arg("bits"));
  m.def(
      "encode_stream", [](const InstantaneousCode& c, Stream& s) { return wrap(encode_stream(c, s.take())); },
      py::arg("code"), py::arg("stream"));
  m.def(
      "decode_stream", [](const InstantaneousCode& c, Stream& s) { return wrap(decode_stream(c, s.take())); },
      py::arg("code"), py::arg("stream"));

  py::class_<EncryptionScheme>(m, "Scheme")
      .def_property_readonly("messages", [](const EncryptionScheme& s) { return s.messages()->symbols(); })
      .def_property_readonly("ciphers", [](const EncryptionScheme& s) { return s.ciphers()->symbols(); })
      .def_property_readonly("key_space", &EncryptionScheme::key_space)
      .def("with_keys", &EncryptionScheme::with_keys, py::arg("key_space"))
      .def(
          "enc",
          [](const EncryptionScheme& s, const std::string& msg, const std::string& key) {
            return s.ciphers()->name(s.enc(s.messages()->index(msg), s.keys()->index(key)));
          },
          py::arg("message"), py::arg("key"));

  auto secrecy_dict = [](const EncryptionScheme& s, const SecrecyVerdict& v) {
    py::dict d;
    d["secret"] = v.secret;
    d["witness"] = v.witness ? py::object(py::make_tuple(s.messages()->name(v.witness->first),
                                                         s.ciphers()->name(v.witness->second)))
                             : py::none();
    d["joint"] = fraction(v.joint);
    d["product"] = fraction(v.product);
    return d;
  };
  m.def("otp_scheme", &otp_scheme, py::arg("modulus"));
  m.def("validate_scheme", [](const EncryptionScheme& s) { return validate_scheme(s).ok; }, py::arg("scheme"));
  m.def(
      "is_perfectly_secret", [=](const EncryptionScheme& s) { return secrecy_dict(s, is_perfectly_secret(s)); },
      py::arg("scheme"));
  m.def(
      "secrecy_under",
      [=](const EncryptionScheme& s, const FiniteProbabilitySpace& p) { return secrecy_dict(s, secrecy_under(s, p)); },
      py::arg("scheme"), py::arg("p_msg"));
  m.def(
      "joint_distribution",
      [](const EncryptionScheme& s, const FiniteProbabilitySpace& p) {
        const auto j = joint_distribution(s, p);
        py::dict d;
        d["message"] = fractions(j.message_marginal);
        d["cipher"] = fractions(j.cipher_marginal);
        py::list rows;
        for (const auto& row : j.joint) rows.append(fractions(row));
        d["joint"] = rows;
        return d;
      },
      py::arg("scheme"), py::arg("p_msg"));

  m.def("read_space", &io::read_space, py::arg("path"));
  m.def("read_code", &io::read_code, py::arg("path"));
  m.def("read_scheme", &io::read_scheme, py::arg("path"));
  m.def(
      "read_sequence",
      [](const std::filesystem::path& path, std::optional<std::vector<std::string>> alphabet) {
        return io::read_sequence(path, alphabet ? Alphabet::make(*alphabet) : nullptr);
      },
      py::arg("path"), py::arg("alphabet") = py::none());
}
