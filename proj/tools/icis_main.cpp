#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "icis/deform.hpp"
#include "icis/groebner.hpp"
#include "icis/parse.hpp"
#include "icis/report.hpp"

namespace {

using namespace icis;

constexpr int kExitOk = 0;
constexpr int kExitNotIcis = 2;
constexpr int kExitParse = 3;
constexpr int kExitNeedsExtension = 4;
constexpr int kExitBudget = 5;

struct Config {
  std::uint64_t p = 0;
  unsigned k = 1;
  int k_cap = 64;
  int precision = 0;  // 0 = exact input
  std::string format = "table";
  std::uint64_t seed = 0;
  bool verbose = false;
};

Field config_field(const Config& c) { return Field::make(c.p, c.k); }

int effective_kcap(const Config& c) {
  if (const char* env = std::getenv("ICIS_KCAP")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return c.k_cap;
}

MapGerm parse_input(const Config& c, const std::string& text) {
  int prec = c.precision > 0 ? c.precision : kExact;
  return parse_germ(text, config_field(c), 0, prec);
}

SingularityType parse_type(const std::string& name,
                           const std::vector<long>& params) {
  auto need = [&](size_t n) {
    if (params.size() != n)
      throw InvalidParameters("type " + name + " takes " + std::to_string(n) +
                              " parameter(s)");
  };
  if (name == "A") {
    need(1);
    return SingularityType::A_k(params[0]);
  }
  if (name == "F") {
    need(2);
    return SingularityType::F(params[0], params[1]);
  }
  if (name == "F22_0") return SingularityType::simple_tag(TypeTag::F22_0);
  if (name == "F22_1") return SingularityType::simple_tag(TypeTag::F22_1);
  if (name == "G5_0") return SingularityType::simple_tag(TypeTag::G5_0);
  if (name == "G5_1") return SingularityType::simple_tag(TypeTag::G5_1);
  if (name == "G7") return SingularityType::simple_tag(TypeTag::G7);
  if (name == "H") {
    need(1);
    return SingularityType::simple_tag(TypeTag::H, params[0]);
  }
  if (name == "I0_odd") {
    need(1);
    return SingularityType::simple_tag(TypeTag::I0_odd, params[0]);
  }
  if (name == "I1_odd") {
    need(1);
    return SingularityType::simple_tag(TypeTag::I1_odd, params[0]);
  }
  if (name == "I0_even") {
    need(1);
    return SingularityType::simple_tag(TypeTag::I0_even, params[0]);
  }
  if (name == "I1_even") {
    need(1);
    return SingularityType::simple_tag(TypeTag::I1_even, params[0]);
  }
  throw InvalidParameters("unknown type tag " + name);
}

int emit_classification(const Config& cfg, const ClassifyReport& rep) {
  if (cfg.format == "json") {
    auto j = report_json(rep);
    if (!cfg.verbose) j["case_chain"] = nlohmann::json::array();
    std::cout << j.dump() << "\n";
  } else if (cfg.format == "csv") {
    std::cout << "type,char,ext,tau,tau_sec,determinacy,simple,reason\n";
    std::cout << '"' << rep.type.str() << '"' << ',' << rep.characteristic
              << ',' << rep.extension << ',' << rep.tau << ',' << rep.tau_sec
              << ',' << rep.determinacy << ','
              << (rep.type.simple() ? "true" : "false") << ',' << '"'
              << rep.type.reason << '"' << "\n";
  } else {
    std::cout << report_table(rep);
    if (cfg.verbose)
      for (auto& s : rep.case_chain) std::cout << "  . " << s << "\n";
  }
  if (rep.type.tag == TypeTag::NotICIS) return kExitNotIcis;
  if (rep.witness == WitnessStatus::NeedsExtension) return kExitNeedsExtension;
  return kExitOk;
}

int run_corpus(const Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return 1;
  }
  struct Line {
    std::string raw;
    std::string expected;
    std::string germ;
    std::uint64_t p;
    unsigned k;
  };
  std::vector<Line> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    std::string s = raw;
    if (s.empty() || s[0] == '#') continue;
    // format: p k ; f1 ; f2 ; expected
    std::istringstream head(s);
    Line ln;
    ln.raw = s;
    head >> ln.p >> ln.k;
    std::string rest;
    std::getline(head, rest);
    auto first = rest.find(';');
    auto last = rest.rfind(';');
    if (first == std::string::npos || last == first) {
      std::cerr << "malformed corpus line: " << s << "\n";
      return 1;
    }
    ln.germ = rest.substr(first + 1, last - first - 1);
    ln.expected = rest.substr(last + 1);
    ln.expected.erase(0, ln.expected.find_first_not_of(" \t"));
    ln.expected.erase(ln.expected.find_last_not_of(" \t") + 1);
    lines.push_back(ln);
  }
  // classification parallelizes per line; output order matches input order
  std::vector<std::future<std::string>> results;
  for (auto& ln : lines) {
    results.push_back(std::async(std::launch::async, [&ln]() {
      try {
        Field F = Field::make(ln.p, ln.k);
        MapGerm g = parse_germ(ln.germ, F);
        auto rep = classify_icis(g);
        return rep.type.str();
      } catch (const std::exception& e) {
        return std::string("error: ") + e.what();
      }
    }));
  }
  int failures = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string got = results[i].get();
    bool ok = got == lines[i].expected;
    if (!ok) ++failures;
    std::cout << (ok ? "PASS " : "FAIL ") << lines[i].germ << " -> " << got;
    if (!ok) std::cout << " (expected " << lines[i].expected << ")";
    std::cout << "\n";
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classification of 0-dimensional ICIS over exact fields"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  app.add_option("--char,-p", cfg.p, "field characteristic (0 = rationals)");
  app.add_option("--ext,-k", cfg.k, "extension degree");
  app.add_option("--kcap", cfg.k_cap, "jet stabilization cap");
  app.add_option("--precision", cfg.precision, "input truncation override");
  app.add_option("--format", cfg.format, "output format: table|json|csv");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_flag("--verbose", cfg.verbose, "emit the case chain");

  std::string poly_text, corpus_path, type_name, mode = "exhaustive";
  std::vector<long> type_params;
  std::vector<int> weights, degrees;
  long samples = 100;
  bool no_filter = false;

  auto* c_classify = app.add_subcommand("classify", "classify a germ");
  c_classify->add_option("--poly", poly_text, "germ, components separated by ';'");
  c_classify->add_option("--corpus", corpus_path, "batch file: p k ; f1 ; f2 ; expected");

  auto* c_tjurina = app.add_subcommand("tjurina", "tau and tau_sec");
  c_tjurina->add_option("--poly", poly_text)->required();

  auto* c_basis = app.add_subcommand("t1-basis", "monomial basis of T^1,sec");
  c_basis->add_option("--poly", poly_text)->required();

  auto* c_icis = app.add_subcommand("is-icis", "ICIS test with certificate");
  c_icis->add_option("--poly", poly_text)->required();

  auto* c_nf = app.add_subcommand("normal-form", "table normal form");
  c_nf->add_option("--type", type_name)->required();
  c_nf->add_option("--params", type_params);

  auto* c_unfold = app.add_subcommand("unfold", "fiber classification histogram");
  c_unfold->add_option("--type", type_name);
  c_unfold->add_option("--params", type_params);
  c_unfold->add_option("--poly", poly_text);
  c_unfold->add_option("--mode", mode, "exhaustive|random");
  c_unfold->add_option("--samples", samples);
  c_unfold->add_flag("--no-filter", no_filter, "keep order-1 directions");

  auto* c_order = app.add_subcommand("order", "weighted order v_{d,a}");
  c_order->add_option("--poly", poly_text)->required();
  c_order->add_option("--weights", weights)->required();
  c_order->add_option("--degrees", degrees)->required();

  long max_pairs = 500000, max_basis = 5000, max_degree = 64;
  auto* c_repro = app.add_subcommand("repro-char2",
                                     "reproduce the characteristic-2 elimination");
  c_repro->add_option("--max-pairs", max_pairs, "S-pair budget");
  c_repro->add_option("--max-basis", max_basis, "basis size budget");
  c_repro->add_option("--max-degree", max_degree, "degree budget");

  CLI11_PARSE(app, argc, argv);

  try {
    int kcap = effective_kcap(cfg);
    ClassifyOptions copts;
    copts.k_cap = kcap;

    if (c_classify->parsed()) {
      if (!corpus_path.empty()) return run_corpus(cfg, corpus_path);
      if (poly_text.empty()) {
        std::cerr << "classify needs --poly or --corpus\n";
        return 1;
      }
      auto rep = classify_icis(parse_input(cfg, poly_text), copts);
      return emit_classification(cfg, rep);
    }
    if (c_tjurina->parsed()) {
      MapGerm g = parse_input(cfg, poly_text);
      auto t = tjurina(g, kcap);
      auto ts = tjurina_sec(g, kcap);
      if (cfg.format == "json") {
        nlohmann::json j;
        j["tau"] = t.finite ? nlohmann::json(t.value) : nlohmann::json();
        j["tau_sec"] = ts.finite ? nlohmann::json(ts.value) : nlohmann::json();
        std::cout << j.dump() << "\n";
      } else {
        std::cout << "tau      " << (t.finite ? std::to_string(t.value) : "inf")
                  << "\n";
        std::cout << "tau_sec  "
                  << (ts.finite ? std::to_string(ts.value) : "inf") << "\n";
      }
      return kExitOk;
    }
    if (c_basis->parsed()) {
      MapGerm g = parse_input(cfg, poly_text);
      auto basis = t1sec_basis(g, kcap);
      if (cfg.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (auto& c : basis) rows.push_back(coord_str(c, g.nvars(), g.size()));
        std::cout << rows.dump() << "\n";
      } else {
        for (auto& c : basis)
          std::cout << coord_str(c, g.nvars(), g.size()) << "\n";
      }
      return kExitOk;
    }
    if (c_icis->parsed()) {
      MapGerm g = parse_input(cfg, poly_text);
      auto r = is_icis(g, kcap);
      if (cfg.format == "json") {
        nlohmann::json j;
        j["icis"] = r.icis;
        j["reason"] = r.reason.empty() ? nlohmann::json() : nlohmann::json(r.reason);
        j["certificate"] = r.certificate;
        std::cout << j.dump() << "\n";
      } else {
        std::cout << (r.icis ? "yes" : "no");
        if (!r.reason.empty()) std::cout << "  (" << r.reason << ")";
        std::cout << "\n";
      }
      return r.icis ? kExitOk : kExitNotIcis;
    }
    if (c_nf->parsed()) {
      auto t = parse_type(type_name, type_params);
      MapGerm nf = normal_form_of(t, config_field(cfg));
      std::string s;
      for (int i = 0; i < nf.size(); ++i) {
        if (i) s += " ; ";
        s += nf[i].str();
      }
      std::cout << s << "\n";
      return kExitOk;
    }
    if (c_unfold->parsed()) {
      MapGerm base = poly_text.empty()
                         ? normal_form_of(parse_type(type_name, type_params),
                                          config_field(cfg))
                         : parse_input(cfg, poly_text);
      Unfolding u = build_unfolding(base, !no_filter, kcap);
      FiberHistogram h;
      if (mode == "exhaustive")
        h = enumerate_fibers(u, EnumerateOptions{1000000, kcap});
      else
        h = enumerate_fibers_random(u, samples, cfg.seed,
                                    EnumerateOptions{1000000, kcap});
      if (cfg.format == "json")
        std::cout << histogram_json(h).dump() << "\n";
      else
        std::cout << histogram_csv(h);
      return kExitOk;
    }
    if (c_order->parsed()) {
      MapGerm g = parse_input(cfg, poly_text);
      WeightSystem ws{degrees, weights};
      if ((int)degrees.size() != g.size() || (int)weights.size() != g.nvars()) {
        std::cerr << "weights/degrees arity mismatch\n";
        return 1;
      }
      long v = dw_order(g, ws);
      std::cout << (v >= kInfinity ? "inf" : std::to_string(v)) << "\n";
      return kExitOk;
    }
    if (c_repro->parsed()) {
      GBBudget budget{max_pairs, max_basis, max_degree};
      GBPoly out = repro_char2_elimination(budget);
      std::cout << out.str() << "\n";
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const WrongVariableCount& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const NeedsExtension& e) {
    std::cerr << "needs extension: " << e.what() << "\n";
    return kExitNeedsExtension;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const PrecisionLoss& e) {
    std::cerr << "precision: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
