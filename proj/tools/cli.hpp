#pragma once

// Command-line front end. `run_cli` never exits the process, so the tests can
// drive it directly with their own output streams.

#include "redistrib/io.hpp"
#include "redistrib/redistrib.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <regex>
#include <string>
#include <thread>
#include <vector>

namespace redistrib::cli {

using io::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCheckFailed = 3;

inline json error_json(std::string_view kind, const std::string& message) {
  return json{{"error", {{"kind", kind}, {"message", message}}}};
}

/// Exact value of a decimal or fraction literal such as "3", "2.5" or "7/3".
/// Decimal digits as an integer; a leading 0 would otherwise select octal.
inline BigInt parse_digits(const std::string& digits) {
  const auto first = digits.find_first_not_of('0');
  return first == std::string::npos ? BigInt(0) : BigInt(digits.substr(first));
}

inline Rational parse_rational(const std::string& text) {
  static const std::regex pattern(R"(^\s*(-?)(\d+)(?:\.(\d+))?(?:/(\d+))?\s*$)");
  std::smatch m;
  require(std::regex_match(text, m, pattern), ErrorKind::invalid_argument, "'" + text + "' is not a number");
  const std::string fraction = m[3].matched ? m[3].str() : "";
  BigInt num = parse_digits(m[2].str() + fraction);
  BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(fraction.size()));
  if (m[4].matched) {
    den *= parse_digits(m[4].str());
  }
  require(den != 0, ErrorKind::invalid_argument, "'" + text + "' has a zero denominator");
  Rational q(num, den);
  return m[1].length() > 0 ? Rational(-q) : q;
}

inline std::uint64_t default_seed() {
  const char* env = std::getenv("REDISTRIB_SEED");
  if (env == nullptr || *env == '\0') {
    return 1;
  }
  static const std::regex digits(R"(^\d{1,20}$)");
  require(std::regex_match(env, digits), ErrorKind::invalid_argument,
          std::string("REDISTRIB_SEED must be a nonnegative integer, got '") + env + "'");
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_argument, std::string("REDISTRIB_SEED out of range: '") + env + "'");
  }
}

/// Parses uniform:LO:HI, homogeneous-uniform:LO:HI, scaled-uniform:LO:HI,
/// binary, homogeneous-binary or file:PATH.
inline Generator parse_generator(const std::string& spec) {
  Generator g;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto bounds = [&](Generator::Kind k) {
    g.kind = k;
    if (rest.empty()) {
      return;
    }
    static const std::regex pair(R"(^([^:]+):([^:]+)$)");
    std::smatch m;
    require(std::regex_match(rest, m, pair), ErrorKind::invalid_argument,
            "generator '" + spec + "' must look like " + kind + ":LO:HI");
    try {
      std::size_t used_lo = 0;
      std::size_t used_hi = 0;
      g.lo = std::stod(m[1].str(), &used_lo);
      g.hi = std::stod(m[2].str(), &used_hi);
      require(used_lo == m[1].str().size() && used_hi == m[2].str().size(), ErrorKind::invalid_argument,
              "generator bounds must be numbers");
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::invalid_argument, "generator bounds must be numbers");
    }
    check_bounds(g.lo, g.hi);
  };
  if (kind == "uniform") {
    bounds(Generator::Kind::uniform);
  } else if (kind == "homogeneous-uniform") {
    bounds(Generator::Kind::homogeneous_uniform);
  } else if (kind == "scaled-uniform") {
    bounds(Generator::Kind::scaled_uniform);
  } else if (kind == "binary" && rest.empty()) {
    g.kind = Generator::Kind::binary;
  } else if (kind == "homogeneous-binary" && rest.empty()) {
    g.kind = Generator::Kind::homogeneous_binary;
  } else if (kind == "file" && !rest.empty()) {
    g.kind = Generator::Kind::profiles;
    g.fixed = io::read_profiles(rest);
  } else {
    throw Error(ErrorKind::invalid_argument, "unknown generator '" + spec + "'");
  }
  return g;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  require(static_cast<bool>(file), ErrorKind::invalid_argument, "cannot write '" + path + "'");
  file << text;
  require(static_cast<bool>(file), ErrorKind::invalid_argument, "failed writing '" + path + "'");
}

/// Writes `doc` to `path`, or to `out` when no path was given.
inline void emit(const json& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    write_text(path, doc.dump(2) + "\n");
  }
}

inline void check_writable(const std::string& path) {
  if (path.empty()) {
    return;
  }
  std::ofstream probe(path, std::ios::app);
  require(static_cast<bool>(probe), ErrorKind::invalid_argument, "cannot write '" + path + "'");
}

inline std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) {
    return requested;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

struct Options {
  std::string mechanism;
  std::string input;
  std::string out;
  std::vector<std::string> gammas;
  std::size_t n = 0;
  std::size_t p = 0;
  std::string generator = "uniform:0:100";
  std::uint64_t trials = 10'000;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 0;
  double tolerance = 1e-9;
  std::size_t p_min = 1;
  std::size_t p_max = 8;
};

inline std::vector<double> gamma_doubles(const std::vector<std::string>& gammas) {
  std::vector<double> out;
  for (const auto& g : gammas) {
    out.push_back(to_double(parse_rational(g)));
  }
  return out;
}

inline int cmd_run(const Options& o, std::ostream& out) {
  const Mechanism mech = parse_mechanism(o.mechanism);
  const auto gamma = gamma_doubles(o.gammas);
  check_writable(o.out);
  const BidProfile profile = io::read_profile(o.input);
  const MechanismContext ctx(mech, profile.agents(), profile.objects(), gamma);
  const auto outcome = evaluate(profile, ctx);
  emit(io::to_json(outcome, mech), o.out, out);
  return kExitOk;
}

inline int cmd_coeffs(const Options& o, std::ostream& out) {
  const Mechanism mech = parse_mechanism(o.mechanism);
  require(o.n >= 1 && o.p >= 1, ErrorKind::invalid_argument, "--n and --p must be positive");
  json doc{{"mechanism", std::string(to_string(mech))}, {"n", o.n}, {"p", o.p}};
  switch (mech) {
    case Mechanism::wco: {
      const auto c = wco_coefficients(o.n, o.p);
      const auto e = wco_index(o.n, o.p);
      doc["first_index"] = c.first;
      doc["c"] = io::rational_list(c.c);
      doc["c_decimal"] = io::decimal_list(c.c);
      doc["index"] = io::to_json(e);
      doc["index_decimal"] = to_double(e);
      break;
    }
    case Mechanism::hetero: {
      const auto h = hetero_alphas(o.n, o.p);
      doc["alpha"] = io::rational_list(h.alpha);
      doc["alpha_decimal"] = io::decimal_list(h.alpha);
      break;
    }
    case Mechanism::scaling: {
      require(o.gammas.size() == o.p, ErrorKind::invalid_argument, "--gammas needs exactly p values");
      std::vector<Rational> gamma;
      for (const auto& g : o.gammas) gamma.push_back(parse_rational(g));
      ScalingModel model(o.n, gamma);
      const auto& sol = model.solve();
      doc["gamma"] = io::rational_list(gamma);
      doc["beta"] = io::rational_list(model.beta());
      doc["index"] = io::to_json(sol.e);
      doc["index_decimal"] = to_double(sol.e);
      doc["first_index"] = 2;
      doc["c"] = io::rational_list(sol.c);
      doc["c_decimal"] = io::decimal_list(sol.c);
      doc["x"] = io::rational_list(sol.x);
      doc["certificate_holds"] = model.certificate_holds();
      try {
        const Rational bound = scaling_index_bound(model);
        doc["bound"] = io::to_json(bound);
        doc["bound_decimal"] = to_double(bound);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::undefined_bound) throw;
        doc["bound"] = nullptr;
        doc["bound_decimal"] = nullptr;
      }
      break;
    }
    case Mechanism::bailey_cavallo:
      throw Error(ErrorKind::invalid_argument, "bailey_cavallo has no coefficients; use wco, scaling or hetero");
  }
  emit(doc, o.out, out);
  return kExitOk;
}

inline int cmd_simulate(const Options& o, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.n = o.n;
  cfg.p = o.p;
  cfg.mechanism = parse_mechanism(o.mechanism);
  cfg.gamma = gamma_doubles(o.gammas);
  cfg.trials = o.trials;
  cfg.seed = o.seed ? *o.seed : default_seed();
  cfg.workers = resolve_workers(o.workers);
  cfg.tolerance = o.tolerance;
  require(o.tolerance >= 0.0, ErrorKind::invalid_argument, "--tolerance must be nonnegative");
  cfg.generator = parse_generator(o.generator);
  validate(cfg);
  check_writable(o.out);
  const MechanismContext probe(cfg.mechanism, cfg.n, cfg.p, cfg.gamma);  // rejects bad (n, p) up front
  (void)probe;

  const auto report = worst_case_index(cfg);
  const json doc = io::to_json(report, cfg);
  emit(doc, o.out, out);
  if (!o.out.empty()) {
    json summary = doc;
    summary.erase("witness");
    out << summary.dump(2) << '\n';
  }
  return report.hard_failures() > 0 ? kExitCheckFailed : kExitOk;
}

inline int cmd_figure1(const Options& o, std::ostream& out) {
  require(o.n >= 2, ErrorKind::invalid_argument, "--n must be at least 2");
  require(o.p_min >= 1 && o.p_min <= o.p_max && o.p_max < o.n, ErrorKind::invalid_argument,
          "need 1 <= --p-min <= --p-max < --n");
  require(o.trials >= 1, ErrorKind::invalid_argument, "--trials must be positive");
  require(o.n <= kMaxHeteroAgents, ErrorKind::cap_exceeded,
          "HETERO evaluation is limited to n <= " + std::to_string(kMaxHeteroAgents));
  check_writable(o.out);
  const std::uint64_t seed = o.seed ? *o.seed : default_seed();
  std::vector<std::size_t> ps;
  for (std::size_t p = o.p_min; p <= o.p_max; ++p) ps.push_back(p);

  const auto result = compare_bc_hetero(o.n, ps, o.trials, seed, resolve_workers(o.workers));
  const std::string csv = io::comparison_csv(result);
  if (o.out.empty()) {
    out << csv;
  } else {
    write_text(o.out, csv);
    json comparisons = json::array();
    for (const auto& c : result.comparisons) comparisons.push_back(io::to_json(c));
    out << json{{"n", o.n}, {"trials", o.trials}, {"seed", seed}, {"comparisons", comparisons}}.dump(2) << '\n';
  }
  return kExitOk;
}

inline int cmd_rank(const Options& o, std::ostream& out) {
  check_writable(o.out);
  const BidProfile profile = io::read_profile(o.input);
  emit(io::to_json(rank_agents(profile)), o.out, out);
  return kExitOk;
}

inline int cmd_adversarial(const Options& o, std::ostream& out) {
  check_writable(o.out);
  const BidProfile profile = adversarial_profile(o.n, o.p);
  const double surplus = clarke_payments(profile).surplus;
  json report{{"n", o.n}, {"p", o.p}, {"surplus", surplus}, {"expected_surplus", o.p * (o.p - 1) / 2}};
  if (o.out.empty()) {
    report["profile"] = io::to_json(profile);
  } else {
    write_text(o.out, io::to_json(profile).dump(2) + "\n");
    report["written"] = o.out;
  }
  out << report.dump(2) << '\n';
  return kExitOk;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Groves redistribution mechanisms for heterogeneous objects", "redistrib"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;

  const auto mech_check = CLI::IsMember({"wco", "scaling", "bailey_cavallo", "bc", "hetero"});
  auto add_gammas = [&](CLI::App* sub) {
    sub->add_option("--gammas", o.gammas, "Object scale factors g1,g2,... (scaling only)")->delimiter(',');
  };

  auto* run = app.add_subcommand("run", "Apply one mechanism to a profile JSON");
  run->add_option("--mech", o.mechanism, "Mechanism")->required()->check(mech_check);
  run->add_option("--input", o.input, "Profile JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", o.out, "Output file (default stdout)");
  add_gammas(run);

  auto* coeffs = app.add_subcommand("coeffs", "Exact rebate coefficients");
  coeffs->add_option("--mech", o.mechanism, "wco, scaling or hetero")
      ->required()
      ->check(CLI::IsMember({"wco", "scaling", "hetero"}));
  coeffs->add_option("--n", o.n, "Agents")->required()->check(CLI::Range(1, 64));
  coeffs->add_option("--p", o.p, "Objects")->required()->check(CLI::Range(1, 64));
  coeffs->add_option("--out", o.out, "Output file (default stdout)");
  add_gammas(coeffs);

  auto* simulate = app.add_subcommand("simulate", "Estimate a mechanism's worst-case index over a profile stream");
  simulate->add_option("--mech", o.mechanism, "Mechanism")->required()->check(mech_check);
  simulate->add_option("--n", o.n, "Agents")->required()->check(CLI::Range(1, 64));
  simulate->add_option("--p", o.p, "Objects")->required()->check(CLI::Range(1, 64));
  simulate->add_option("--gen", o.generator, "Profile generator")->capture_default_str();
  simulate->add_option("--trials", o.trials, "Random profiles to draw")->capture_default_str()->check(CLI::PositiveNumber);
  auto* sim_seed = simulate->add_option("--seed", seed, "Master seed (default $REDISTRIB_SEED or 1)");
  simulate->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
  simulate->add_option("--tolerance", o.tolerance, "IR and feasibility slack")->capture_default_str();
  simulate->add_option("--out", o.out, "Report file (default stdout)");
  add_gammas(simulate);

  auto* figure1 = app.add_subcommand("figure1", "BAILEY-CAVALLO vs HETERO redistribution by object count");
  o.n = 10;
  figure1->add_option("--n", o.n, "Agents")->capture_default_str();
  figure1->add_option("--p-min", o.p_min, "Smallest object count")->capture_default_str();
  figure1->add_option("--p-max", o.p_max, "Largest object count")->capture_default_str();
  figure1->add_option("--trials", o.trials, "Profiles per object count")->capture_default_str()->check(CLI::PositiveNumber);
  auto* fig_seed = figure1->add_option("--seed", seed, "Master seed (default $REDISTRIB_SEED or 1)");
  figure1->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
  figure1->add_option("--out", o.out, "CSV file (default stdout)");

  auto* rank = app.add_subcommand("rank", "Order agents by the allocation-deletion procedure");
  rank->add_option("--input", o.input, "Profile JSON")->required()->check(CLI::ExistingFile);
  rank->add_option("--out", o.out, "Output file (default stdout)");

  auto* adversarial = app.add_subcommand("adversarial", "Profile defeating every linear rebate rule");
  adversarial->add_option("--n", o.n, "Agents")->required()->check(CLI::Range(3, 64));
  adversarial->add_option("--p", o.p, "Objects")->required()->check(CLI::Range(2, 64));
  adversarial->add_option("--out", o.out, "Profile file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << error_json("invalid_argument", e.what()).dump() << '\n';
    return kExitUsage;
  }
  if (sim_seed->count() > 0 || fig_seed->count() > 0) {
    o.seed = seed;
  }

  try {
    if (run->parsed()) return cmd_run(o, out);
    if (coeffs->parsed()) return cmd_coeffs(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (figure1->parsed()) return cmd_figure1(o, out);
    if (rank->parsed()) return cmd_rank(o, out);
    if (adversarial->parsed()) return cmd_adversarial(o, out);
  } catch (const Error& e) {
    err << error_json(to_string(e.kind()), e.what()).dump() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << error_json("internal", e.what()).dump() << '\n';
    return kExitError;
  }
  return kExitUsage;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"redistrib"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace redistrib::cli
