#pragma once

// JSON encodings of profiles, coefficients, outcomes and reports.
// Agents and objects are numbered from 1 in every JSON document.

#include "redistrib/bid_profile.hpp"
#include "redistrib/error.hpp"
#include "redistrib/experiments.hpp"
#include "redistrib/mechanism.hpp"
#include "redistrib/ordering.hpp"
#include "redistrib/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace redistrib::io {

using nlohmann::json;

inline json to_json(const BidProfile& profile) {
  json rows = json::array();
  for (std::size_t i = 0; i < profile.agents(); ++i) {
    const auto r = profile.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return json{{"n", profile.agents()}, {"p", profile.objects()}, {"bids", rows}};
}

inline BidProfile profile_from_json(const json& doc) {
  try {
    require(doc.is_object(), ErrorKind::malformed_input, "profile must be a JSON object");
    require(doc.contains("n") && doc.contains("p") && doc.contains("bids"), ErrorKind::malformed_input,
            "profile needs fields n, p and bids");
    const auto n = doc.at("n").get<std::size_t>();
    const auto p = doc.at("p").get<std::size_t>();
    const auto& rows = doc.at("bids");
    require(rows.is_array() && rows.size() == n, ErrorKind::malformed_input, "bids must have n rows");
    std::vector<double> flat;
    flat.reserve(n * p);
    for (const auto& row : rows) {
      require(row.is_array() && row.size() == p, ErrorKind::malformed_input, "every bid row must have p entries");
      for (const auto& b : row) {
        require(b.is_number(), ErrorKind::malformed_input, "bids must be numbers");
        flat.push_back(b.get<double>());
      }
    }
    return BidProfile(n, p, std::move(flat));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::malformed_input, std::string("profile JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::invalid_argument) {
      throw Error(ErrorKind::malformed_input, e.what());
    }
    throw;
  }
}

inline json parse_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::malformed_input, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::malformed_input, "'" + path + "' is not valid JSON: " + e.what());
  }
}

inline BidProfile read_profile(const std::string& path) { return profile_from_json(parse_file(path)); }

/// A file holding one profile object or an array of them.
inline std::vector<BidProfile> read_profiles(const std::string& path) {
  const json doc = parse_file(path);
  std::vector<BidProfile> out;
  if (doc.is_array()) {
    for (const auto& item : doc) {
      out.push_back(profile_from_json(item));
    }
  } else {
    out.push_back(profile_from_json(doc));
  }
  return out;
}

/// Integer as a JSON number when it fits in 64 bits, else as a decimal string.
inline json big_to_json(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max()) {
    return x.convert_to<std::int64_t>();
  }
  return x.str();
}

/// [numerator, denominator].
inline json to_json(const Rational& q) { return json::array({big_to_json(numerator(q)), big_to_json(denominator(q))}); }

inline json rational_list(const std::vector<Rational>& qs) {
  json out = json::array();
  for (const auto& q : qs) out.push_back(to_json(q));
  return out;
}

inline json decimal_list(const std::vector<Rational>& qs) {
  json out = json::array();
  for (const auto& q : qs) out.push_back(to_double(q));
  return out;
}

inline json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

inline json to_json(const Allocation& alloc) {
  json pairs = json::array();
  for (const auto& a : alloc.pairs) {
    pairs.push_back({{"agent", a.agent + 1}, {"object", a.object + 1}});
  }
  return json{{"pairs", pairs}, {"value", alloc.value}};
}

inline json to_json(const MechanismOutcome& out, Mechanism mechanism) {
  json doc{{"mechanism", std::string(to_string(mechanism))},
           {"allocation", to_json(out.allocation)},
           {"payments", out.payments},
           {"rebates", out.rebates},
           {"surplus", out.surplus},
           {"total_rebate", out.total_rebate()},
           {"fraction", optional_number(out.fraction)}};
  if (!out.gamma_ratio.empty()) {
    json ratios = json::array();
    for (const auto& r : out.gamma_ratio) ratios.push_back(optional_number(r));
    doc["gamma_ratio"] = ratios;
  }
  return doc;
}

inline json to_json(const ExperimentReport& report, const ExperimentConfig& cfg) {
  json doc{{"mechanism", std::string(to_string(cfg.mechanism))},
           {"n", cfg.n},
           {"p", cfg.p},
           {"seed", cfg.seed},
           {"profiles_evaluated", report.profiles_evaluated},
           {"zero_surplus_skipped", report.zero_surplus_skipped},
           {"min_fraction", optional_number(report.min_fraction)},
           {"mean_fraction", optional_number(report.mean_fraction)},
           {"no_positive_surplus_profile", !report.has_positive_surplus()},
           {"ir_violations", report.ir_violations},
           {"feasibility_violations", report.feasibility_violations},
           {"pivotal_violations", report.pivotal_violations},
           {"violations_are_findings", report.violations_are_findings},
           {"tolerance", cfg.tolerance}};
  if (!cfg.gamma.empty()) doc["gamma"] = cfg.gamma;
  doc["first_violation_index"] = report.first_violation_index ? json(*report.first_violation_index) : json(nullptr);
  if (report.witness) {
    doc["witness"] = {{"index", *report.witness_index},
                      {"profile", to_json(*report.witness)},
                      {"outcome", to_json(*report.witness_outcome, cfg.mechanism)}};
  } else {
    doc["witness"] = nullptr;
  }
  if (cfg.mechanism == Mechanism::hetero) {
    doc["gamma_ratio"] = {{"bins", report.gamma_ratio_histogram},
                          {"bin_width", 1.0 / static_cast<double>(kGammaRatioBins)},
                          {"below_zero", report.gamma_ratio_below_zero},
                          {"above_one", report.gamma_ratio_above_one},
                          {"min", optional_number(report.gamma_ratio_min)},
                          {"max", optional_number(report.gamma_ratio_max)}};
  }
  return doc;
}

inline json to_json(const AgentRanking& ranking) {
  json classes = json::array();
  std::ostringstream chain;
  for (std::size_t c = 0; c < ranking.classes.size(); ++c) {
    json members = json::array();
    if (c > 0) chain << " > ";
    for (std::size_t k = 0; k < ranking.classes[c].size(); ++k) {
      members.push_back(ranking.classes[c][k] + 1);
      if (k > 0) chain << " = ";
      chain << ranking.classes[c][k] + 1;
    }
    classes.push_back(members);
  }
  json doc{{"classes", classes}, {"order", chain.str()}, {"transitive", ranking.transitive}};
  if (ranking.violation) {
    const auto& v = *ranking.violation;
    doc["violation"] = {v[0] + 1, v[1] + 1, v[2] + 1};
  }
  return doc;
}

inline std::string comparison_csv(const ComparisonResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "p,mech,worst_fraction,mean_fraction,trials,seed\n";
  for (const auto& row : result.rows) {
    out << row.p << ',' << row.mechanism << ',' << row.worst_fraction << ',';
    if (row.mean_fraction) out << *row.mean_fraction;
    out << ',' << row.trials << ',' << row.seed << '\n';
  }
  return out.str();
}

inline json to_json(const ComparisonSummary& c) {
  return json{{"p", c.p},
              {"profiles_with_surplus", c.compared},
              {"bc_redistributes_more", c.bc_redistributes_more},
              {"bc_worst", c.bc_worst},
              {"hetero_worst", c.hetero_worst},
              {"bc_mean", c.bc_mean},
              {"hetero_mean", c.hetero_mean},
              {"hetero_violations", c.hetero_violations}};
}

}  // namespace redistrib::io
