#pragma once

// Simulation harness: profile generators, worst-case index estimation and the
// BAILEY-CAVALLO vs HETERO comparison at fixed n.

#include "redistrib/bid_profile.hpp"
#include "redistrib/clarke.hpp"
#include "redistrib/error.hpp"
#include "redistrib/mechanism.hpp"
#include "redistrib/ordering.hpp"
#include "redistrib/rebates.hpp"
#include "redistrib/wco.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace redistrib {

// ---------------------------------------------------------------- generators

/// Uniform draws land on a grid of 2^32 steps across [lo, hi). With integer
/// bounds every bid is a dyadic rational with few significant bits, so sums
/// and differences of bids (hence all matching values and surpluses) are
/// computed exactly in double precision.
inline constexpr double kUniformGridSteps = 4294967296.0;  // 2^32

inline std::mt19937_64 profile_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

inline double uniform_draw(std::mt19937_64& engine, double lo, double hi) {
  const auto step = static_cast<double>(engine() >> 32);
  return lo + (hi - lo) * (step / kUniformGridSteps);
}

inline void check_bounds(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && 0.0 <= lo && lo < hi, ErrorKind::invalid_argument,
          "uniform generator needs 0 <= lo < hi");
}

/// Profile number `index` of the stream seeded by `seed`; independent of the
/// order in which profiles are requested.
inline BidProfile random_profile(std::size_t n, std::size_t p, double lo, double hi, std::uint64_t seed,
                                 std::uint64_t index) {
  check_bounds(lo, hi);
  auto engine = profile_engine(seed, index);
  std::vector<double> bids(n * p);
  for (double& b : bids) {
    b = uniform_draw(engine, lo, hi);
  }
  return BidProfile(n, p, std::move(bids));
}

inline std::vector<double> random_values(std::size_t n, double lo, double hi, std::uint64_t seed,
                                         std::uint64_t index) {
  check_bounds(lo, hi);
  auto engine = profile_engine(seed, index);
  std::vector<double> v(n);
  for (double& x : v) {
    x = uniform_draw(engine, lo, hi);
  }
  return v;
}

inline constexpr std::size_t kMaxBinaryEntries = 26;

inline std::uint64_t binary_profile_count(std::size_t n, std::size_t p) {
  require(n * p <= kMaxBinaryEntries, ErrorKind::cap_exceeded,
          "binary enumeration needs n*p <= " + std::to_string(kMaxBinaryEntries));
  return std::uint64_t{1} << (n * p);
}

/// Binary profile number `index`; agent 1, object 1 is the most significant bit.
inline BidProfile binary_profile(std::size_t n, std::size_t p, std::uint64_t index) {
  const std::size_t entries = n * p;
  std::vector<double> bids(entries);
  for (std::size_t e = 0; e < entries; ++e) {
    bids[e] = static_cast<double>((index >> (entries - 1 - e)) & 1U);
  }
  return BidProfile(n, p, std::move(bids));
}

/// All 2^{np} binary profiles in canonical order.
inline std::vector<BidProfile> binary_profiles(std::size_t n, std::size_t p) {
  const auto count = binary_profile_count(n, p);
  std::vector<BidProfile> out;
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    out.push_back(binary_profile(n, p, k));
  }
  return out;
}

struct Generator {
  enum class Kind { uniform, homogeneous_uniform, scaled_uniform, binary, homogeneous_binary, profiles };
  Kind kind = Kind::uniform;
  double lo = 0.0;
  double hi = 100.0;
  std::vector<BidProfile> fixed;  ///< Kind::profiles
};

struct ExperimentConfig {
  std::size_t n = 0;
  std::size_t p = 0;
  Mechanism mechanism = Mechanism::hetero;
  Generator generator;
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 1;
  std::vector<double> gamma;  ///< scaling mechanism and scaled generator
  std::size_t workers = 1;
  double tolerance = 1e-9;    ///< IR / feasibility slack
  std::size_t chunk = 512;
};

inline std::uint64_t stream_size(const ExperimentConfig& cfg) {
  switch (cfg.generator.kind) {
    case Generator::Kind::binary: return binary_profile_count(cfg.n, cfg.p);
    case Generator::Kind::homogeneous_binary: return binary_profile_count(cfg.n, 1);
    case Generator::Kind::profiles: return cfg.generator.fixed.size();
    default: return cfg.trials;
  }
}

inline BidProfile stream_profile(const ExperimentConfig& cfg, std::uint64_t index) {
  const auto& g = cfg.generator;
  switch (g.kind) {
    case Generator::Kind::uniform:
      return random_profile(cfg.n, cfg.p, g.lo, g.hi, cfg.seed, index);
    case Generator::Kind::homogeneous_uniform: {
      const auto v = random_values(cfg.n, g.lo, g.hi, cfg.seed, index);
      return BidProfile::homogeneous(v, cfg.p);
    }
    case Generator::Kind::scaled_uniform: {
      require(cfg.gamma.size() == cfg.p, ErrorKind::invalid_argument, "scaled generator needs p gamma values");
      const auto v = random_values(cfg.n, g.lo, g.hi, cfg.seed, index);
      return BidProfile::scaled(v, cfg.gamma);
    }
    case Generator::Kind::binary:
      return binary_profile(cfg.n, cfg.p, index);
    case Generator::Kind::homogeneous_binary: {
      const auto bits = binary_profile(cfg.n, 1, index);
      return BidProfile::homogeneous(bits.data(), cfg.p);
    }
    case Generator::Kind::profiles:
      return g.fixed.at(index);
  }
  throw Error(ErrorKind::invalid_argument, "unknown generator");
}

inline void validate(const ExperimentConfig& cfg) {
  require(cfg.n >= 1 && cfg.p >= 1, ErrorKind::invalid_argument, "need n >= 1 and p >= 1");
  require(cfg.workers >= 1 && cfg.chunk >= 1, ErrorKind::invalid_argument, "workers and chunk must be positive");
  switch (cfg.generator.kind) {
    case Generator::Kind::uniform:
    case Generator::Kind::homogeneous_uniform:
    case Generator::Kind::scaled_uniform:
      check_bounds(cfg.generator.lo, cfg.generator.hi);
      require(cfg.trials >= 1, ErrorKind::invalid_argument, "trials must be positive");
      break;
    case Generator::Kind::binary:
    case Generator::Kind::homogeneous_binary:
      (void)stream_size(cfg);
      break;
    case Generator::Kind::profiles:
      for (const auto& prof : cfg.generator.fixed) {
        require(prof.agents() == cfg.n && prof.objects() == cfg.p, ErrorKind::invalid_argument,
                "profile in stream does not match (n, p)");
      }
      break;
  }
}

// ------------------------------------------------------------ parallel fold

/// Runs `work(begin, end, slot)` over fixed-size chunks of [0, total) on
/// `workers` threads. Chunk boundaries do not depend on the worker count.
template <typename Work>
void for_each_chunk(std::uint64_t total, std::size_t chunk, std::size_t workers, Work&& work) {
  const std::uint64_t chunks = (total + chunk - 1) / chunk;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    while (true) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) {
        return;
      }
      try {
        work(c * chunk, std::min(total, (c + 1) * chunk), static_cast<std::size_t>(c));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next.store(chunks);
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min<std::uint64_t>(workers, chunks));
  if (threads == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(run);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

inline std::uint64_t chunk_count(std::uint64_t total, std::size_t chunk) { return (total + chunk - 1) / chunk; }

// ------------------------------------------------------------------ reports

inline constexpr std::size_t kGammaRatioBins = 20;

struct ExperimentReport {
  std::uint64_t profiles_evaluated = 0;
  std::uint64_t zero_surplus_skipped = 0;
  std::optional<double> min_fraction;
  std::optional<double> mean_fraction;
  std::uint64_t ir_violations = 0;
  std::uint64_t feasibility_violations = 0;
  std::uint64_t pivotal_violations = 0;
  bool violations_are_findings = false;  ///< HETERO: IR and feasibility are unproven, so violations are reported, not failed
  std::optional<std::uint64_t> first_violation_index;
  std::optional<std::uint64_t> witness_index;
  std::optional<BidProfile> witness;
  std::optional<MechanismOutcome> witness_outcome;
  // HETERO only: Gamma_2 / Gamma_1 observations
  std::array<std::uint64_t, kGammaRatioBins> gamma_ratio_histogram{};
  std::uint64_t gamma_ratio_below_zero = 0;
  std::uint64_t gamma_ratio_above_one = 0;
  std::optional<double> gamma_ratio_min;
  std::optional<double> gamma_ratio_max;

  bool has_positive_surplus() const { return min_fraction.has_value(); }
  std::uint64_t hard_failures() const {
    return violations_are_findings ? pivotal_violations
                                      : ir_violations + feasibility_violations + pivotal_violations;
  }
};

/// Number of agents whose absence changes the Clarke surplus.
inline std::size_t pivotal_count(const BidProfile& profile, SurplusCache& cache) {
  const double total = cache.surplus(profile.everyone());
  std::size_t count = 0;
  for (std::size_t i = 0; i < profile.agents(); ++i) {
    const double without = profile.agents() == 1 ? 0.0 : cache.surplus(profile.everyone().without(i));
    count += without != total ? 1 : 0;
  }
  return count;
}

namespace detail {

struct PartialReport {
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;
  double fraction_sum = 0.0;
  std::uint64_t positive = 0;
  std::optional<double> min_fraction;
  std::optional<std::uint64_t> min_index;
  std::uint64_t ir = 0;
  std::uint64_t feasibility = 0;
  std::uint64_t pivotal = 0;
  std::optional<std::uint64_t> first_violation;
  std::array<std::uint64_t, kGammaRatioBins> histogram{};
  std::uint64_t below = 0;
  std::uint64_t above = 0;
  std::optional<double> ratio_min;
  std::optional<double> ratio_max;
};

inline void merge_optional_min(std::optional<double>& into, const std::optional<double>& x) {
  if (x && (!into || *x < *into)) into = x;
}
inline void merge_optional_max(std::optional<double>& into, const std::optional<double>& x) {
  if (x && (!into || *x > *into)) into = x;
}

}  // namespace detail

/// Evaluates the configured mechanism on every profile of the stream and
/// aggregates the worst and mean redistributed fraction over profiles with
/// positive surplus. The report is identical for any worker count.
inline ExperimentReport worst_case_index(const ExperimentConfig& cfg) {
  validate(cfg);
  const MechanismContext ctx(cfg.mechanism, cfg.n, cfg.p, cfg.gamma);
  const std::uint64_t total = stream_size(cfg);
  std::vector<detail::PartialReport> partials(chunk_count(total, cfg.chunk));

  for_each_chunk(total, cfg.chunk, cfg.workers, [&](std::uint64_t begin, std::uint64_t end, std::size_t slot) {
    auto& part = partials[slot];
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const BidProfile profile = stream_profile(cfg, idx);
      SurplusCache cache(profile);
      const auto outcome = evaluate(profile, ctx, cache);
      ++part.evaluated;

      bool violated = false;
      for (double r : outcome.rebates) {
        if (r < -cfg.tolerance) {
          ++part.ir;
          violated = true;
          break;
        }
      }
      if (outcome.total_rebate() > outcome.surplus + cfg.tolerance) {
        ++part.feasibility;
        violated = true;
      }
      if (pivotal_count(profile, cache) > 2 * cfg.p) {
        ++part.pivotal;
        violated = true;
      }
      if (violated && !part.first_violation) {
        part.first_violation = idx;
      }

      if (!outcome.fraction) {
        ++part.skipped;
      } else {
        ++part.positive;
        part.fraction_sum += *outcome.fraction;
        if (!part.min_fraction || *outcome.fraction < *part.min_fraction) {
          part.min_fraction = outcome.fraction;
          part.min_index = idx;
        }
      }
      for (const auto& ratio : outcome.gamma_ratio) {
        if (!ratio) continue;
        const double x = *ratio;
        if (x < 0.0) {
          ++part.below;
        } else if (x > 1.0) {
          ++part.above;
        } else {
          const auto bin = std::min(kGammaRatioBins - 1, static_cast<std::size_t>(x * kGammaRatioBins));
          ++part.histogram[bin];
        }
        detail::merge_optional_min(part.ratio_min, ratio);
        detail::merge_optional_max(part.ratio_max, ratio);
      }
    }
  });

  ExperimentReport report;
  report.violations_are_findings = cfg.mechanism == Mechanism::hetero;
  double fraction_sum = 0.0;
  std::uint64_t positive = 0;
  for (const auto& part : partials) {
    report.profiles_evaluated += part.evaluated;
    report.zero_surplus_skipped += part.skipped;
    fraction_sum += part.fraction_sum;
    positive += part.positive;
    if (part.min_fraction && (!report.min_fraction || *part.min_fraction < *report.min_fraction)) {
      report.min_fraction = part.min_fraction;
      report.witness_index = part.min_index;
    }
    report.ir_violations += part.ir;
    report.feasibility_violations += part.feasibility;
    report.pivotal_violations += part.pivotal;
    if (part.first_violation && !report.first_violation_index) {
      report.first_violation_index = part.first_violation;
    }
    for (std::size_t b = 0; b < kGammaRatioBins; ++b) {
      report.gamma_ratio_histogram[b] += part.histogram[b];
    }
    report.gamma_ratio_below_zero += part.below;
    report.gamma_ratio_above_one += part.above;
    detail::merge_optional_min(report.gamma_ratio_min, part.ratio_min);
    detail::merge_optional_max(report.gamma_ratio_max, part.ratio_max);
  }
  if (positive > 0) {
    report.mean_fraction = fraction_sum / static_cast<double>(positive);
  }
  if (report.witness_index) {
    report.witness = stream_profile(cfg, *report.witness_index);
    report.witness_outcome = evaluate(*report.witness, ctx);
  }
  return report;
}

// ------------------------------------------------------ linear impossibility

/// Profile on which every linear, anonymous, DSIC rebate rule returns zero
/// while the Clarke surplus is p(p-1)/2: agent i (1-based, i <= p) bids
/// 2p - i - j + 1 for object j; everyone else bids zero.
inline BidProfile adversarial_profile(std::size_t n, std::size_t p) {
  require(p >= 2, ErrorKind::precondition, "adversarial profile needs p >= 2");
  require(n > p, ErrorKind::precondition, "adversarial profile needs n > p");
  std::vector<double> bids(n * p, 0.0);
  for (std::size_t i = 1; i <= p; ++i) {
    for (std::size_t j = 1; j <= p; ++j) {
      bids[(i - 1) * p + (j - 1)] = static_cast<double>(2 * p + 1 - i - j);
    }
  }
  return BidProfile(n, p, std::move(bids));
}

/// Rebates of a linear rule in the only form compatible with feasibility and
/// individual rationality: with agents ordered best first (v_1, ..., v_n),
///   r_i = sum_{j=p+1}^{n-1} <c_j, v_{j+1}>                       for i <= p+1,
///   r_i = sum_{j=p+1}^{i-1} <c_j, v_j> + sum_{j=i}^{n-1} <c_j, v_{j+1}>  otherwise.
/// `coefficients[k]` is the vector c_{p+1+k} in R^p.
inline std::vector<double> linear_rebates(const BidProfile& profile, const std::vector<std::size_t>& order,
                                          const std::vector<std::vector<double>>& coefficients) {
  const std::size_t n = profile.agents();
  const std::size_t p = profile.objects();
  require(order.size() == n, ErrorKind::invalid_argument, "order must list every agent");
  require(n >= p + 1 && coefficients.size() == n - p - 1, ErrorKind::invalid_argument,
          "need one coefficient vector per index p+1 .. n-1");
  auto inner = [&](std::size_t j, std::size_t position) {  // <c_j, v_position>, 1-based
    const auto& c = coefficients[j - p - 1];
    require(c.size() == p, ErrorKind::invalid_argument, "coefficient vectors must have p entries");
    const auto row = profile.row(order[position - 1]);
    double s = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
      s += c[k] * row[k];
    }
    return s;
  };
  std::vector<double> r(n, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    double total = 0.0;
    if (i <= p + 1) {
      for (std::size_t j = p + 1; j <= n - 1; ++j) total += inner(j, j + 1);
    } else {
      for (std::size_t j = p + 1; j <= i - 1; ++j) total += inner(j, j);
      for (std::size_t j = i; j <= n - 1; ++j) total += inner(j, j + 1);
    }
    r[order[i - 1]] = total;
  }
  return r;
}

// ------------------------------------------------------ BC vs HETERO (n fixed)

struct ComparisonRow {
  std::size_t p = 0;
  std::string mechanism;
  double worst_fraction = 0.0;
  std::optional<double> mean_fraction;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct ComparisonSummary {
  std::size_t p = 0;
  std::uint64_t compared = 0;        ///< profiles with positive surplus
  std::uint64_t bc_redistributes_more = 0;
  double bc_worst = 0.0;
  double hetero_worst = 0.0;
  double bc_mean = 0.0;
  double hetero_mean = 0.0;
  std::uint64_t hetero_violations = 0;
};

struct ComparisonResult {
  std::vector<ComparisonRow> rows;
  std::vector<ComparisonSummary> comparisons;  ///< p values where HETERO applies
};

inline ComparisonResult compare_bc_hetero(std::size_t n, const std::vector<std::size_t>& p_values, std::uint64_t trials,
                                        std::uint64_t seed, std::size_t workers = 1, double lo = 0.0,
                                        double hi = 100.0, double tolerance = 1e-9) {
  require(trials >= 1, ErrorKind::invalid_argument, "trials must be positive");
  check_bounds(lo, hi);
  constexpr std::size_t kChunk = 256;
  ComparisonResult result;
  for (const std::size_t p : p_values) {
    require(p >= 1 && p < n, ErrorKind::invalid_argument, "figure1 needs 1 <= p < n");
    const bool with_hetero = n > p + 1;
    std::optional<HeteroCoefficients> alphas;
    if (with_hetero) {
      alphas = hetero_alphas(n, p);
    }
    struct Part {
      std::uint64_t positive = 0, bc_more = 0, violations = 0;
      double bc_sum = 0.0, het_sum = 0.0;
      std::optional<double> bc_min, het_min;
    };
    std::vector<Part> parts(chunk_count(trials, kChunk));
    for_each_chunk(trials, kChunk, workers, [&](std::uint64_t begin, std::uint64_t end, std::size_t slot) {
      auto& part = parts[slot];
      for (std::uint64_t idx = begin; idx < end; ++idx) {
        const BidProfile profile = random_profile(n, p, lo, hi, seed, idx);
        SurplusCache cache(profile);
        const double t = cache.surplus(profile.everyone());
        if (!(t > 0.0)) {
          continue;
        }
        ++part.positive;
        const auto bc = bailey_cavallo_rebates(profile, cache);
        double bc_total = 0.0;
        for (double r : bc) bc_total += r;
        const double bc_fraction = bc_total / t;
        part.bc_sum += bc_fraction;
        detail::merge_optional_min(part.bc_min, bc_fraction);
        if (with_hetero) {
          const auto het = hetero_rebates(profile, *alphas, cache);
          double het_total = 0.0;
          bool ir_ok = true;
          for (double r : het) {
            het_total += r;
            ir_ok = ir_ok && r >= -tolerance;
          }
          if (!ir_ok || het_total > t + tolerance) ++part.violations;
          const double het_fraction = het_total / t;
          part.het_sum += het_fraction;
          detail::merge_optional_min(part.het_min, het_fraction);
          if (bc_fraction > het_fraction) ++part.bc_more;
        }
      }
    });
    Part all;
    for (const auto& part : parts) {
      all.positive += part.positive;
      all.bc_more += part.bc_more;
      all.violations += part.violations;
      all.bc_sum += part.bc_sum;
      all.het_sum += part.het_sum;
      detail::merge_optional_min(all.bc_min, part.bc_min);
      detail::merge_optional_min(all.het_min, part.het_min);
    }
    const auto mean = [&](double sum) -> std::optional<double> {
      if (all.positive == 0) return std::nullopt;
      return sum / static_cast<double>(all.positive);
    };
    result.rows.push_back({p, "bailey_cavallo", all.bc_min.value_or(0.0), mean(all.bc_sum), trials, seed});
    if (with_hetero) {
      result.rows.push_back({p, "hetero", all.het_min.value_or(0.0), mean(all.het_sum), trials, seed});
      result.comparisons.push_back({p, all.positive, all.bc_more, all.bc_min.value_or(0.0),
                                    all.het_min.value_or(0.0), mean(all.bc_sum).value_or(0.0),
                                    mean(all.het_sum).value_or(0.0), all.violations});
    }
    const double reference = to_double(wco_index(n, p));
    result.rows.push_back({p, "wco_index", reference, std::nullopt, trials, seed});
  }
  return result;
}

}  // namespace redistrib
