#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pointres/exppoly.hpp"

namespace pointres {

struct TrialSummary {
  std::size_t trial_id = 0;
  std::uint64_t stream_id = 0;
  std::size_t n_points = 0;
  double diameter = 0.0;
  std::optional<double> v_size;
  double k_min = 0.0;  // 1 / diameter
  std::optional<KMultiset> k_multiset;
  std::optional<bool> weyl;
  std::optional<double> ad_symbolic;
  std::string error;  // non-empty when the trial failed
};

/// One pass/fail line: `value` compared against `target` under `tolerance`
/// in the direction described by `relation` (e.g. "<=", ">=", "==").
struct Verdict {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::string relation;
  bool pass = false;
};

struct ExperimentConfig {
  std::string kind;
  std::size_t m = 0;
  double r = 1.0;
  std::size_t trials = 0;
  std::size_t pairs = 0;
  std::uint64_t seed = 0;
  std::vector<double> t_grid;
};

struct CdfRow {
  double x = 0.0;
  double empirical = 0.0;
  double target = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialSummary> trials;
  std::map<std::string, double> stats;
  std::vector<CdfRow> cdf;
  std::vector<Verdict> verdicts;
  std::size_t failed_trials = 0;

  bool all_pass() const;
};

/// Standard normal distribution function.
double normal_cdf(double t);

/// Limit CDF 1 - exp(-48 r^3 t^3) of m^{2/3} (K_min - 1/(2r)), zero for t <= 0.
double kmin_limit_cdf(double t, double r);

/// Median of the limit law, (ln 2 / (48 r^3))^{1/3}.
double kmin_limit_median(double r);

/// sup |F_n - F| over the sample, both one-sided gaps. Throws EmptySample.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& target_cdf);

/// 4 binomial standard errors at the empirical proportion p over n trials.
double mc_margin(double p, std::size_t n);

ExperimentReport run_weyl_experiment(std::size_t m, double r, std::size_t trials, std::uint64_t seed,
                                     unsigned workers = 1, const ExpPolyOptions& opt = {});

ExperimentReport run_kmin_experiment(std::size_t m, double r, std::size_t trials, std::uint64_t seed,
                                     unsigned workers = 1, double ks_threshold = 0.05);

ExperimentReport run_vgrowth_experiment(std::size_t m, double r, std::size_t trials,
                                        std::span<const double> t_grid, std::uint64_t seed,
                                        unsigned workers = 1);

ExperimentReport run_kmax_bound_check(std::size_t m, double r, std::size_t trials, std::uint64_t seed,
                                      unsigned workers = 1, const ExpPolyOptions& opt = {});

/// Mean and second moment of |xi - xi'| / (2r) over independent pairs in
/// the ball, against 18/35 and 3/10.
ExperimentReport run_moments_experiment(std::size_t pairs, double r, std::uint64_t seed,
                                        unsigned workers = 1);

}  // namespace pointres
