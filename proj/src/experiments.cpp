#include "pointres/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pointres/error.hpp"
#include "pointres/parallel.hpp"
#include "pointres/sampler.hpp"

namespace pointres {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kPairsPerBlock = 1u << 16;

Verdict at_most(std::string name, double value, double target, double tol = 0.0) {
  return {std::move(name), value, target, tol, "<=", value <= target + tol};
}

Verdict at_least(std::string name, double value, double target, double tol = 0.0) {
  return {std::move(name), value, target, tol, ">=", value >= target - tol};
}

Verdict near(std::string name, double value, double target, double tol) {
  return {std::move(name), value, target, tol, "==", std::abs(value - target) <= tol};
}

SampleSet ball_sample(std::size_t m, double r, std::uint64_t seed, std::uint64_t stream) {
  SamplerConfig cfg;
  cfg.kind = SamplerKind::UniformBall;
  cfg.m = m;
  cfg.r = r;
  cfg.seed = seed;
  cfg.stream_id = stream;
  return sample_uniform_ball(cfg);
}

void check_args(std::size_t m, std::size_t min_m, double r, std::size_t trials) {
  if (m < min_m) throw Error(ErrorCode::InvalidArgument, "m too small for this experiment");
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "r must be positive");
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be positive");
}

// Symbolic per-trial pipeline shared by the Weyl and K_max experiments.
TrialSummary symbolic_trial(std::size_t m, double r, std::uint64_t seed, std::size_t t,
                            const ExpPolyOptions& opt) {
  TrialSummary s;
  s.trial_id = t;
  s.stream_id = t;
  try {
    const Configuration c = to_configuration(ball_sample(m, r, seed, t), Complex{1.0, 0.0});
    s.n_points = c.size();
    s.diameter = diameter(c);
    s.k_min = 1.0 / s.diameter;
    const SizeResult v = size_V(c);
    s.v_size = v.value;
    const CanonicalExpPoly p = canonical_form(c, opt);
    s.weyl = is_weyl(p, v);
    s.ad_symbolic = symbolic_density(p);
    s.k_multiset = k_multiset(distribution_diagram(p), s.diameter);
  } catch (const Error& e) {
    s.error = e.what();
  }
  return s;
}

std::size_t count_failed(const std::vector<TrialSummary>& trials) {
  return static_cast<std::size_t>(
      std::count_if(trials.begin(), trials.end(), [](const TrialSummary& t) { return !t.error.empty(); }));
}

}  // namespace

bool ExperimentReport::all_pass() const {
  return failed_trials == 0 &&
         std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

double kmin_limit_cdf(double t, double r) {
  if (t <= 0.0) return 0.0;
  return -std::expm1(-48.0 * r * r * r * t * t * t);
}

double kmin_limit_median(double r) { return std::cbrt(std::numbers::ln2 / (48.0 * r * r * r)); }

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& target_cdf) {
  if (sample.empty()) throw Error(ErrorCode::EmptySample, "KS statistic of an empty sample");
  std::vector<double> xs(sample.begin(), sample.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = target_cdf(xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double mc_margin(double p, std::size_t n) {
  return 4.0 * std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

ExperimentReport run_weyl_experiment(std::size_t m, double r, std::size_t trials, std::uint64_t seed,
                                     unsigned workers, const ExpPolyOptions& opt) {
  check_args(m, 2, r, trials);
  if (m > opt.n_max) throw Error(ErrorCode::TooLarge, "m exceeds n_max for the symbolic expansion");
  ExperimentReport rep;
  rep.config = {"weyl", m, r, trials, 0, seed, {}};
  rep.trials.resize(trials);
  parallel_for(trials, workers, [&](std::size_t t) { rep.trials[t] = symbolic_trial(m, r, seed, t, opt); });
  rep.failed_trials = count_failed(rep.trials);

  std::size_t weyl = 0, k_full = 0, k_diam = 0, ok = 0;
  double max_dev = 0.0;
  for (const auto& s : rep.trials) {
    if (!s.error.empty()) continue;
    ++ok;
    if (*s.weyl) ++weyl;
    max_dev = std::max(max_dev, std::abs(*s.ad_symbolic - *s.v_size / kPi));
    const auto& k = *s.k_multiset;
    if (k.size() == m) ++k_full;
    if (k.size() >= 2 && std::abs(k.values[0] - s.k_min) <= 1e-9 * s.k_min &&
        std::abs(k.values[1] - s.k_min) <= 1e-9 * s.k_min)
      ++k_diam;
  }
  const double n = static_cast<double>(trials);
  rep.stats["weyl_fraction"] = weyl / n;
  rep.stats["max_ad_deviation"] = max_dev;
  rep.stats["k_count_fraction"] = k_full / n;
  rep.stats["k1_k2_diam_fraction"] = k_diam / n;
  rep.stats["completed_trials"] = static_cast<double>(ok);
  rep.verdicts.push_back(near("weyl_fraction", weyl / n, 1.0, 0.0));
  rep.verdicts.push_back(at_most("max |Ad - V/pi|", max_dev, 1e-9));
  rep.verdicts.push_back(near("#K == m fraction", k_full / n, 1.0, 0.0));
  rep.verdicts.push_back(near("K1 == K2 == 1/diam fraction", k_diam / n, 1.0, 0.0));
  return rep;
}

ExperimentReport run_kmin_experiment(std::size_t m, double r, std::size_t trials, std::uint64_t seed,
                                     unsigned workers, double ks_threshold) {
  check_args(m, 2, r, trials);
  ExperimentReport rep;
  rep.config = {"kmin", m, r, trials, 0, seed, {}};
  rep.trials.resize(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    TrialSummary& s = rep.trials[t];
    s.trial_id = t;
    s.stream_id = t;
    const SampleSet smp = ball_sample(m, r, seed, t);
    s.n_points = smp.points.size();
    double dmax = 0.0;
    for (std::size_t i = 0; i < smp.points.size(); ++i)
      for (std::size_t j = i + 1; j < smp.points.size(); ++j)
        dmax = std::max(dmax, distance(smp.points[i], smp.points[j]));
    s.diameter = dmax;
    s.k_min = 1.0 / dmax;
  });
  rep.failed_trials = count_failed(rep.trials);

  const double scale = std::pow(static_cast<double>(m), 2.0 / 3.0);
  std::vector<double> stat;
  std::size_t below = 0, identity_ok = 0;
  for (const auto& s : rep.trials) {
    stat.push_back(scale * (s.k_min - 1.0 / (2.0 * r)));
    if (s.k_min < 1.0 / (2.0 * r)) ++below;
    if (std::abs(s.k_min * s.diameter - 1.0) <= 1e-12) ++identity_ok;
  }
  const auto target = [r](double t) { return kmin_limit_cdf(t, r); };
  const double ks = ks_statistic(stat, target);

  std::vector<double> sorted = stat;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  for (std::size_t i = 0; i < n; ++i)
    rep.cdf.push_back({sorted[i], (static_cast<double>(i) + 1.0) / static_cast<double>(n), target(sorted[i])});

  rep.stats["ks"] = ks;
  rep.stats["median"] = median;
  rep.stats["limit_median"] = kmin_limit_median(r);
  rep.stats["below_half_inverse_r"] = static_cast<double>(below);
  rep.verdicts.push_back(at_most("KS distance to 1 - exp(-48 r^3 t^3)", ks, ks_threshold));
  rep.verdicts.push_back(near("trials with K_min < 1/(2r)", static_cast<double>(below), 0.0, 0.0));
  rep.verdicts.push_back(near("K_min * diam == 1 fraction", identity_ok / static_cast<double>(n), 1.0, 0.0));
  return rep;
}

ExperimentReport run_vgrowth_experiment(std::size_t m, double r, std::size_t trials,
                                        std::span<const double> t_grid, std::uint64_t seed,
                                        unsigned workers) {
  check_args(m, 2, r, trials);
  ExperimentReport rep;
  rep.config = {"vgrowth", m, r, trials, 0, seed, {t_grid.begin(), t_grid.end()}};
  rep.trials.resize(trials);
  std::vector<std::pair<double, double>> pair_sums(trials);  // sum lambda, sum lambda^2
  parallel_for(trials, workers, [&](std::size_t t) {
    TrialSummary& s = rep.trials[t];
    s.trial_id = t;
    s.stream_id = t;
    try {
      const SampleSet smp = ball_sample(m, r, seed, t);
      for (std::size_t j = 0; j + 1 < smp.points.size(); j += 2) {
        const double lam = distance(smp.points[j], smp.points[j + 1]) / (2.0 * r);
        pair_sums[t].first += lam;
        pair_sums[t].second += lam * lam;
      }
      const Configuration c = to_configuration(smp, Complex{1.0, 0.0});
      s.n_points = c.size();
      s.diameter = diameter(c);
      s.k_min = 1.0 / s.diameter;
      s.v_size = size_V(c).value;
    } catch (const Error& e) {
      s.error = e.what();
    }
  });
  rep.failed_trials = count_failed(rep.trials);

  const double n = static_cast<double>(trials);
  const double md = static_cast<double>(m);
  std::size_t v_ok = 0, above_mr = 0;
  double lam_sum = 0.0, lam2_sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& s = rep.trials[t];
    lam_sum += pair_sums[t].first;
    lam2_sum += pair_sums[t].second;
    if (!s.error.empty()) continue;
    if (*s.v_size >= 2.0 * s.diameter) ++v_ok;
    if (*s.v_size > md * r) ++above_mr;
  }
  for (double t : t_grid) {
    const double threshold = r * (36.0 / 35.0 * md + 2.0 * std::sqrt(87.0) / 35.0 * t * std::sqrt(md));
    std::size_t exceed = 0;
    for (const auto& s : rep.trials)
      if (s.error.empty() && *s.v_size > threshold) ++exceed;
    const double p = exceed / n;
    const double target = 1.0 - normal_cdf(t);
    rep.cdf.push_back({t, p, target});
    rep.verdicts.push_back(at_least("P{V > threshold(t=" + std::to_string(t) + ")}", p, target, mc_margin(p, trials)));
  }
  const double pairs = n * std::floor(md / 2.0);
  rep.stats["pair_mean"] = lam_sum / pairs;
  rep.stats["pair_second_moment"] = lam2_sum / pairs;
  rep.stats["p_v_above_mr"] = above_mr / n;
  rep.verdicts.push_back(at_least("P{V/pi > m r/pi}", above_mr / n, 0.95));
  rep.verdicts.push_back(near("V >= 2 diam fraction", v_ok / n, 1.0, 0.0));
  return rep;
}

ExperimentReport run_kmax_bound_check(std::size_t m, double r, std::size_t trials, std::uint64_t seed,
                                      unsigned workers, const ExpPolyOptions& opt) {
  check_args(m, 2, r, trials);
  if (m > opt.n_max) throw Error(ErrorCode::TooLarge, "m exceeds n_max for the symbolic expansion");
  ExperimentReport rep;
  rep.config = {"kmax", m, r, trials, 0, seed, {}};
  rep.trials.resize(trials);
  parallel_for(trials, workers, [&](std::size_t t) { rep.trials[t] = symbolic_trial(m, r, seed, t, opt); });
  rep.failed_trials = count_failed(rep.trials);

  std::size_t satisfied = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& s : rep.trials) {
    if (!s.error.empty()) continue;
    const double kmax = s.k_multiset->values.back();
    const double bound = static_cast<double>(m) / *s.v_size;
    min_ratio = std::min(min_ratio, kmax / bound);
    if (kmax >= bound * (1.0 - 1e-9)) ++satisfied;
  }
  const double frac = satisfied / static_cast<double>(trials);
  rep.stats["satisfied_fraction"] = frac;
  rep.stats["min_kmax_over_bound"] = min_ratio;
  rep.verdicts.push_back(near("K_max >= m/V fraction", frac, 1.0, 0.0));
  return rep;
}

ExperimentReport run_moments_experiment(std::size_t pairs, double r, std::uint64_t seed, unsigned workers) {
  if (pairs < 2) throw Error(ErrorCode::InvalidArgument, "need at least two pairs");
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "r must be positive");
  ExperimentReport rep;
  rep.config = {"moments", 2, r, 0, pairs, seed, {}};

  struct Sums {
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  };
  const std::size_t blocks = (pairs + kPairsPerBlock - 1) / kPairsPerBlock;
  std::vector<Sums> sums(blocks);
  parallel_for(blocks, workers, [&](std::size_t b) {
    RandomStream rng(seed, b);
    const std::size_t count = std::min(kPairsPerBlock, pairs - b * kPairsPerBlock);
    Sums s;
    for (std::size_t i = 0; i < count; ++i) {
      const Vec3 a = draw_ball_point(rng, r);
      const Vec3 c = draw_ball_point(rng, r);
      const double lam = distance(a, c) / (2.0 * r);
      s.s1 += lam;
      s.s2 += lam * lam;
      s.s4 += lam * lam * lam * lam;
    }
    sums[b] = s;
  });
  Sums tot;
  for (const auto& s : sums) {
    tot.s1 += s.s1;
    tot.s2 += s.s2;
    tot.s4 += s.s4;
  }
  const double n = static_cast<double>(pairs);
  const double mean = tot.s1 / n;
  const double mean2 = tot.s2 / n;
  const double var1 = (tot.s2 - n * mean * mean) / (n - 1.0);
  const double var2 = (tot.s4 - n * mean2 * mean2) / (n - 1.0);
  const double se1 = std::sqrt(var1 / n);
  const double se2 = std::sqrt(var2 / n);
  rep.stats["mean"] = mean;
  rep.stats["second_moment"] = mean2;
  rep.stats["se_mean"] = se1;
  rep.stats["se_second_moment"] = se2;
  rep.verdicts.push_back(near("E lambda", mean, 18.0 / 35.0, 4.0 * se1));
  rep.verdicts.push_back(near("E lambda^2", mean2, 0.3, 4.0 * se2));
  return rep;
}

}  // namespace pointres
