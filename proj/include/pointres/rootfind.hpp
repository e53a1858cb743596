#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pointres/exppoly.hpp"
#include "pointres/geometry.hpp"

namespace pointres {

struct Disc {
  Complex center{0.0, 0.0};
  double radius = 1.0;
};

/// Axis-aligned rectangle [x0, x1] x [y0, y1] in the complex plane.
struct Rect {
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
};

using Contour = std::variant<Disc, Rect>;

struct RootFindOptions {
  double min_cell_rel = 1e-6;  // smallest quadtree cell, relative to R
  int max_retries = 5;
  std::vector<double> jitter{1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  int max_newton_iter = 60;
  double residual_tol = 1e-8;
  std::size_t max_evals_per_contour = 4'000'000;
  unsigned workers = 1;
};

/// Outcome of one argument-principle pass, without perturbation retries.
struct WindingResult {
  int count = 0;
  bool ok = false;
  double max_log_abs = 0.0;  // max ln|det Gamma| over the boundary samples
  std::size_t evaluations = 0;
};

WindingResult winding_number(const Configuration& c, const Contour& contour,
                             const RootFindOptions& opt = {});

/// Number of zeros of det Gamma inside the contour, counted with
/// multiplicity. Perturbs the contour outward by opt.jitter on failure;
/// throws BoundaryZero once the retries are exhausted.
int count_zeros(const Configuration& c, const Contour& contour, const RootFindOptions& opt = {});

struct Root {
  Complex k;
  int multiplicity = 1;
  double residual = 0.0;  // |det Gamma(k)| / max |det Gamma| on the cell boundary
};

struct ResonanceSet {
  std::vector<Root> roots;  // sorted by Re, then Im
  double region = 0.0;      // searched disc radius
  std::string config_hash;

  int total_multiplicity() const;
};

/// All zeros of det Gamma with |k| <= R.
ResonanceSet find_resonances(const Configuration& c, double R, const RootFindOptions& opt = {});

/// N(R) for each radius. Throws RegionExceeded beyond rs.region.
std::vector<int> counting_function(const ResonanceSet& rs, std::span<const double> radii);

/// N^log(h, R) for each h: roots with -h ln(|Re k| + 1) <= Im k, |k| <= R.
std::vector<int> log_counting(const ResonanceSet& rs, std::span<const double> h_grid, double R);

struct LogStep {
  double h = 0.0;
  double height = 0.0;
};

struct CountingReport {
  std::vector<double> radii;
  std::vector<int> counts;
  std::vector<double> h_grid;
  std::vector<std::vector<int>> log_counts;  // [radius index][h index]
  double ad_estimate = 0.0;
  std::vector<LogStep> ad_log_steps;         // jumps of N^log(., R_max) / R_max
};

/// Least-squares slope of N(R) against R over the upper half of the grid.
double ad_estimate(std::span<const double> radii, std::span<const int> counts);

CountingReport counting_report(const ResonanceSet& rs, std::span<const double> radii,
                               std::span<const double> h_grid);

/// `count` evenly spaced values from lo to hi inclusive.
std::vector<double> uniform_grid(double lo, double hi, std::size_t count);

struct KJump {
  double h = 0.0;           // estimated chain parameter
  double confidence = 0.0;  // half-width of the estimate
  double raw_weight = 0.0;  // pi h times the jump of the density
  int weight = 0;
};

struct KEstimate {
  std::vector<KJump> jumps;
  /// Jump locations repeated by weight, comparable to a KMultiset.
  std::vector<double> values() const;
};

inline constexpr double kMinExtractionRadius = 150.0;
inline constexpr double kMaxExtractionGridStep = 0.02;

/// Reads chain parameters off the jumps of the logarithmic density.
KEstimate extract_k_numeric(const CountingReport& report,
                            double min_radius = kMinExtractionRadius);

struct ChainRow {
  Complex k;
  int chain = -1;  // index into ChainTable::chains, -1 when unassigned
  double residual = 0.0;
};

struct ChainTable {
  std::vector<double> chains;    // distinct K values, increasing
  std::vector<int> members;      // roots per chain (with multiplicity)
  std::vector<double> band;      // max residual per chain
  std::vector<ChainRow> rows;
};

/// Assigns each root with |k| >= rho_min to the K minimizing
/// |Im k + K ln(|Re k| + 1)|. Roots with Im k >= 0 stay unassigned.
ChainTable chain_assignment(const ResonanceSet& rs, const KMultiset& k, double rho_min);

/// Stable hex identifier of a configuration (FNV-1a over its bytes).
std::string config_hash(const Configuration& c);

}  // namespace pointres
