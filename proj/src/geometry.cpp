#include "pointres/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pointres/error.hpp"

namespace pointres {

namespace {

// Relative tie tolerance on V shared by size_V and brute_force_V.
constexpr double kTieRelTol = 1e-12;

}  // namespace

Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

double norm(const Vec3& v) { return std::hypot(v[0], v[1], v[2]); }

double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

DistanceMatrix::DistanceMatrix(std::span<const Vec3> points) : n_(points.size()), d_(n_ * n_, 0.0) {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double dij = distance(points[i], points[j]);
      d_[i * n_ + j] = dij;
      d_[j * n_ + i] = dij;
    }
  }
}

double DistanceMatrix::max() const {
  return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end());
}

Configuration Configuration::create(std::vector<Vec3> points, Complex alpha,
                                    double dedup_rel_tol) {
  double max_coord = 0.0;
  for (const auto& p : points) {
    for (double x : p) {
      if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
      max_coord = std::max(max_coord, std::abs(x));
    }
  }
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw Error(ErrorCode::InvalidArgument, "non-finite alpha");

  Configuration c;
  c.points_ = std::move(points);
  c.alpha_ = alpha;
  c.dist_ = DistanceMatrix(c.points_);
  c.min_sep_ = std::numeric_limits<double>::infinity();

  const double tol = dedup_rel_tol * std::max(1.0, max_coord);
  const std::size_t n = c.points_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = c.dist_(i, j);
      if (dij < tol) {
        throw Error(ErrorCode::DuplicatePoints,
                    "centers " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
      c.min_sep_ = std::min(c.min_sep_, dij);
    }
  }
  return c;
}

Configuration new_configuration(std::vector<Vec3> points, Complex alpha) {
  return Configuration::create(std::move(points), alpha);
}

DistanceMatrix distance_matrix(const Configuration& c) { return c.distances(); }

double diameter(const Configuration& c) { return c.distances().max(); }

double permutation_length(const DistanceMatrix& d, std::span<const int> perm) {
  double total = 0.0;
  for (std::size_t j = 0; j < perm.size(); ++j) total += d(j, static_cast<std::size_t>(perm[j]));
  return total;
}

SizeResult size_V(const Configuration& c) {
  const std::size_t n = c.size();
  if (n == 0) throw Error(ErrorCode::EmptyConfiguration, "size_V needs at least one center");
  const auto& d = c.distances();
  std::vector<double> w(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w[i * n + j] = d(i, j);

  const Assignment a = max_weight_assignment(w, n, kTieRelTol * std::max(d.max(), 1e-300));
  SizeResult r;
  r.permutation = a.column_of_row;
  r.value = permutation_length(d, r.permutation);
  return r;
}

SizeResult brute_force_V(const Configuration& c) {
  const std::size_t n = c.size();
  if (n == 0) throw Error(ErrorCode::EmptyConfiguration, "brute_force_V needs at least one center");
  if (n > 8) throw Error(ErrorCode::TooLarge, "brute_force_V is limited to N <= 8");
  const auto& d = c.distances();

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1.0;
  do {
    best = std::max(best, permutation_length(d, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Second pass: first permutation in lexicographic order that ties the max.
  const double tol = kTieRelTol * std::max(d.max(), 1e-300);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    const double v = permutation_length(d, perm);
    if (v >= best - tol) return SizeResult{v, perm};
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {};  // unreachable
}

}  // namespace pointres
