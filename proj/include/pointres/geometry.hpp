#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pointres {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;

double norm(const Vec3& v);
double distance(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);

/// Dense symmetric matrix of pairwise Euclidean distances, zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::span<const Vec3> points);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  double max() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// A finite simple collection of interaction centers together with the
/// common strength parameter alpha. Immutable after construction; distances
/// are computed once and cached.
class Configuration {
 public:
  /// Relative threshold below which two centers count as coincident. The
  /// absolute threshold is dedup_rel_tol * max(1, largest |coordinate|).
  static constexpr double kDefaultDedupRelTol = 1e-12;

  Configuration() = default;

  /// Throws Error(DuplicatePoints) if two centers coincide.
  static Configuration create(std::vector<Vec3> points, Complex alpha,
                              double dedup_rel_tol = kDefaultDedupRelTol);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Vec3>& points() const { return points_; }
  const Vec3& point(std::size_t j) const { return points_[j]; }
  Complex alpha() const { return alpha_; }
  /// Smallest pairwise distance; +infinity when N < 2.
  double min_sep() const { return min_sep_; }
  const DistanceMatrix& distances() const { return dist_; }

 private:
  std::vector<Vec3> points_;
  Complex alpha_{0.0, 0.0};
  double min_sep_ = 0.0;
  DistanceMatrix dist_;
};

/// V(Y) together with one maximizing permutation (0-based, perm[j] = sigma(j)).
struct SizeResult {
  double value = 0.0;
  std::vector<int> permutation;
};

Configuration new_configuration(std::vector<Vec3> points, Complex alpha);
DistanceMatrix distance_matrix(const Configuration& c);

/// Largest pairwise distance; 0 for N <= 1.
double diameter(const Configuration& c);

/// Objective sum_j d(j, perm[j]).
double permutation_length(const DistanceMatrix& d, std::span<const int> perm);

/// max over permutations of sum_j |Y_j - Y_sigma(j)|, solved as a max-weight
/// assignment in O(N^3). Among maximizers the lexicographically smallest
/// permutation word is returned.
SizeResult size_V(const Configuration& c);

/// Exhaustive maximum over S_N; N <= 8. Same tie-breaking as size_V.
SizeResult brute_force_V(const Configuration& c);

/// Result of a max-weight perfect assignment on an n x n weight matrix.
struct Assignment {
  double value = 0.0;
  std::vector<int> column_of_row;
};

/// Hungarian method on row-major weights (size n*n), maximizing the total.
/// Ties within tie_tol of the optimum resolve to the lexicographically
/// smallest assignment word.
Assignment max_weight_assignment(std::span<const double> weights, std::size_t n,
                                 double tie_tol);

}  // namespace pointres
