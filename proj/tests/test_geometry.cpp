#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pointres/geometry.hpp"
#include "support.hpp"

using namespace pointres;
using namespace testsupport;

namespace {

double pair_scan_diameter(const std::vector<Vec3>& p) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double dx = p[i][0] - p[j][0], dy = p[i][1] - p[j][1], dz = p[i][2] - p[j][2];
      d = std::max(d, std::sqrt(dx * dx + dy * dy + dz * dz));
    }
  return d;
}

Vec3 rotate(const Vec3& v, double a, double b) {
  // rotation about z by a, then about x by b
  const Vec3 r1{std::cos(a) * v[0] - std::sin(a) * v[1], std::sin(a) * v[0] + std::cos(a) * v[1], v[2]};
  return {r1[0], std::cos(b) * r1[1] - std::sin(b) * r1[2], std::sin(b) * r1[1] + std::cos(b) * r1[2]};
}

}  // namespace

TEST_CASE("new_configuration accepts empty and small inputs") {
  const auto empty = new_configuration({}, {1.0, 0.0});
  CHECK(empty.size() == 0);
  CHECK(std::isinf(empty.min_sep()));

  const auto two = new_configuration({{0, 0, 0}, {1, 0, 0}}, {1.0, 0.0});
  CHECK(two.size() == 2);
  CHECK(two.min_sep() == doctest::Approx(1.0));
}

TEST_CASE("coincident centers are rejected") {
  CHECK(error_code_of([] { new_configuration({{0, 0, 0}, {1e-15, 0, 0}}, {1.0, 0.0}); }) ==
        ErrorCode::DuplicatePoints);
  CHECK(error_code_of([] { new_configuration({{1, 2, 3}, {0, 0, 0}, {1, 2, 3}}, {1.0, 0.0}); }) ==
        ErrorCode::DuplicatePoints);
  CHECK(error_code_of([] { new_configuration({{std::nan(""), 0, 0}}, {1.0, 0.0}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("distance matrix") {
  const auto one = new_configuration({{1, 1, 1}}, {1.0, 0.0});
  CHECK(distance_matrix(one).size() == 1);
  CHECK(distance_matrix(one)(0, 0) == 0.0);

  const auto tri = new_configuration({{0, 0, 0}, {3, 4, 0}}, {1.0, 0.0});
  CHECK(distance_matrix(tri)(0, 1) == 5.0);
  CHECK(distance_matrix(tri)(1, 0) == 5.0);

  std::mt19937_64 gen(1);
  const auto pts = random_points(gen, 5);
  const auto d = distance_matrix(new_configuration(pts, {1.0, 0.0}));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      const double ref = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1], pts[i][2] - pts[j][2]);
      CHECK(within_rel(d(i, j), ref, 1e-14));
      CHECK(d(i, j) == d(j, i));
    }
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t k = 0; k < 5; ++k) CHECK(d(i, k) <= d(i, j) + d(j, k) + 1e-14);
}

TEST_CASE("diameter") {
  CHECK(diameter(new_configuration({}, {1.0, 0.0})) == 0.0);
  CHECK(diameter(new_configuration({{2, 2, 2}}, {1.0, 0.0})) == 0.0);
  CHECK(diameter(new_configuration({{0, 0, 0}, {1, 0, 0}, {0.5, 0, 0}}, {1.0, 0.0})) == 1.0);
  std::mt19937_64 gen(2);
  const auto pts = random_points(gen, 6);
  CHECK(within_rel(diameter(new_configuration(pts, {1.0, 0.0})), pair_scan_diameter(pts), 1e-14));
}

TEST_CASE("size_V small cases") {
  const auto one = size_V(new_configuration({{0, 0, 0}}, {1.0, 0.0}));
  CHECK(one.value == 0.0);
  CHECK(one.permutation == std::vector<int>{0});

  const double ell = 2.5;
  const auto two = size_V(new_configuration({{0, 0, 0}, {ell, 0, 0}}, {1.0, 0.0}));
  CHECK(two.value == doctest::Approx(2 * ell));
  CHECK(two.permutation == std::vector<int>{1, 0});

  const auto square = new_configuration({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {1.0, 0.0});
  CHECK(brute_force_V(square).value == doctest::Approx(4 * std::sqrt(2.0)));
  CHECK(size_V(square).value == doctest::Approx(4 * std::sqrt(2.0)));

  CHECK(error_code_of([] { size_V(new_configuration({}, {1.0, 0.0})); }) == ErrorCode::EmptyConfiguration);
  std::mt19937_64 gen(3);
  const auto nine = random_config(gen, 9);
  CHECK(error_code_of([&] { brute_force_V(nine); }) == ErrorCode::TooLarge);
}

TEST_CASE("size_V matches exhaustive search") {
  std::mt19937_64 gen(4);
  const auto six = random_config(gen, 6);
  CHECK(rel_err(size_V(six).value, brute_force_V(six).value) <= 1e-12);

  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 6);
    const auto c = random_config(gen, n);
    const auto fast = size_V(c);
    const auto slow = brute_force_V(c);
    CHECK(rel_err(fast.value, slow.value) <= 1e-12);
    CHECK(within_rel(permutation_length(c.distances(), fast.permutation), fast.value, 1e-14));
  }
}

TEST_CASE("ties resolve to the lexicographically smallest maximizer") {
  // Regular shapes have many maximizing permutations; sigma and its inverse always tie.
  const double h = std::sqrt(3.0) / 2.0;
  const std::vector<std::vector<Vec3>> shapes = {
      {{0, 0, 0}, {1, 0, 0}, {0.5, h, 0}},
      {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}},
      {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}},
      {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {4, 0, 0}},
  };
  for (const auto& s : shapes) {
    const auto c = new_configuration(s, {1.0, 0.0});
    CHECK(size_V(c).permutation == brute_force_V(c).permutation);
  }
  std::mt19937_64 gen(5);
  for (int t = 0; t < 50; ++t) {
    const auto c = random_config(gen, 2 + static_cast<std::size_t>(t % 6));
    CHECK(size_V(c).permutation == brute_force_V(c).permutation);
  }
}

TEST_CASE("max_weight_assignment against enumeration") {
  std::mt19937_64 gen(6);
  std::uniform_int_distribution<int> small(0, 3);  // many ties
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 6);
    std::vector<double> w(n * n);
    for (auto& x : w) x = small(gen);
    std::vector<int> perm(n), best;
    std::iota(perm.begin(), perm.end(), 0);
    double best_v = -1.0;
    do {
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) v += w[i * n + static_cast<std::size_t>(perm[i])];
      if (v > best_v) {
        best_v = v;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    const auto a = max_weight_assignment(w, n, 1e-12);
    CHECK(a.value == best_v);
    CHECK(a.column_of_row == best);
  }
}

TEST_CASE("size_V bounds and rigid-motion invariance") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 7);
    auto pts = random_points(gen, n);
    const auto c = new_configuration(pts, {1.0, 0.0});
    const double v = size_V(c).value, d = diameter(c);
    CHECK(v >= 2.0 * d * (1 - 1e-14));
    CHECK(v >= d);
    CHECK(v <= static_cast<double>(n) * d * (1 + 1e-14));

    const double a = ang(gen), b = ang(gen);
    for (auto& p : pts) {
      p = rotate(p, a, b);
      p = {p[0] + 3.0, p[1] - 1.5, p[2] + 0.25};
    }
    CHECK(rel_err(size_V(new_configuration(pts, {1.0, 0.0})).value, v) < 1e-9);
  }
}
