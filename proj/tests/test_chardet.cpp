#include <cmath>
#include <numbers>

#include "pointres/chardet.hpp"
#include "pointres/exppoly.hpp"
#include "support.hpp"

using namespace pointres;
using namespace testsupport;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I{0.0, 1.0};

// exp by Euler's formula on separate real parts, independent of std::exp(complex).
Complex euler_exp(Complex w) {
  const double m = std::exp(w.real());
  return {m * std::cos(w.imag()), m * std::sin(w.imag())};
}

Complex random_z(std::mt19937_64& gen, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  for (;;) {
    const Complex z{u(gen), u(gen)};
    if (std::abs(z) <= radius) return z;
  }
}

// Richardson-extrapolated central difference.
Complex fd_derivative(const Configuration& c, Complex z, double h) {
  auto central = [&](double s) { return (det_gamma(c, z + s) - det_gamma(c, z - s)) / (2.0 * s); };
  return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

}  // namespace

TEST_CASE("free Green function") {
  CHECK(std::abs(free_green({0, 0}, {1, 0, 0}) - 1.0 / (4 * kPi)) < 1e-15);
  CHECK(std::abs(free_green(I, {0, 1, 0}) - std::exp(-1.0) / (4 * kPi)) < 1e-15);
  const Complex z{1.0, 1.0};
  CHECK(rel_err(free_green(z, {0, 0, 2}), euler_exp({-2.0, 2.0}) / (8 * kPi)) < 1e-14);
  CHECK(error_code_of([] { free_green({1, 0}, {0, 0, 0}); }) == ErrorCode::ZeroSeparation);
}

TEST_CASE("gamma matrix entries") {
  const auto one = new_configuration({{0, 0, 0}}, {1.0, 0.0});
  CHECK(std::abs(gamma_matrix(one, 0.0).matrix(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(gamma_matrix(one, 4.0 * kPi * I).matrix(0, 0) - 2.0) < 1e-15);

  const auto two = new_configuration({{0, 0, 0}, {1, 0, 0}}, {1.0, 0.0});
  const auto g = gamma_matrix(two, 0.0).matrix;
  CHECK(std::abs(g(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(g(0, 1) + 1.0 / (4 * kPi)) < 1e-15);
  CHECK(std::abs(g(1, 0) + 1.0 / (4 * kPi)) < 1e-15);

  CHECK(error_code_of([] { gamma_matrix(new_configuration({}, {1.0, 0.0}), 1.0); }) ==
        ErrorCode::EmptyConfiguration);

  std::mt19937_64 gen(10);
  for (int t = 0; t < 20; ++t) {
    const auto c = random_config(gen, 2 + static_cast<std::size_t>(t % 5), {0.3, -0.2});
    const auto m = gamma_matrix(c, random_z(gen, 30.0)).matrix;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) CHECK(m(i, j) == m(j, i));
  }
}

TEST_CASE("determinant closed forms") {
  const auto one = new_configuration({{0, 0, 0}}, {1.0, 0.0});
  CHECK(std::abs(det_gamma(one, -4.0 * kPi * I)) < 1e-15);
  CHECK(std::abs(modified_determinant(one, 2.0 + I) - (I * (2.0 + I) - 4.0 * kPi)) < 1e-13);
  CHECK(modified_determinant(new_configuration({}, {1.0, 0.0}), 3.0) == Complex{1.0, 0.0});

  const Complex alpha{0.7, 0.1};
  const double ell = 1.3;
  const auto two = new_configuration({{0, 0, 0}, {0, ell, 0}}, alpha);
  std::mt19937_64 gen(11);
  for (int t = 0; t < 20; ++t) {
    const Complex z = random_z(gen, 20.0);
    const Complex a = alpha - I * z / (4 * kPi);
    const Complex g = euler_exp(I * z * ell) / (4 * kPi * ell);
    CHECK(rel_err(det_gamma(two, z), a * a - g * g) < 1e-12);
  }
  const auto unit = new_configuration({{0, 0, 0}, {1, 0, 0}}, {1.0, 0.0});
  for (int t = 0; t < 20; ++t) {
    const Complex z = random_z(gen, 20.0);
    const Complex ref = (I * z - 4 * kPi) * (I * z - 4 * kPi) - euler_exp(2.0 * I * z);
    CHECK(rel_err(modified_determinant(unit, z), ref) < 1e-12);
  }
}

TEST_CASE("determinant agrees with the canonical exponential polynomial") {
  std::mt19937_64 gen(12);
  for (int t = 0; t < 50; ++t) {
    const auto c = random_config(gen, 1 + static_cast<std::size_t>(t % 6), {1.0, 0.0});
    const auto p = canonical_form(c);
    for (int s = 0; s < 50; ++s) {
      const Complex z = random_z(gen, 30.0);
      CHECK(rel_err(modified_determinant(c, z), eval_canonical(p, z)) < 1e-9);
    }
  }
}

TEST_CASE("determinant derivative") {
  const auto one = new_configuration({{0, 0, 0}}, {1.0, 0.0});
  CHECK(std::abs(det_gamma_derivative(one, 5.0 - 2.0 * I) + I / (4 * kPi)) < 1e-15);

  const auto two = new_configuration({{0, 0, 0}, {1, 0, 0}}, {1.0, 0.0});
  std::mt19937_64 gen(13);
  for (int t = 0; t < 10; ++t) {
    const Complex z = random_z(gen, 10.0);
    CHECK(rel_err(det_gamma_derivative(two, z), fd_derivative(two, z, 1e-6)) < 1e-6);
  }
  for (int t = 0; t < 10; ++t) {
    const auto c = random_config(gen, 4);
    const Complex z = random_z(gen, 10.0);
    const Complex d = det_gamma_derivative(c, z);
    CHECK(rel_err(d, fd_derivative(c, z, 1e-6)) < 1e-6);
    CHECK(rel_err(det_gamma_derivative_cofactor(c, z), d) < 1e-9);
  }
  // At a simple zero the trace identity is unusable; the fallback still agrees.
  const Complex z0 = -4.0 * kPi * I;
  CHECK(rel_err(det_gamma_derivative(one, z0), -I / (4 * kPi)) < 1e-14);
}

TEST_CASE("log-domain determinant") {
  std::mt19937_64 gen(14);
  for (int t = 0; t < 20; ++t) {
    const auto c = random_config(gen, 1 + static_cast<std::size_t>(t % 5));
    const Complex z = random_z(gen, 20.0);
    const auto e = log_det_gamma(c, z);
    const Complex det = det_gamma(c, z);
    CHECK(!e.singular);
    CHECK(rel_err(std::exp(e.log_det), det) < 1e-10);
    CHECK(rel_err(e.log_derivative, det_gamma_derivative(c, z) / det) < 1e-9);
  }
  // Far below the real axis det overflows, its logarithm does not.
  const auto two = new_configuration({{0, 0, 0}, {1, 0, 0}}, {1.0, 0.0});
  const auto deep = log_det_gamma(two, Complex{3.0, -400.0});
  CHECK(std::isfinite(deep.log_det.real()));
  CHECK(within_rel(deep.log_det.real(), 800.0 - std::log(16 * kPi * kPi), 1e-6));
}

TEST_CASE("conjugation symmetry for real alpha") {
  std::mt19937_64 gen(15);
  for (int t = 0; t < 20; ++t) {
    const auto c = random_config(gen, 1 + static_cast<std::size_t>(t % 6), {0.8, 0.0});
    const Complex z = random_z(gen, 30.0);
    CHECK(rel_err(det_gamma(c, -std::conj(z)), std::conj(det_gamma(c, z))) < 1e-12);
  }
}

TEST_CASE("resolvent kernel") {
  const Complex z{2.0, 0.5};
  const Vec3 x{0.3, 0.1, -0.2}, xp{-0.4, 0.6, 0.9};
  const auto empty = new_configuration({}, {1.0, 0.0});
  CHECK(rel_err(resolvent_kernel(empty, z, x, xp).value, free_green(z, x - xp)) < 1e-15);

  std::mt19937_64 gen(16);
  for (int t = 0; t < 10; ++t) {
    const auto c = random_config(gen, 1 + static_cast<std::size_t>(t % 5));
    const auto pts = random_points(gen, 2, 2.0);
    const Complex w = random_z(gen, 10.0);
    const auto a = resolvent_kernel(c, w, pts[0], pts[1]);
    const auto b = resolvent_kernel(c, w, pts[1], pts[0]);
    CHECK(rel_err(a.value, b.value) < 1e-12);
  }

  // Direct evaluation of the Krein formula for one center.
  const auto one = new_configuration({{0, 0, 0}}, {1.0, 0.0});
  const Complex ref = free_green(z, x - xp) + free_green(z, x) * free_green(z, xp) / (1.0 - I * z / (4 * kPi));
  CHECK(rel_err(resolvent_kernel(one, z, x, xp).value, ref) < 1e-13);

  CHECK(error_code_of([&] { resolvent_kernel(one, z, {0, 0, 0}, xp); }) == ErrorCode::PointOnCenter);
  CHECK(error_code_of([&] { resolvent_kernel(one, z, x, x); }) == ErrorCode::CoincidentArguments);
  CHECK(error_code_of([&] { resolvent_kernel(one, -4.0 * kPi * I, x, xp); }) == ErrorCode::SingularGamma);

  // |kernel| grows like 1/|det| towards the resonance.
  std::vector<double> lx, ly;
  for (double e : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const Complex w = -4.0 * kPi * I + e;
    lx.push_back(std::log(e));
    ly.push_back(std::log(std::abs(resolvent_kernel(one, w, x, xp).value)));
  }
  const double slope = (ly.back() - ly.front()) / (lx.back() - lx.front());
  CHECK(within_rel(slope, -1.0, 0.05));
}

TEST_CASE("resonance width") {
  CHECK(resonance_width(1.0) == 0.0);
  CHECK(resonance_width({2.0, -3.0}) == 24.0);
  CHECK(resonance_width(-4.0 * kPi * I) == 0.0);
}
