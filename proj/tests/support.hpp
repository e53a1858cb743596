#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "pointres/error.hpp"
#include "pointres/geometry.hpp"

namespace testsupport {

using pointres::Complex;
using pointres::Vec3;

// Test-side randomness is deliberately independent of the library's streams.
inline std::vector<Vec3> random_points(std::mt19937_64& gen, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<Vec3> pts(n);
  for (auto& p : pts) p = {u(gen), u(gen), u(gen)};
  return pts;
}

inline pointres::Configuration random_config(std::mt19937_64& gen, std::size_t n, Complex alpha = {1.0, 0.0}) {
  return pointres::Configuration::create(random_points(gen, n), alpha);
}

inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// |a - b| <= tol * |b|
inline bool within_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

template <class F>
pointres::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const pointres::Error& e) {
    return e.code();
  }
  FAIL("expected a pointres::Error");
  return pointres::ErrorCode::InvalidArgument;
}

}  // namespace testsupport
