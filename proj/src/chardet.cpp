#include "pointres/chardet.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "pointres/error.hpp"

namespace pointres {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
constexpr double kWellConditioned = 1e-8;  // min/max |pivot| for the trace path
constexpr std::size_t kCofactorMaxN = 8;

void require_nonempty(const Configuration& c, const char* what) {
  if (c.empty()) throw Error(ErrorCode::EmptyConfiguration, what);
}

Complex diagonal_entry(const Configuration& c, Complex z) { return c.alpha() - kI * z / (4.0 * kPi); }

Complex plain_det(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return {1.0, 0.0};
  return m.partialPivLu().determinant();
}

}  // namespace

Complex free_green_r(Complex z, double r) { return std::exp(kI * z * r) / (4.0 * kPi * r); }

Complex free_green(Complex z, const Vec3& v) {
  const double r = norm(v);
  if (r == 0.0) throw Error(ErrorCode::ZeroSeparation, "free Green function at zero separation");
  return free_green_r(z, r);
}

GammaEval gamma_matrix(const Configuration& c, Complex z) {
  require_nonempty(c, "gamma_matrix");
  const auto n = static_cast<Eigen::Index>(c.size());
  const auto& d = c.distances();
  GammaEval g{Eigen::MatrixXcd(n, n), z};
  const Complex diag = diagonal_entry(c, z);
  for (Eigen::Index j = 0; j < n; ++j) {
    g.matrix(j, j) = diag;
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const Complex off = -free_green_r(z, d(static_cast<std::size_t>(j), static_cast<std::size_t>(k)));
      g.matrix(j, k) = off;
      g.matrix(k, j) = off;
    }
  }
  return g;
}

Eigen::MatrixXcd gamma_matrix_derivative(const Configuration& c, Complex z) {
  require_nonempty(c, "gamma_matrix_derivative");
  const auto n = static_cast<Eigen::Index>(c.size());
  const auto& d = c.distances();
  const Complex factor = -kI / (4.0 * kPi);
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    m(j, j) = factor;
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double r = d(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
      const Complex off = factor * std::exp(kI * z * r);
      m(j, k) = off;
      m(k, j) = off;
    }
  }
  return m;
}

Complex det_gamma(const Configuration& c, Complex z) {
  require_nonempty(c, "det_gamma");
  return plain_det(gamma_matrix(c, z).matrix);
}

Complex modified_determinant(const Configuration& c, Complex z) {
  if (c.empty()) return {1.0, 0.0};
  return std::pow(-4.0 * kPi, static_cast<int>(c.size())) * det_gamma(c, z);
}

Complex det_gamma_derivative_cofactor(const Configuration& c, Complex z) {
  require_nonempty(c, "det_gamma_derivative");
  const std::size_t n = c.size();
  if (n > kCofactorMaxN) throw Error(ErrorCode::TooLarge, "cofactor derivative limited to N <= 8");
  const Eigen::MatrixXcd g = gamma_matrix(c, z).matrix;
  const Eigen::MatrixXcd dg = gamma_matrix_derivative(c, z);
  if (n == 1) return dg(0, 0);

  const auto ni = static_cast<Eigen::Index>(n);
  Complex total{0.0, 0.0};
  Eigen::MatrixXcd minor(ni - 1, ni - 1);
  for (Eigen::Index j = 0; j < ni; ++j) {
    for (Eigen::Index k = 0; k < ni; ++k) {
      for (Eigen::Index r = 0, rr = 0; r < ni; ++r) {
        if (r == j) continue;
        for (Eigen::Index s = 0, ss = 0; s < ni; ++s) {
          if (s == k) continue;
          minor(rr, ss++) = g(r, s);
        }
        ++rr;
      }
      const double sign = ((j + k) % 2 == 0) ? 1.0 : -1.0;
      total += dg(j, k) * sign * plain_det(minor);
    }
  }
  return total;
}

Complex det_gamma_derivative(const Configuration& c, Complex z) {
  require_nonempty(c, "det_gamma_derivative");
  const Eigen::MatrixXcd g = gamma_matrix(c, z).matrix;
  const Eigen::MatrixXcd dg = gamma_matrix_derivative(c, z);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(g);

  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (pivots.maxCoeff() > 0.0 && pivots.minCoeff() >= kWellConditioned * pivots.maxCoeff()) {
    return lu.determinant() * lu.solve(dg).trace();
  }
  if (c.size() <= kCofactorMaxN) return det_gamma_derivative_cofactor(c, z);

  // det(G + t G') is a degree-N polynomial in t; read off its linear
  // coefficient from samples on a circle of radius rho.
  const double gnorm = g.cwiseAbs().maxCoeff();
  const double dnorm = dg.cwiseAbs().maxCoeff();
  const double rho = (dnorm > 0.0 && gnorm > 0.0) ? gnorm / dnorm : 1.0;
  const int samples = static_cast<int>(c.size()) + 1;
  Complex acc{0.0, 0.0};
  for (int k = 0; k < samples; ++k) {
    const Complex w = std::polar(1.0, 2.0 * kPi * k / samples);
    acc += plain_det(g + (rho * w) * dg) / w;
  }
  return acc / (static_cast<double>(samples) * rho);
}

LogDetEval log_det_gamma(const Configuration& c, Complex z) {
  LogDetEval out{{0.0, 0.0}, {0.0, 0.0}, false};
  if (c.empty()) return out;
  const Eigen::MatrixXcd g = gamma_matrix(c, z).matrix;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(g);
  const auto& lu_mat = lu.matrixLU();
  double log_abs = 0.0;
  double arg = lu.permutationP().determinant() < 0 ? kPi : 0.0;
  for (Eigen::Index j = 0; j < lu_mat.rows(); ++j) {
    const Complex p = lu_mat(j, j);
    if (p == Complex{0.0, 0.0}) {
      out.singular = true;
      out.log_det = {-std::numeric_limits<double>::infinity(), 0.0};
      return out;
    }
    log_abs += std::log(std::abs(p));
    arg += std::arg(p);
  }
  out.log_det = {log_abs, arg};
  out.log_derivative = lu.solve(gamma_matrix_derivative(c, z)).trace();
  if (!std::isfinite(out.log_derivative.real()) || !std::isfinite(out.log_derivative.imag()))
    out.singular = true;
  return out;
}

double gamma_scale(const Configuration& c, Complex z) {
  double s = std::abs(c.alpha()) + std::abs(z) / (4.0 * kPi);
  const auto& d = c.distances();
  for (std::size_t j = 0; j < c.size(); ++j)
    for (std::size_t k = j + 1; k < c.size(); ++k) s = std::max(s, std::abs(free_green_r(z, d(j, k))));
  return s;
}

KernelValue resolvent_kernel(const Configuration& c, Complex z, const Vec3& x, const Vec3& xp) {
  double scale = std::max({1.0, norm(x), norm(xp)});
  for (const auto& p : c.points()) scale = std::max(scale, norm(p));
  const double point_tol = Configuration::kDefaultDedupRelTol * scale;

  if (distance(x, xp) < point_tol)
    throw Error(ErrorCode::CoincidentArguments, "resolvent kernel needs x != x'");
  for (const auto& p : c.points()) {
    if (distance(x, p) < point_tol || distance(xp, p) < point_tol)
      throw Error(ErrorCode::PointOnCenter, "resolvent kernel evaluated on an interaction center");
  }

  KernelValue kv{free_green(z, x - xp), z, x, xp};
  if (c.empty()) return kv;

  const auto n = static_cast<Eigen::Index>(c.size());
  const Eigen::MatrixXcd g = gamma_matrix(c, z).matrix;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(g);
  const Complex det = lu.determinant();
  if (std::abs(det) < kSingularTol * std::pow(gamma_scale(c, z), static_cast<double>(n)))
    throw Error(ErrorCode::SingularGamma, "Gamma(z) is numerically singular");

  Eigen::VectorXcd gx(n), gxp(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    gx(j) = free_green(z, x - c.point(static_cast<std::size_t>(j)));
    gxp(j) = free_green(z, xp - c.point(static_cast<std::size_t>(j)));
  }
  kv.value += (gx.transpose() * lu.solve(gxp)).value();
  return kv;
}

double resonance_width(Complex k) { return 4.0 * std::abs(k.imag() * k.real()); }

}  // namespace pointres
