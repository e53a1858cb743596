#include "pointres/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "pointres/chardet.hpp"
#include "pointres/error.hpp"
#include "pointres/parallel.hpp"

namespace pointres {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Sample {
  Complex z;
  double log_abs = 0.0;
  double phase = 0.0;
  Complex log_derivative;
  bool singular = false;
};

Sample sample_at(const Configuration& c, Complex z) {
  const LogDetEval e = log_det_gamma(c, z);
  return {z, e.log_det.real(), e.log_det.imag(), e.log_derivative, e.singular};
}

// A boundary piece parametrized over t in [0, 1], traversed counterclockwise.
struct Piece {
  bool arc = false;
  Complex a, b;             // segment endpoints
  Complex center;           // arc data
  double radius = 0.0, th0 = 0.0, th1 = 0.0;

  Complex at(double t) const {
    if (arc) return center + std::polar(radius, th0 + t * (th1 - th0));
    return a + t * (b - a);
  }
};

struct Outline {
  std::vector<Piece> pieces;
  double size = 0.0;   // diameter-like extent
  double reach = 0.0;  // max |z| on the contour
};

Outline outline(const Contour& contour) {
  Outline o;
  if (const auto* d = std::get_if<Disc>(&contour)) {
    constexpr int kArcs = 32;
    for (int k = 0; k < kArcs; ++k) {
      Piece p;
      p.arc = true;
      p.center = d->center;
      p.radius = d->radius;
      p.th0 = kTwoPi * k / kArcs;
      p.th1 = kTwoPi * (k + 1) / kArcs;
      o.pieces.push_back(p);
    }
    o.size = 2.0 * d->radius;
    o.reach = std::abs(d->center) + d->radius;
    return o;
  }
  const auto& r = std::get<Rect>(contour);
  const Complex corners[4] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
  constexpr int kPerEdge = 8;
  for (int e = 0; e < 4; ++e) {
    const Complex a = corners[e];
    const Complex b = corners[(e + 1) % 4];
    for (int k = 0; k < kPerEdge; ++k) {
      Piece p;
      p.a = a + (b - a) * (static_cast<double>(k) / kPerEdge);
      p.b = a + (b - a) * (static_cast<double>(k + 1) / kPerEdge);
      o.pieces.push_back(p);
    }
  }
  o.size = std::max(r.x1 - r.x0, r.y1 - r.y0);
  for (const auto& z : corners) o.reach = std::max(o.reach, std::abs(z));
  return o;
}

Contour perturbed(const Contour& contour, double rel) {
  if (const auto* d = std::get_if<Disc>(&contour)) return Disc{d->center, d->radius * (1.0 + rel)};
  const auto& r = std::get<Rect>(contour);
  const double s = rel * std::max(r.x1 - r.x0, r.y1 - r.y0);
  return Rect{r.x0 - s, r.x1 + s, r.y0 - s, r.y1 + s};
}

double width(const Rect& r) { return std::max(r.x1 - r.x0, r.y1 - r.y0); }

Complex center(const Rect& r) { return {0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1)}; }

bool contains(const Rect& r, Complex z, double slack = 0.0) {
  return z.real() >= r.x0 - slack && z.real() <= r.x1 + slack && z.imag() >= r.y0 - slack &&
         z.imag() <= r.y1 + slack;
}

bool outside_disc(const Rect& r, double R) {
  const double dx = std::max({0.0, r.x0, -r.x1});
  const double dy = std::max({0.0, r.y0, -r.y1});
  return std::hypot(dx, dy) > R;
}

struct Cell {
  Rect rect;
  int count = 0;
  double max_log_abs = 0.0;
};

// Splits a cell into four children whose counts add up to the parent's.
// Split lines sit slightly off centre so they never land on the imaginary
// axis, where zeros of symmetric configurations lie. They move by the jitter
// sequence when a zero sits on one of them.
std::optional<std::vector<Cell>> split(const Configuration& c, const Cell& cell,
                                       const RootFindOptions& opt) {
  constexpr double kOffset = 0.0173;
  const double w = cell.rect.x1 - cell.rect.x0;
  const double h = cell.rect.y1 - cell.rect.y0;
  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    const double j = kOffset + (attempt == 0 || opt.jitter.empty() ? 0.0 : opt.jitter[static_cast<std::size_t>(attempt - 1) % opt.jitter.size()]);
    const double xm = cell.rect.x0 + w * (0.5 + j);
    const double ym = cell.rect.y0 + h * (0.5 - 0.7 * j);
    const Rect parts[4] = {{cell.rect.x0, xm, cell.rect.y0, ym},
                           {xm, cell.rect.x1, cell.rect.y0, ym},
                           {cell.rect.x0, xm, ym, cell.rect.y1},
                           {xm, cell.rect.x1, ym, cell.rect.y1}};
    std::vector<Cell> children;
    int total = 0;
    bool ok = true;
    for (const auto& p : parts) {
      const WindingResult wr = winding_number(c, p, opt);
      if (!wr.ok) {
        ok = false;
        break;
      }
      total += wr.count;
      children.push_back(Cell{p, wr.count, wr.max_log_abs});
    }
    if (ok && total == cell.count) return children;
  }
  return std::nullopt;
}

std::optional<Root> newton_in_cell(const Configuration& c, const Cell& cell,
                                   const RootFindOptions& opt) {
  const int m = cell.count;
  const double w = width(cell.rect);
  Rect guard = cell.rect;
  guard.x0 -= 0.5 * w;
  guard.x1 += 0.5 * w;
  guard.y0 -= 0.5 * w;
  guard.y1 += 0.5 * w;

  Complex z = center(cell.rect);
  bool converged = false;
  for (int it = 0; it < opt.max_newton_iter; ++it) {
    const LogDetEval e = log_det_gamma(c, z);
    if (e.singular) {
      converged = true;
      break;
    }
    const Complex step = static_cast<double>(m) / e.log_derivative;
    const Complex next = z - step;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag()) || !contains(guard, next)) break;
    z = next;
    if (std::abs(step) <= 8.0 * kEps * std::max(1.0, std::abs(z))) {
      converged = true;
      break;
    }
  }
  if (!converged || !contains(cell.rect, z)) return std::nullopt;

  const LogDetEval e = log_det_gamma(c, z);
  const double residual = e.singular ? 0.0 : std::exp(e.log_det.real() - cell.max_log_abs);
  return Root{z, m, residual};
}

Root solve_cell(const Configuration& c, const Cell& cell, const RootFindOptions& opt,
                double min_cell) {
  if (auto r = newton_in_cell(c, cell, opt); r && r->residual <= opt.residual_tol) return *r;

  if (width(cell.rect) > min_cell) {
    // Bisection fallback: descend into the child that holds the zero(s).
    if (auto children = split(c, cell, opt)) {
      for (const auto& child : *children) {
        if (child.count == cell.count) return solve_cell(c, child, opt, min_cell);
      }
      throw Error(ErrorCode::NonConvergence, "zeros of a leaf cell separated during refinement");
    }
    throw Error(ErrorCode::BoundaryZero, "could not subdivide a leaf cell");
  }

  const Complex z = center(cell.rect);
  const LogDetEval e = log_det_gamma(c, z);
  const double residual = e.singular ? 0.0 : std::exp(e.log_det.real() - cell.max_log_abs);
  if (residual > opt.residual_tol) {
    std::ostringstream msg;
    msg << "Newton failed near " << z << " (residual " << residual << ")";
    throw Error(ErrorCode::NonConvergence, msg.str());
  }
  return Root{z, cell.count, residual};
}

}  // namespace

WindingResult winding_number(const Configuration& c, const Contour& contour,
                             const RootFindOptions& opt) {
  WindingResult out;
  if (c.empty()) {
    out.ok = true;
    return out;
  }
  const Outline o = outline(contour);
  const double min_seg = std::max(1e-10 * o.size, 64.0 * kEps * (1.0 + o.reach));

  struct Interval {
    const Piece* piece;
    double t0, t1;
    Sample s0, s1;
  };

  double total = 0.0;
  double max_log = -std::numeric_limits<double>::infinity();
  std::vector<Interval> stack;
  for (auto it = o.pieces.rbegin(); it != o.pieces.rend(); ++it) {
    stack.push_back({&*it, 0.0, 1.0, sample_at(c, it->at(0.0)), sample_at(c, it->at(1.0))});
    out.evaluations += 2;
  }

  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    if (iv.s0.singular || iv.s1.singular) return out;
    max_log = std::max({max_log, iv.s0.log_abs, iv.s1.log_abs});

    const Complex h = iv.s1.z - iv.s0.z;
    const double dphi = std::remainder(iv.s1.phase - iv.s0.phase, kTwoPi);
    const double p0 = (iv.s0.log_derivative * h).imag();
    const double p1 = (iv.s1.log_derivative * h).imag();
    const bool resolved = std::abs(dphi) < kPi / 2 && std::abs(p0) < kPi / 2 &&
                          std::abs(p1) < kPi / 2 && std::abs(dphi - 0.5 * (p0 + p1)) < kPi / 4;
    if (resolved) {
      total += dphi;
      continue;
    }
    if (std::abs(h) < min_seg || out.evaluations >= opt.max_evals_per_contour) return out;

    const double tm = 0.5 * (iv.t0 + iv.t1);
    const Sample sm = sample_at(c, iv.piece->at(tm));
    ++out.evaluations;
    stack.push_back({iv.piece, tm, iv.t1, sm, iv.s1});
    stack.push_back({iv.piece, iv.t0, tm, iv.s0, sm});
  }

  const double turns = total / kTwoPi;
  const double rounded = std::round(turns);
  out.max_log_abs = max_log;
  if (std::abs(turns - rounded) < 0.25 && rounded >= 0.0) {
    out.count = static_cast<int>(rounded);
    out.ok = true;
  }
  return out;
}

int count_zeros(const Configuration& c, const Contour& contour, const RootFindOptions& opt) {
  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    const Contour cur =
        attempt == 0 || opt.jitter.empty() ? contour
                     : perturbed(contour, opt.jitter[static_cast<std::size_t>(attempt - 1) % opt.jitter.size()]);
    const WindingResult w = winding_number(c, cur, opt);
    if (w.ok) return w.count;
  }
  throw Error(ErrorCode::BoundaryZero, "zero on the contour after all perturbations");
}

int ResonanceSet::total_multiplicity() const {
  int total = 0;
  for (const auto& r : roots) total += r.multiplicity;
  return total;
}

ResonanceSet find_resonances(const Configuration& c, double R, const RootFindOptions& opt) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "search radius must be positive");
  ResonanceSet rs;
  rs.region = R;
  rs.config_hash = config_hash(c);
  if (c.empty()) return rs;

  const double min_cell = opt.min_cell_rel * R;

  std::optional<Cell> root_cell;
  for (int attempt = 0; attempt <= opt.max_retries && !root_cell; ++attempt) {
    const double grow = attempt == 0 || opt.jitter.empty() ? 0.0 : opt.jitter[static_cast<std::size_t>(attempt - 1) % opt.jitter.size()];
    const double half = R * (1.0 + grow);
    const Rect sq{-half, half, -half, half};
    const WindingResult w = winding_number(c, sq, opt);
    if (w.ok) root_cell = Cell{sq, w.count, w.max_log_abs};
  }
  if (!root_cell) throw Error(ErrorCode::BoundaryZero, "zero on the bounding square");

  std::vector<Cell> frontier{*root_cell};
  std::vector<Cell> leaves;
  while (!frontier.empty()) {
    std::vector<std::vector<Cell>> children(frontier.size());
    std::vector<char> is_leaf(frontier.size(), 0);
    parallel_for(frontier.size(), opt.workers, [&](std::size_t i) {
      const Cell& cell = frontier[i];
      if (cell.count == 0 || outside_disc(cell.rect, R)) return;
      if (cell.count == 1 || width(cell.rect) <= min_cell) {
        is_leaf[i] = 1;
        return;
      }
      auto parts = split(c, cell, opt);
      if (!parts) throw Error(ErrorCode::BoundaryZero, "could not subdivide a cell");
      children[i] = std::move(*parts);
    });
    std::vector<Cell> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (is_leaf[i]) leaves.push_back(frontier[i]);
      next.insert(next.end(), children[i].begin(), children[i].end());
    }
    frontier.swap(next);
  }

  std::vector<Root> found(leaves.size());
  parallel_for(leaves.size(), opt.workers,
               [&](std::size_t i) { found[i] = solve_cell(c, leaves[i], opt, min_cell); });

  for (const auto& r : found)
    if (std::abs(r.k) <= R) rs.roots.push_back(r);
  std::sort(rs.roots.begin(), rs.roots.end(), [](const Root& a, const Root& b) {
    if (a.k.real() != b.k.real()) return a.k.real() < b.k.real();
    return a.k.imag() < b.k.imag();
  });
  return rs;
}

std::vector<int> counting_function(const ResonanceSet& rs, std::span<const double> radii) {
  std::vector<int> out;
  out.reserve(radii.size());
  for (double R : radii) {
    if (R > rs.region * (1.0 + 1e-12))
      throw Error(ErrorCode::RegionExceeded, "radius exceeds the searched region");
    int n = 0;
    for (const auto& r : rs.roots)
      if (std::abs(r.k) <= R) n += r.multiplicity;
    out.push_back(n);
  }
  return out;
}

std::vector<int> log_counting(const ResonanceSet& rs, std::span<const double> h_grid, double R) {
  if (R > rs.region * (1.0 + 1e-12))
    throw Error(ErrorCode::RegionExceeded, "radius exceeds the searched region");
  std::vector<int> out;
  out.reserve(h_grid.size());
  for (double h : h_grid) {
    int n = 0;
    for (const auto& r : rs.roots) {
      if (std::abs(r.k) > R) continue;
      if (-h * std::log1p(std::abs(r.k.real())) <= r.k.imag()) n += r.multiplicity;
    }
    out.push_back(n);
  }
  return out;
}

double ad_estimate(std::span<const double> radii, std::span<const int> counts) {
  const std::size_t n = std::min(radii.size(), counts.size());
  if (n == 0) return 0.0;
  const std::size_t start = n / 2;
  const std::size_t m = n - start;
  if (m < 2) return radii[n - 1] > 0.0 ? counts[n - 1] / radii[n - 1] : 0.0;
  double rbar = 0.0, cbar = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    rbar += radii[i];
    cbar += counts[i];
  }
  rbar /= static_cast<double>(m);
  cbar /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    sxy += (radii[i] - rbar) * (counts[i] - cbar);
    sxx += (radii[i] - rbar) * (radii[i] - rbar);
  }
  return sxx > 0.0 ? std::max(0.0, sxy / sxx) : 0.0;
}

CountingReport counting_report(const ResonanceSet& rs, std::span<const double> radii,
                               std::span<const double> h_grid) {
  CountingReport rep;
  rep.radii.assign(radii.begin(), radii.end());
  rep.h_grid.assign(h_grid.begin(), h_grid.end());
  rep.counts = counting_function(rs, radii);
  for (double R : radii) rep.log_counts.push_back(log_counting(rs, h_grid, R));
  rep.ad_estimate = ad_estimate(rep.radii, rep.counts);
  if (!radii.empty() && radii.back() > 0.0) {
    const auto& last = rep.log_counts.back();
    for (std::size_t i = 1; i < last.size(); ++i) {
      if (last[i] != last[i - 1])
        rep.ad_log_steps.push_back({rep.h_grid[i], (last[i] - last[i - 1]) / radii.back()});
    }
  }
  return rep;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
  std::vector<double> g;
  if (count == 0) return g;
  if (count == 1) return {hi};
  for (std::size_t i = 0; i < count; ++i)
    g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return g;
}

std::vector<double> KEstimate::values() const {
  std::vector<double> v;
  for (const auto& j : jumps) v.insert(v.end(), static_cast<std::size_t>(j.weight), j.h);
  return v;
}

namespace {

struct LineFit {
  bool ok = false;
  double slope = 0.0;
  double offset = 0.0;  // y = slope * x - offset
  double se = 0.0;
};

// Index range [lo, hi] of h bins (i, with midpoint in (h[i-1], h[i])) inside [a, b].
std::pair<std::size_t, std::size_t> window_bins(const std::vector<double>& h, double a, double b) {
  std::size_t lo = h.size(), hi = 0;
  for (std::size_t i = 1; i < h.size(); ++i) {
    const double m = 0.5 * (h[i] + h[i - 1]);
    if (m >= a && m <= b) {
      lo = std::min(lo, i);
      hi = std::max(hi, i);
    }
  }
  return {lo, hi};
}

// Weighted least squares of y = h * ln(rho + 1) against x = ln(rho + 1), one
// point per radius shell (s-1, s] holding roots in the shell's h window.
template <class Window>
LineFit fit_shells(const CountingReport& rep, std::size_t first, std::size_t last, Window window) {
  const auto& radii = rep.radii;
  const auto& h = rep.h_grid;
  std::vector<double> xs, ys, ws;
  for (std::size_t s = std::max<std::size_t>(first, 1); s <= last; ++s) {
    const double rho = 0.5 * (radii[s - 1] + radii[s]);
    const auto [lo, hi] = window(s, rho);
    double cnt = 0.0, hm = 0.0;
    for (std::size_t i = lo; i <= hi && i < h.size(); ++i) {
      const int c = (rep.log_counts[s][i] - rep.log_counts[s][i - 1]) -
                    (rep.log_counts[s - 1][i] - rep.log_counts[s - 1][i - 1]);
      cnt += c;
      hm += c * 0.5 * (h[i] + h[i - 1]);
    }
    if (cnt <= 0.0) continue;
    xs.push_back(std::log1p(rho));
    ys.push_back(hm / cnt * std::log1p(rho));
    ws.push_back(cnt);
  }
  LineFit f;
  if (xs.size() < 3) return f;
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sw += ws[k];
    sx += ws[k] * xs[k];
    sy += ws[k] * ys[k];
  }
  const double xb = sx / sw, yb = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += ws[k] * (xs[k] - xb) * (xs[k] - xb);
    sxy += ws[k] * (xs[k] - xb) * (ys[k] - yb);
  }
  if (!(sxx > 0.0)) return f;
  f.slope = sxy / sxx;
  f.offset = f.slope * xb - yb;
  double rss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (f.slope * xs[k] - f.offset);
    rss += ws[k] * r * r;
  }
  const double dof = std::max(1.0, static_cast<double>(xs.size()) - 2.0);
  f.se = std::sqrt(rss / dof / sxx);
  f.ok = true;
  return f;
}

}  // namespace

KEstimate extract_k_numeric(const CountingReport& report, double min_radius) {
  const auto& radii = report.radii;
  const auto& h = report.h_grid;
  if (radii.empty() || radii.back() < min_radius)
    throw Error(ErrorCode::InsufficientRadius, "need a report radius of at least " + std::to_string(min_radius));
  if (h.size() < 2) throw Error(ErrorCode::InvalidArgument, "h grid too short");
  double step = 0.0;
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (!(h[i] > h[i - 1])) throw Error(ErrorCode::InvalidArgument, "h grid must increase");
    step = std::max(step, h[i] - h[i - 1]);
  }
  if (step > kMaxExtractionGridStep)
    throw Error(ErrorCode::InvalidArgument, "h grid step must not exceed 0.02");

  const std::size_t top = radii.size() - 1;
  const double R = radii[top];
  std::size_t inner = top;
  for (std::size_t s = 0; s < top; ++s)
    if (radii[s] <= 0.5 * R) inner = s;
  if (inner == top) throw Error(ErrorCode::InsufficientRadius, "radius grid has no point at or below R/2");

  // Roots of the annulus R/2 < |k| <= R that enter the strip between h[i-1] and h[i].
  auto shell_mass = [&](std::size_t s_lo, std::size_t s_hi, std::size_t i) {
    const auto& a = report.log_counts[s_lo];
    const auto& b = report.log_counts[s_hi];
    return (b[i] - b[i - 1]) - (a[i] - a[i - 1]);
  };
  auto mid = [&](std::size_t i) { return 0.5 * (h[i] + h[i - 1]); };

  std::vector<int> mass(h.size(), 0);
  for (std::size_t i = 1; i < h.size(); ++i) mass[i] = shell_mass(inner, top, i);

  const std::size_t gap = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(0.05 / step)));
  KEstimate est;
  std::size_t i = 1;
  while (i < h.size()) {
    if (mass[i] <= 0) {
      ++i;
      continue;
    }
    std::size_t lo = i, hi = i, zeros = 0;
    for (std::size_t k = i + 1; k < h.size(); ++k) {
      if (mass[k] > 0) {
        hi = k;
        zeros = 0;
      } else if (++zeros > gap) {
        break;
      }
    }
    i = hi + 1;

    double total = 0.0, first_moment = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
      total += mass[k];
      first_moment += mass[k] * mid(k);
    }
    if (total <= 0.0) continue;
    double location = first_moment / total;
    double confidence = step;

    // Chain roots sit on -Im k = K ln(|k| + 1) - c. The mean depth in the
    // annulus is biased by c / ln R, so K is taken as the slope of depth
    // against ln(|k| + 1) across shells. The first fit uses the annulus;
    // the window then follows the fitted line inwards to R/4 and R/8, which
    // widens the lever arm.
    const double half_width = 0.5 * (h[hi] - h[lo]) + step;
    LineFit fit = fit_shells(report, inner + 1, top, [&](std::size_t, double) { return std::pair{lo, hi}; });
    for (double frac : {0.25, 0.125}) {
      if (!fit.ok) break;
      std::size_t first = 1;
      while (first <= top && radii[first - 1] < frac * R) ++first;
      const LineFit prev = fit;
      const LineFit wide = fit_shells(report, first, top, [&](std::size_t, double rho) {
        const double centre = (prev.slope * std::log1p(rho) - prev.offset) / std::log1p(rho);
        return window_bins(h, centre - half_width, centre + half_width);
      });
      if (wide.ok) fit = wide;
    }
    if (fit.ok) {
      location = fit.slope;
      confidence = 2.0 * fit.se + step;
    }

    const double raw = kPi * location * total / (R - radii[inner]);
    const int weight = static_cast<int>(std::lround(raw));
    if (weight >= 1) est.jumps.push_back(KJump{location, confidence, raw, weight});
  }
  return est;
}

ChainTable chain_assignment(const ResonanceSet& rs, const KMultiset& k, double rho_min) {
  ChainTable t;
  for (double v : k.values)
    if (t.chains.empty() || std::abs(v - t.chains.back()) > 1e-9 * std::abs(v)) t.chains.push_back(v);
  t.members.assign(t.chains.size(), 0);
  t.band.assign(t.chains.size(), 0.0);

  for (const auto& r : rs.roots) {
    if (std::abs(r.k) < rho_min) continue;
    ChainRow row{r.k, -1, 0.0};
    if (r.k.imag() < 0.0 && !t.chains.empty()) {
      const double ln = std::log1p(std::abs(r.k.real()));
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < t.chains.size(); ++j) {
        const double res = std::abs(r.k.imag() + t.chains[j] * ln);
        if (res < best) {
          best = res;
          row.chain = static_cast<int>(j);
        }
      }
      row.residual = best;
      const auto j = static_cast<std::size_t>(row.chain);
      t.members[j] += r.multiplicity;
      t.band[j] = std::max(t.band[j], best);
    }
    t.rows.push_back(row);
  }
  return t;
}

std::string config_hash(const Configuration& c) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&h](double x) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &x, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  };
  feed(c.alpha().real());
  feed(c.alpha().imag());
  for (const auto& p : c.points())
    for (double x : p) feed(x);
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace pointres
