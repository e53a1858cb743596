#include "pointres/exppoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "pointres/error.hpp"

namespace pointres {

namespace {

constexpr double kPi = std::numbers::pi;

int permutation_sign(const std::vector<int>& perm) {
  std::vector<char> seen(perm.size(), 0);
  int sign = 1;
  for (std::size_t start = 0; start < perm.size(); ++start) {
    if (seen[start]) continue;
    std::size_t len = 0;
    for (std::size_t j = start; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
      seen[j] = 1;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

Complex horner(const std::vector<Complex>& coeffs, Complex z) {
  Complex acc{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace

std::vector<Complex> binomial_coeffs(Complex alpha, int k) {
  // Repeated multiplication by (i z + c) keeps the coefficients exact in
  // the sense of a single rounding chain.
  const Complex c = -4.0 * kPi * alpha;
  const Complex i{0.0, 1.0};
  std::vector<Complex> p{Complex{1.0, 0.0}};
  for (int step = 0; step < k; ++step) {
    std::vector<Complex> next(p.size() + 1, Complex{0.0, 0.0});
    for (std::size_t m = 0; m < p.size(); ++m) {
      next[m] += c * p[m];
      next[m + 1] += i * p[m];
    }
    p.swap(next);
  }
  return p;
}

std::vector<ExpMonomial> expand_determinant(const Configuration& c, const ExpPolyOptions& opt) {
  const std::size_t n = c.size();
  if (n == 0) throw Error(ErrorCode::EmptyConfiguration, "expand_determinant needs N >= 1");
  if (n > opt.n_max) {
    throw Error(ErrorCode::TooLarge, "N = " + std::to_string(n) + " exceeds n_max = " +
                                         std::to_string(opt.n_max) + " (raise --n-max)");
  }
  const auto& d = c.distances();

  std::vector<std::vector<Complex>> powers(n + 1);
  for (std::size_t k = 0; k <= n; ++k) powers[k] = binomial_coeffs(c.alpha(), static_cast<int>(k));

  std::vector<ExpMonomial> out;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    double freq = 0.0;
    double amplitude = permutation_sign(perm);
    std::size_t fixed = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto sj = static_cast<std::size_t>(perm[j]);
      if (sj == j) {
        ++fixed;
      } else {
        freq += d(j, sj);
        amplitude /= d(j, sj);
      }
    }
    ExpMonomial m{freq, powers[fixed]};
    for (auto& coef : m.coeffs) coef *= amplitude;
    out.push_back(std::move(m));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

CanonicalExpPoly canonicalize(std::span<const ExpMonomial> monomials, std::size_t n_points,
                              Complex alpha, const ExpPolyOptions& opt) {
  if (monomials.empty()) throw Error(ErrorCode::InvalidArgument, "canonicalize needs monomials");

  std::vector<std::size_t> order(monomials.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return monomials[a].frequency < monomials[b].frequency;
  });

  CanonicalExpPoly out;
  out.n_points = n_points;
  out.alpha = alpha;

  std::size_t g = 0;
  while (g < order.size()) {
    const double anchor = monomials[order[g]].frequency;
    const double tol = opt.freq_group_tol * (1.0 + std::abs(anchor));
    std::size_t end = g;
    double freq_sum = 0.0;
    std::vector<Complex> sum;
    std::vector<double> pre_max;  // per power of z, over the summands
    while (end < order.size() && monomials[order[end]].frequency - anchor <= tol) {
      const auto& m = monomials[order[end]];
      if (m.coeffs.size() > sum.size()) {
        sum.resize(m.coeffs.size(), Complex{0.0, 0.0});
        pre_max.resize(m.coeffs.size(), 0.0);
      }
      for (std::size_t k = 0; k < m.coeffs.size(); ++k) {
        sum[k] += m.coeffs[k];
        pre_max[k] = std::max(pre_max[k], std::abs(m.coeffs[k]));
      }
      freq_sum += m.frequency;
      ++end;
    }
    const std::size_t members = end - g;
    g = end;

    // A coefficient cancels when the sum is negligible against its own summands.
    for (std::size_t k = 0; k < sum.size(); ++k)
      if (std::abs(sum[k]) <= opt.cancel_tol * pre_max[k]) sum[k] = Complex{0.0, 0.0};
    while (!sum.empty() && sum.back() == Complex{0.0, 0.0}) sum.pop_back();
    if (sum.empty()) continue;

    out.terms.push_back(ExpTerm{members == 1 ? anchor : freq_sum / static_cast<double>(members),
                                std::move(sum)});
  }

  if (out.terms.empty() || out.terms.front().freq != 0.0)
    throw Error(ErrorCode::FullCancellation, "zero-frequency term missing");
  if (n_points >= 2 && out.terms.size() < 2)
    throw Error(ErrorCode::FullCancellation, "all positive frequencies cancelled");
  return out;
}

CanonicalExpPoly canonical_form(const Configuration& c, const ExpPolyOptions& opt) {
  if (c.empty()) {
    CanonicalExpPoly p;
    p.alpha = c.alpha();
    p.terms.push_back(ExpTerm{0.0, {Complex{1.0, 0.0}}});
    return p;
  }
  const auto monomials = expand_determinant(c, opt);
  return canonicalize(monomials, c.size(), c.alpha(), opt);
}

Complex eval_canonical(const CanonicalExpPoly& p, Complex z) {
  const Complex i{0.0, 1.0};
  Complex total{0.0, 0.0};
  for (const auto& t : p.terms) total += horner(t.coeffs, z) * std::exp(i * t.freq * z);
  return total;
}

DistributionDiagram distribution_diagram(const CanonicalExpPoly& p) {
  DistributionDiagram diag;
  if (p.terms.empty()) return diag;

  const double collinear_tol = 1e-9 * (1.0 + p.b_max()) * (1.0 + static_cast<double>(p.n_points));
  auto cross = [](const DiagramVertex& o, const DiagramVertex& a, const DiagramVertex& b) {
    return (a.freq - o.freq) * (b.degree - o.degree) - (a.degree - o.degree) * (b.freq - o.freq);
  };

  // Monotone chain, upper side only; terms are already sorted by frequency.
  for (const auto& t : p.terms) {
    const DiagramVertex v{t.freq, t.degree()};
    while (diag.hull.size() >= 2 &&
           cross(diag.hull[diag.hull.size() - 2], diag.hull.back(), v) >= -collinear_tol) {
      diag.hull.pop_back();
    }
    diag.hull.push_back(v);
  }
  return diag;
}

KMultiset k_multiset(const DistributionDiagram& diag, double diam) {
  KMultiset k;
  if (diag.hull.empty() || diag.hull.front().degree <= 1) return k;

  for (std::size_t s = 0; s + 1 < diag.hull.size(); ++s) {
    const auto& a = diag.hull[s];
    const auto& b = diag.hull[s + 1];
    const int drop = a.degree - b.degree;
    const double value = drop / (b.freq - a.freq);
    k.values.insert(k.values.end(), static_cast<std::size_t>(std::max(drop, 0)), value);
  }
  std::sort(k.values.begin(), k.values.end());

  if (k.values.empty() || !(diam > 0.0) ||
      std::abs(k.values.front() - 1.0 / diam) > 1e-9 * (1.0 / diam)) {
    throw Error(ErrorCode::DiamMismatch, "K_1 does not match 1/diam");
  }
  return k;
}

bool is_weyl(const CanonicalExpPoly& p, const SizeResult& v) {
  return std::abs(p.b_max() - v.value) <= 1e-9 * std::max(1.0, v.value);
}

double symbolic_density(const CanonicalExpPoly& p) {
  if (p.terms.size() < 2)
    throw Error(ErrorCode::DegenerateSingleTerm, "only the zero frequency is present");
  return p.b_max() / kPi;
}

Complex chain_prediction(const KMultiset& k, std::size_t j, long m) {
  if (j >= k.size()) throw Error(ErrorCode::IndexOutOfRange, "chain index out of range");
  const double kj = k.values[j];
  const double x = kPi * kj * static_cast<double>(2 * m + 1);
  return {x, -kj * std::log(std::abs(x))};
}

}  // namespace pointres
