#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pointres/geometry.hpp"

namespace pointres {

/// One Leibniz term e^{i B z} p(z) of D_Y. coeffs[k] multiplies z^k.
struct ExpMonomial {
  double frequency = 0.0;
  std::vector<Complex> coeffs;
};

/// A frequency with its (nontrivial) summed polynomial.
struct ExpTerm {
  double freq = 0.0;
  std::vector<Complex> coeffs;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// D_Y in canonical form: strictly increasing frequencies, every
/// polynomial nontrivial, first term (0, (iz - 4 pi alpha)^N).
struct CanonicalExpPoly {
  std::vector<ExpTerm> terms;
  std::size_t n_points = 0;
  Complex alpha{0.0, 0.0};

  double b_max() const { return terms.empty() ? 0.0 : terms.back().freq; }
};

struct DiagramVertex {
  double freq = 0.0;
  int degree = 0;
};

/// Upper concave hull of {(B_j, deg P_j)}, starting at (0, N).
struct DistributionDiagram {
  std::vector<DiagramVertex> hull;
};

/// Chain parameters K_1 <= ... <= K_n1, repeated by multiplicity.
struct KMultiset {
  std::vector<double> values;
  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
};

struct ExpPolyOptions {
  std::size_t n_max = 8;
  double freq_group_tol = 1e-9;  // merge when |B - B'| <= tol * (1 + |B|)
  double cancel_tol = 1e-10;     // per power of z, relative to the largest summand
};

/// Coefficients of (i z - 4 pi alpha)^k, lowest power first.
std::vector<Complex> binomial_coeffs(Complex alpha, int k);

/// One monomial per permutation, in lexicographic permutation order.
/// Throws TooLarge when N > n_max, EmptyConfiguration when N = 0.
std::vector<ExpMonomial> expand_determinant(const Configuration& c,
                                            const ExpPolyOptions& opt = {});

/// Groups equal frequencies, sums, drops cancelled terms. Throws
/// FullCancellation if no positive frequency survives for N >= 2.
CanonicalExpPoly canonicalize(std::span<const ExpMonomial> monomials, std::size_t n_points,
                              Complex alpha, const ExpPolyOptions& opt = {});

/// expand_determinant followed by canonicalize; N = 0 gives the constant 1.
CanonicalExpPoly canonical_form(const Configuration& c, const ExpPolyOptions& opt = {});

Complex eval_canonical(const CanonicalExpPoly& p, Complex z);

DistributionDiagram distribution_diagram(const CanonicalExpPoly& p);

/// Each maximal hull segment (B, d) -> (B', d') contributes d - d' copies
/// of (d - d') / (B' - B). Throws DiamMismatch if K_1 != 1 / diam.
KMultiset k_multiset(const DistributionDiagram& diag, double diam);

/// Weyl-type iff the largest surviving frequency equals V(Y).
bool is_weyl(const CanonicalExpPoly& p, const SizeResult& v);

/// B_max / pi. Throws DegenerateSingleTerm when only B = 0 survives.
double symbolic_density(const CanonicalExpPoly& p);

/// pi K_j (2m+1) - i K_j ln|pi K_j (2m+1)|, j zero-based.
Complex chain_prediction(const KMultiset& k, std::size_t j, long m);

}  // namespace pointres
