#include <algorithm>
#include <cmath>
#include <numeric>

#include "pointres/sampler.hpp"
#include "support.hpp"

using namespace pointres;
using namespace testsupport;

namespace {

SamplerConfig ball(std::size_t m, double r, std::uint64_t seed, std::uint64_t stream = 0) {
  SamplerConfig c;
  c.kind = SamplerKind::UniformBall;
  c.m = m;
  c.r = r;
  c.seed = seed;
  c.stream_id = stream;
  return c;
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(philox4x32_10(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are positional and reproducible") {
  RandomStream a(42, 3), b(42, 3);
  std::vector<std::uint64_t> xs;
  for (int i = 0; i < 100; ++i) {
    xs.push_back(a.next_u64());
    CHECK(xs.back() == b.next_u64());
  }
  RandomStream c(42, 3, 37);
  CHECK(c.next_u64() == xs[37]);
  RandomStream other(42, 4);
  CHECK(other.next_u64() != xs[0]);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("distinct streams are uncorrelated") {
  RandomStream a(9, 0), b(9, 1);
  const int n = 100000;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.next_uniform(), y = b.next_uniform();
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  const double cov = sab / n - sa / n * sb / n;
  const double corr = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
  CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("uniform ball sampler") {
  CHECK(sample_uniform_ball(ball(0, 1.0, 1)).points.empty());

  const std::size_t n = 1000000;
  const auto s = sample_uniform_ball(ball(n, 1.0, 2));
  REQUIRE(s.points.size() == n);
  double cube = 0.0;
  std::array<double, 3> mean{};
  std::vector<double> radii;
  radii.reserve(n);
  for (const auto& p : s.points) {
    const double r = norm(p);
    CHECK_LE(r, 1.0);
    cube += r * r * r;
    for (int k = 0; k < 3; ++k) mean[k] += p[k];
    radii.push_back(r);
  }
  CHECK(std::abs(cube / n - 0.5) < 0.002);
  const double sigma = std::sqrt(0.2 / n);  // each coordinate has variance r^2 / 5
  for (double m : mean) CHECK(std::abs(m / n) < 4.0 * sigma);

  std::sort(radii.begin(), radii.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = radii[i] * radii[i] * radii[i];
    ks = std::max({ks, (i + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  CHECK(ks < 0.005);

  const auto scaled = sample_uniform_ball(ball(1000, 2.5, 3));
  for (const auto& p : scaled.points) CHECK_LE(norm(p), 2.5);
}

TEST_CASE("pair distance moments in the unit ball") {
  RandomStream rng(5, 0);
  const int n = 1000000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double l = distance(draw_ball_point(rng, 1.0), draw_ball_point(rng, 1.0)) / 2.0;
    s1 += l;
    s2 += l * l;
    s4 += l * l * l * l;
  }
  const double m1 = s1 / n, m2 = s2 / n;
  const double se1 = std::sqrt((m2 - m1 * m1) / n);
  const double se2 = std::sqrt((s4 / n - m2 * m2) / n);
  CHECK(std::abs(m1 - 18.0 / 35.0) < 4.0 * se1);
  CHECK(std::abs(m2 - 0.3) < 4.0 * se2);
}

TEST_CASE("mixed binomial sampler") {
  SamplerConfig cfg;
  cfg.kind = SamplerKind::MixedBinomial;
  cfg.mixing = {{0, 1.0}};
  cfg.seed = 1;
  for (std::uint64_t t = 0; t < 20; ++t) {
    cfg.stream_id = t;
    CHECK(sample_mixed_binomial(cfg).points.empty());
  }

  cfg.mixing = three_point_mixing();
  const int trials = 100000;
  std::array<int, 3> counts{};
  double ell2 = 0.0;
  int pairs = 0;
  for (int t = 0; t < trials; ++t) {
    cfg.stream_id = static_cast<std::uint64_t>(t);
    const auto s = sample(cfg);
    REQUIRE(s.points.size() <= 2);
    ++counts[s.points.size()];
    if (s.points.size() == 2) {
      const double d = distance(s.points[0], s.points[1]);
      ell2 += d * d;
      ++pairs;
    }
  }
  for (int c : counts) CHECK(std::abs(c / static_cast<double>(trials) - 1.0 / 3.0) < 0.01);
  CHECK(std::abs(ell2 / pairs - 6.0) < 0.05);
}

TEST_CASE("sampler configuration validation") {
  auto bad_r = ball(3, 0.0, 1);
  CHECK(error_code_of([&] { bad_r.validate(); }) == ErrorCode::InvalidArgument);
  SamplerConfig mix;
  mix.kind = SamplerKind::MixedBinomial;
  mix.mixing = {{0, 0.5}, {1, 0.4}};
  CHECK(error_code_of([&] { mix.validate(); }) == ErrorCode::InvalidArgument);
  mix.mixing = {{0, 1.2}, {1, -0.2}};
  CHECK(error_code_of([&] { mix.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(error_code_of([&] { sample_uniform_ball(mix); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("conversion to configurations") {
  CHECK(to_configuration(sample_uniform_ball(ball(0, 1.0, 1)), 1.0).size() == 0);
  const auto s = sample_uniform_ball(ball(5, 1.0, 7));
  const auto c = to_configuration(s, 1.0);
  CHECK(c.size() == 5);
  CHECK(c.min_sep() > 0.0);
  const auto again = to_configuration(sample_uniform_ball(ball(5, 1.0, 7)), 1.0);
  CHECK(again.points() == c.points());

  SampleSet clash = s;
  clash.points[3] = clash.points[1];
  const auto fixed = to_configuration(clash, 1.0);
  CHECK(fixed.size() == 5);
  CHECK(fixed.min_sep() > 0.0);
  CHECK(fixed.point(1) == s.points[1]);
  CHECK(fixed.point(3) != s.points[1]);
  CHECK(norm(fixed.point(3)) <= 1.0);
}
