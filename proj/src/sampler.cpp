#include "pointres/sampler.hpp"

#include <cmath>
#include <numbers>

#include "pointres/error.hpp"

namespace pointres {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53u;
constexpr std::uint32_t kMulB = 0xCD9E8D57u;
constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeylA;
      key[1] += kWeylB;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMulA, ctr[0], hi0, lo0);
    mulhilo(kMulB, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t position)
    : seed_(seed), stream_id_(stream_id), position_(position) {}

std::uint64_t RandomStream::next_u64() {
  // Draw 2b and 2b+1 share one block; the stream id fills the upper counter words.
  const std::uint64_t block = position_ >> 1;
  const auto out = philox4x32_10(
      {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
       static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)},
      {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
  const bool second = (position_ & 1u) != 0;
  ++position_;
  return second ? (static_cast<std::uint64_t>(out[3]) << 32 | out[2])
                : (static_cast<std::uint64_t>(out[1]) << 32 | out[0]);
}

double RandomStream::next_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::pair<double, double> RandomStream::next_normal_pair() {
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  return {rad * std::cos(th), rad * std::sin(th)};
}

void SamplerConfig::validate() const {
  if (kind == SamplerKind::UniformBall) {
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be positive");
    return;
  }
  if (mixing.empty()) throw Error(ErrorCode::InvalidArgument, "mixing law is empty");
  double total = 0.0;
  for (const auto& [count, p] : mixing) {
    if (!(p >= 0.0)) throw Error(ErrorCode::InvalidArgument, "mixing probabilities must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "mixing probabilities must sum to 1");
}

std::vector<std::pair<std::size_t, double>> three_point_mixing() {
  return {{0, 1.0 / 3.0}, {1, 1.0 / 3.0}, {2, 1.0 / 3.0}};
}

Vec3 draw_ball_point(RandomStream& rng, double r) {
  const double rad = r * std::cbrt(rng.next_uniform());
  const double cz = 2.0 * rng.next_uniform() - 1.0;
  const double phi = 2.0 * std::numbers::pi * rng.next_uniform();
  const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
  return {rad * sz * std::cos(phi), rad * sz * std::sin(phi), rad * cz};
}

Vec3 draw_normal_point(RandomStream& rng) {
  const auto [a, b] = rng.next_normal_pair();
  const auto [c, d] = rng.next_normal_pair();
  (void)d;
  return {a, b, c};
}

SampleSet sample_uniform_ball(const SamplerConfig& cfg) {
  if (cfg.kind != SamplerKind::UniformBall)
    throw Error(ErrorCode::InvalidArgument, "sampler kind is not uniform_ball");
  cfg.validate();
  RandomStream rng(cfg.seed, cfg.stream_id);
  SampleSet s;
  s.kind = SamplerKind::UniformBall;
  s.r = cfg.r;
  s.seed_used = cfg.seed;
  s.stream_id = cfg.stream_id;
  s.points.reserve(cfg.m);
  for (std::size_t i = 0; i < cfg.m; ++i) s.points.push_back(draw_ball_point(rng, cfg.r));
  s.next_position = rng.position();
  return s;
}

SampleSet sample_mixed_binomial(const SamplerConfig& cfg) {
  if (cfg.kind != SamplerKind::MixedBinomial)
    throw Error(ErrorCode::InvalidArgument, "sampler kind is not mixed_binomial");
  cfg.validate();
  RandomStream rng(cfg.seed, cfg.stream_id);
  const double u = rng.next_uniform();
  std::size_t count = cfg.mixing.back().first;
  double acc = 0.0;
  for (const auto& [n, p] : cfg.mixing) {
    acc += p;
    if (u < acc) {
      count = n;
      break;
    }
  }
  SampleSet s;
  s.kind = SamplerKind::MixedBinomial;
  s.seed_used = cfg.seed;
  s.stream_id = cfg.stream_id;
  for (std::size_t i = 0; i < count; ++i) s.points.push_back(draw_normal_point(rng));
  s.next_position = rng.position();
  return s;
}

SampleSet sample(const SamplerConfig& cfg) {
  return cfg.kind == SamplerKind::UniformBall ? sample_uniform_ball(cfg) : sample_mixed_binomial(cfg);
}

Configuration to_configuration(const SampleSet& s, Complex alpha) {
  std::vector<Vec3> pts = s.points;
  RandomStream rng(s.seed_used, s.stream_id, s.next_position);

  double max_coord = 1.0;
  for (const auto& p : pts)
    for (double x : p) max_coord = std::max(max_coord, std::abs(x));

  for (std::size_t j = 1; j < pts.size(); ++j) {
    bool clash = true;
    while (clash) {
      clash = false;
      for (std::size_t i = 0; i < j && !clash; ++i)
        clash = distance(pts[i], pts[j]) < Configuration::kDefaultDedupRelTol * max_coord;
      if (clash) pts[j] = s.kind == SamplerKind::UniformBall ? draw_ball_point(rng, s.r) : draw_normal_point(rng);
    }
  }
  return Configuration::create(std::move(pts), alpha);
}

}  // namespace pointres
