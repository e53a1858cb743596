#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "pointres/geometry.hpp"

namespace pointres {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based stream: draw i of stream s under seed k is a pure function
/// of (k, s, i), so streams can be generated in any order or concurrently.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t position = 0);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double next_uniform();
  /// Two independent standard normals (Box-Muller, two uniforms).
  std::pair<double, double> next_normal_pair();

  std::uint64_t position() const { return position_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t position_;
};

enum class SamplerKind { UniformBall, MixedBinomial };

struct SamplerConfig {
  SamplerKind kind = SamplerKind::UniformBall;
  std::size_t m = 0;  // sample size for the uniform ball
  double r = 1.0;     // ball radius
  std::vector<std::pair<std::size_t, double>> mixing;  // (count, probability)
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  /// Throws InvalidArgument on r <= 0 or a mixing law that does not sum to 1.
  void validate() const;
};

/// The mixing law 1/3 on each of {0, 1, 2}.
std::vector<std::pair<std::size_t, double>> three_point_mixing();

struct SampleSet {
  std::vector<Vec3> points;
  SamplerKind kind = SamplerKind::UniformBall;
  double r = 1.0;  // ball radius when kind == UniformBall
  std::uint64_t seed_used = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t next_position = 0;  // first unused draw of the stream
};

/// r * U^{1/3} * (uniform direction); three uniforms per point.
Vec3 draw_ball_point(RandomStream& rng, double r);
/// Standard normal vector; four uniforms per point.
Vec3 draw_normal_point(RandomStream& rng);

SampleSet sample_uniform_ball(const SamplerConfig& cfg);
SampleSet sample_mixed_binomial(const SamplerConfig& cfg);
SampleSet sample(const SamplerConfig& cfg);

/// Validated configuration; a point that coincides with an earlier one is
/// redrawn from the continuation of the same stream.
Configuration to_configuration(const SampleSet& s, Complex alpha);

}  // namespace pointres
