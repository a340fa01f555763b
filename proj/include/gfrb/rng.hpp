#pragma once

// Portable seeded random numbers.
//
// Generator: std::mt19937_64, whose output sequence is fixed by the C++
// standard. Each array in a generated problem gets its own substream,
// seeded with splitmix64(seed) xor splitmix64(stream_id + 1). Uniforms use the
// top 53 bits of each draw; normals use the Box-Muller transform (both
// outputs consumed, cosine branch first). None of this depends on the
// library's unspecified std::*_distribution implementations.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace gfrb {

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal N(0, 1).
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  Eigen::VectorXd normal_vector(Eigen::Index n, double stddev = 1.0);
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, double stddev = 1.0);
  /// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<Eigen::Index> sample_without_replacement(Eigen::Index n, Eigen::Index k);

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gfrb
