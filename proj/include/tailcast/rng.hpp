#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace tailcast {

/// Counter-based random stream (Philox4x32-10) keyed by a master seed and a
/// stream index. Two streams with the same key produce the same sequence no
/// matter which thread draws from them, which is what makes replicated
/// experiments independent of the worker count.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform();
  double normal();
  double student_t(double nu);
  /// Gamma with the given shape and unit scale.
  double gamma(double shape);

  /// Independent child stream; the child index is mixed with this stream's
  /// index so nested loops (grid point, replication) get distinct keys.
  RngStream substream(std::uint64_t child) const;

  std::uint64_t master_seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;  // 32-bit words consumed from block_
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace tailcast
