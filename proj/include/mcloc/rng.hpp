#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mcloc {

/// Purpose tags for the independent random streams of one scenario.
enum class StreamLabel : std::uint8_t { Mobility, Workload, CodeMigration, Protocol };

std::string_view to_string(StreamLabel label);

/// Seeded stream of draws. The sequence depends only on (seed, label): the
/// engine is mt19937_64 (fully specified by the standard) and the
/// real-valued draws below are computed by hand rather than through
/// std::*_distribution, whose algorithms are implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamLabel label);

  std::uint64_t seed() const { return seed_; }
  StreamLabel label() const { return label_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Exponential with the given rate (mean 1 / rate).
  double exponential(double rate);

 private:
  std::uint64_t seed_;
  StreamLabel label_;
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer, used to derive stream seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace mcloc
