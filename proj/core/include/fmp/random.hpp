#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace fmp {

/// SplitMix64 finalizer; derives independent stream seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Seedable random source with a portable draw procedure.
///
/// The engine is std::mt19937_64 (fully specified by the standard). Derived
/// draws avoid the implementation-defined std distributions so that streams
/// are identical across standard libraries:
///   uniform()      = (next() >> 11) * 2^-53, in [0, 1)
///   below(n)       = Lemire multiply-shift with rejection, in [0, n)
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  /// Uniform in the open interval (0, 1).
  double uniform_open();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n);

  /// Textual engine state (the standard mt19937_64 stream format).
  std::string state() const;
  void set_state(const std::string& state);

  friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fmp
