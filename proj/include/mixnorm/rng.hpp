#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace mixnorm {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the i-th draw is a pure function of (key, i), so
/// a stream can be re-derived anywhere from its key. Streams are split off a
/// master seed by index, which keeps serial and parallel campaigns identical.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t key) : key_(mix64(key ^ 0x6A09E667F3BCC909ULL)) {}

  static constexpr CounterRng stream(std::uint64_t master_seed, std::uint64_t index) {
    return CounterRng(mix64(master_seed) ^ mix64(index + 0x9E3779B97F4A7C15ULL));
  }

  constexpr std::uint64_t next() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform on [0, 1).
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  constexpr double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on (0, 1].
  constexpr double uniform_open_closed() { return 1.0 - uniform(); }

  /// Uniform integer in [lo, hi].
  constexpr std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<unsigned __int128>(hi - lo + 1);
    return lo + static_cast<std::int64_t>((static_cast<unsigned __int128>(next()) * span) >> 64);
  }

  constexpr double sign() { return (next() >> 63) ? 1.0 : -1.0; }

  /// Uniform on the closed unit disc.
  std::complex<double> unit_disc() {
    const double r = std::sqrt(uniform());
    const double phi = 2.0 * std::numbers::pi * uniform();
    return std::polar(r, phi);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mixnorm
