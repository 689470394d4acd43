#ifndef KINEL_RNG_HPP
#define KINEL_RNG_HPP

#include <cmath>
#include <cstdint>

namespace kinel {

//! Small splitmix64-based generator. Streams are derived from
//! (seed, stream index), so sampling is independent of scheduling and of the
//! standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed ^ 0x9E3779B97F4A7C15ull)) {}

  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix(seed) ^ mix(index + 0x1234567887654321ull));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  //! Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  //! Uniform in (0, 1]; safe as a log argument.
  double uniform_open() { return 1.0 - uniform(); }

  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  //! Uniform direction on the unit sphere.
  void isotropic_direction(double& x, double& y, double& z) {
    const double c = 2.0 * uniform() - 1.0;
    const double s = std::sqrt(1.0 - c * c);
    const double phi = 2.0 * 3.14159265358979323846 * uniform();
    x = s * std::cos(phi);
    y = s * std::sin(phi);
    z = c;
  }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace kinel

#endif
