#pragma once

#include <cstdint>

namespace finscale {

// Deterministic xoshiro256** stream seeded via splitmix64.  Every stochastic
// routine in the library draws from this generator so that a (config, seed)
// pair reproduces results bit for bit on a given build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();

  // Standard normal via the Box-Muller transform (pairs cached).
  double normal();

  // Gamma(shape alpha, unit scale), Marsaglia-Tsang squeeze method.
  double gamma(double alpha);

  double chi_square(double dof);

  // Student-t with dof nu: N(0,1) / sqrt(chi2(nu)/nu).
  double student_t(double nu);

  // Student-t rescaled by sqrt((nu-2)/nu) so the population variance is 1.
  double student_t_unit(double nu);

 private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace finscale
