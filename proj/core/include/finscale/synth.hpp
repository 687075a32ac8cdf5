#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "finscale/dist.hpp"
#include "finscale/series.hpp"

namespace finscale {

enum class Model { kGaussianIid, kStudentTIid, kFbm, kVolCluster, kSde };

struct SyntheticSpec {
  Model model = Model::kStudentTIid;
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  double nu = 3.0;       // t tails
  double hurst = 0.5;    // fbm
  double phi = 0.98;     // vol_cluster log-vol AR(1) persistence
  double sigma_v = 0.2;  // vol_cluster log-vol innovation scale
  int sde_case = 3;      // sde drift/diffusion pair
  double D = 1.0;        // sde noise variance scale
  double lambda = 0.5;        // sde case-2 drift strength
  double dt = 0.02;           // sde step
  std::size_t burn_in = 10000;  // sde steps discarded before recording
};

// Iid draws: unit-variance Gaussian or unit-variance Student-t(nu).
ReturnSeries gen_iid(const SyntheticSpec& spec);

// Stochastic-volatility returns x_t = exp(h_t/2) z_t with AR(1) log-volatility
// h started from its stationary law; output standardized to zero mean, unit
// variance. Signs are unaffected by the volatility factor.
ReturnSeries gen_vol_cluster(const SyntheticSpec& spec);

// Fractional Brownian motion positions B(1..n) with Var B(t) = t^{2H}:
// circulant embedding of the fGn covariance (exact), Hosking fallback if the
// embedding is not nonnegative definite.
std::vector<double> gen_fbm(double hurst, std::size_t n, std::uint64_t seed);

// O(n^2) Durbin-Levinson sampler of the same process; used as the fallback
// path and as a cross-check of the spectral sampler.
std::vector<double> gen_fbm_hosking(double hurst, std::size_t n, std::uint64_t seed);

// fGn autocovariance at lag k for unit-variance increments.
double fgn_autocovariance(double hurst, std::size_t k);

struct SdeOptions {
  double x0 = 0.0;
  double bound = 50.0;      // reject steps leaving [-bound, bound]
  std::size_t burn_in = 0;  // steps discarded before recording
};

// Euler-Maruyama path of dx = f dt + g sqrt(D dt) xi, recording x after each
// of n post-burn-in steps. Steps that would leave the admissible interval are
// rejected (the state is kept); a non-finite state raises StabilityError.
std::vector<double> simulate_sde(const DriftDiffusion& dd, double dt, std::size_t n,
                                 std::uint64_t seed, const SdeOptions& opts = {});

// Dispatch on spec.model producing a return series (fbm/sde paths are
// differenced so every model yields increments).
ReturnSeries gen_returns(const SyntheticSpec& spec);

}  // namespace finscale
