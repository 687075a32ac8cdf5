#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "finscale/series.hpp"

namespace finscale {

// Which sign species a moment is taken over: positive returns, negative
// returns, the positive-negative cross term (order 2 only), or all nonzero
// returns together.
enum class SignKind { kPP, kMM, kPM, kAll };

const char* sign_kind_name(SignKind k);

// Sign counts of a return series cut into non-overlapping windows ("events")
// of window_len returns starting at `offset`; each window split into n_bins
// equal bins. Zero returns count in neither species. Trailing partial windows
// are dropped.
struct SignEventSet {
  std::size_t window_len = 0;
  std::size_t n_bins = 0;
  std::size_t offset = 0;
  std::size_t n_events = 0;
  std::vector<std::uint16_t> pos;  // [event * n_bins + bin]
  std::vector<std::uint16_t> neg;
};

SignEventSet build_events(const ReturnSeries& rs, std::size_t window_len, std::size_t n_bins,
                          std::size_t offset = 0);

struct MomentEstimate {
  double value = 0.0;
  double stat_err = 0.0;  // sd of the per-event ratio / sqrt(n_events)
};

// Normalized factorial moment of order q:
//   F_q = < sum_k n_k(n_k-1)...(n_k-q+1) / n_bins > / ( <n>/n_bins )^q
// with <n> the global per-window species mean. For kPM (q = 2 only):
//   F_2^{+-} = < sum_k n_k^+ n_k^- / n_bins > / ( <n^+><n^-> / n_bins^2 ).
MomentEstimate factorial_moment(const SignEventSet& ev, int q, SignKind kind);

struct FacMomRow {
  SignKind kind = SignKind::kAll;
  int q = 2;
  std::size_t n_bins = 1;
  double value = 0.0;
  double stat_err = 0.0;
  double sys_err = 0.0;  // max shift of the value over the offset variants
};

struct FacMomTable {
  std::size_t window_len = 0;
  std::size_t n_events = 0;
  double mean_pos = 0.0;  // per-window positive count, offset 0
  double mean_neg = 0.0;
  std::vector<FacMomRow> rows;
};

FacMomTable facmom_scan(const ReturnSeries& rs, std::size_t window_len = 200,
                        const std::vector<std::size_t>& bins = {1, 2, 4, 10, 20},
                        const std::vector<std::size_t>& offsets = {50, 100},
                        const std::vector<SignKind>& kinds = {SignKind::kPP, SignKind::kMM,
                                                              SignKind::kPM, SignKind::kAll},
                        const std::vector<int>& qs = {2});

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
};

// OLS slope of ln F_q against ln n_bins over the rows of one kind and order;
// a rising slope signals intermittent (clustered) sign structure.
SlopeFit intermittency_slope(const FacMomTable& table, SignKind kind, int q);

// Per-window multiplicity distribution P_n of one species.
struct MultiplicityDistribution {
  std::vector<double> probs;  // index n = count per window
};

MultiplicityDistribution multiplicity_distribution(const SignEventSet& ev, SignKind species);

// Normalized factorial moments F_1..F_max_q of a multiplicity distribution.
std::vector<double> moments_from_distribution(const MultiplicityDistribution& dist, int max_q);

// G(z) = sum_n P_n (1+z)^n; G(-1) recovers P_0, derivatives at 0 give the
// unnormalized factorial moments.
double generating_function(const MultiplicityDistribution& dist, double z);

// Normalized factorial cumulants K_2..K_Q from moments F_2..F_Q (F_1 = 1
// implied) via the formal power-series logarithm of G; mean_n is the species
// mean per window. K_2 = F_2 - 1, K_3 = F_3 - 3 F_2 + 2, ...
std::vector<double> cumulants_from_factorial(const std::vector<double>& f_moments, double mean_n);

// Inverse map (formal exponential): K_2..K_Q -> F_2..F_Q.
std::vector<double> factorial_from_cumulants(const std::vector<double>& cumulants, double mean_n);

}  // namespace finscale
