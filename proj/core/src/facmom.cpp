#include "finscale/facmom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finscale/error.hpp"

namespace finscale {
namespace {

double falling_factorial(std::uint32_t n, int q) {
  if (static_cast<int>(n) < q) return 0.0;
  double acc = 1.0;
  for (int j = 0; j < q; ++j) acc *= static_cast<double>(n - static_cast<std::uint32_t>(j));
  return acc;
}

// Global per-window species mean over all events.
double window_mean(const SignEventSet& ev, const std::vector<std::uint16_t>& counts) {
  double total = 0.0;
  for (std::uint16_t c : counts) total += c;
  return total / static_cast<double>(ev.n_events);
}

struct RatioStats {
  double mean = 0.0;
  double se = 0.0;
};

RatioStats event_ratio_stats(const std::vector<double>& per_event) {
  const std::size_t n = per_event.size();
  RatioStats rs;
  double acc = 0.0;
  for (double v : per_event) acc += v;
  rs.mean = acc / static_cast<double>(n);
  if (n < 2) return rs;
  double ss = 0.0;
  for (double v : per_event) ss += (v - rs.mean) * (v - rs.mean);
  rs.se = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  return rs;
}

}  // namespace

const char* sign_kind_name(SignKind k) {
  switch (k) {
    case SignKind::kPP: return "pp";
    case SignKind::kMM: return "mm";
    case SignKind::kPM: return "pm";
    case SignKind::kAll: return "plain";
  }
  return "?";
}

SignEventSet build_events(const ReturnSeries& rs, std::size_t window_len, std::size_t n_bins,
                          std::size_t offset) {
  if (window_len == 0 || n_bins == 0) throw ParamError("window and bin counts must be >= 1");
  if (window_len % n_bins != 0)
    throw ParamError("bin count " + std::to_string(n_bins) + " must divide window length " +
                     std::to_string(window_len));
  if (window_len > 65535) throw ParamError("window length too large for 16-bit bin counts");
  if (offset >= window_len) throw ParamError("offset must be smaller than the window length");
  const std::size_t n = rs.values.size();
  if (offset >= n || (n - offset) < window_len)
    throw DataError("too few returns for one window of " + std::to_string(window_len) +
                    " at offset " + std::to_string(offset));

  SignEventSet ev;
  ev.window_len = window_len;
  ev.n_bins = n_bins;
  ev.offset = offset;
  ev.n_events = (n - offset) / window_len;
  ev.pos.assign(ev.n_events * n_bins, 0);
  ev.neg.assign(ev.n_events * n_bins, 0);

  const std::size_t bin_len = window_len / n_bins;
  for (std::size_t e = 0; e < ev.n_events; ++e) {
    const std::size_t base = offset + e * window_len;
    for (std::size_t k = 0; k < n_bins; ++k) {
      std::uint16_t np = 0, nm = 0;
      const std::size_t start = base + k * bin_len;
      for (std::size_t i = start; i < start + bin_len; ++i) {
        const double v = rs.values[i];
        if (v > 0.0)
          ++np;
        else if (v < 0.0)
          ++nm;
      }
      ev.pos[e * n_bins + k] = np;
      ev.neg[e * n_bins + k] = nm;
    }
  }
  return ev;
}

MomentEstimate factorial_moment(const SignEventSet& ev, int q, SignKind kind) {
  if (q < 0) throw ParamError("moment order must be >= 0");
  if (kind == SignKind::kPM && q != 2)
    throw ParamError("the +- cross moment is defined for order 2 only");
  if (ev.n_events == 0) throw DataError("no events to average over");

  const double nb = static_cast<double>(ev.n_bins);
  std::vector<double> per_event(ev.n_events);

  if (kind == SignKind::kPM) {
    const double mp = window_mean(ev, ev.pos);
    const double mm = window_mean(ev, ev.neg);
    const double denom = mp * mm / (nb * nb);
    if (!(denom > 0.0)) throw DataError("a sign species is absent; cross moment undefined");
    for (std::size_t e = 0; e < ev.n_events; ++e) {
      double s = 0.0;
      for (std::size_t k = 0; k < ev.n_bins; ++k)
        s += static_cast<double>(ev.pos[e * ev.n_bins + k]) *
             static_cast<double>(ev.neg[e * ev.n_bins + k]);
      per_event[e] = s / nb / denom;
    }
  } else {
    const std::vector<std::uint16_t>* a = nullptr;
    const std::vector<std::uint16_t>* b = nullptr;  // kAll sums two species
    switch (kind) {
      case SignKind::kPP: a = &ev.pos; break;
      case SignKind::kMM: a = &ev.neg; break;
      case SignKind::kAll: a = &ev.pos; b = &ev.neg; break;
      case SignKind::kPM: break;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < a->size(); ++i)
      total += (*a)[i] + (b ? (*b)[i] : 0);
    const double mean_n = total / static_cast<double>(ev.n_events);
    const double denom = std::pow(mean_n / nb, q);
    if (!(denom > 0.0) && q > 0) throw DataError("sign species is absent; moment undefined");
    for (std::size_t e = 0; e < ev.n_events; ++e) {
      double s = 0.0;
      for (std::size_t k = 0; k < ev.n_bins; ++k) {
        const std::uint32_t nk = static_cast<std::uint32_t>((*a)[e * ev.n_bins + k]) +
                                 (b ? (*b)[e * ev.n_bins + k] : 0);
        s += falling_factorial(nk, q);
      }
      per_event[e] = s / nb / (q > 0 ? denom : 1.0);
    }
  }

  const RatioStats st = event_ratio_stats(per_event);
  return {st.mean, st.se};
}

FacMomTable facmom_scan(const ReturnSeries& rs, std::size_t window_len,
                        const std::vector<std::size_t>& bins,
                        const std::vector<std::size_t>& offsets, const std::vector<SignKind>& kinds,
                        const std::vector<int>& qs) {
  if (bins.empty() || kinds.empty() || qs.empty())
    throw ParamError("facmom scan needs at least one bin count, kind, and order");

  FacMomTable table;
  table.window_len = window_len;

  for (std::size_t nb : bins) {
    const SignEventSet ev0 = build_events(rs, window_len, nb, 0);
    if (nb == bins.front()) {
      table.n_events = ev0.n_events;
      double tp = 0.0, tn = 0.0;
      for (std::uint16_t c : ev0.pos) tp += c;
      for (std::uint16_t c : ev0.neg) tn += c;
      table.mean_pos = tp / static_cast<double>(ev0.n_events);
      table.mean_neg = tn / static_cast<double>(ev0.n_events);
    }
    std::vector<SignEventSet> shifted;
    shifted.reserve(offsets.size());
    for (std::size_t off : offsets) shifted.push_back(build_events(rs, window_len, nb, off));

    for (SignKind kind : kinds) {
      for (int q : qs) {
        if (kind == SignKind::kPM && q != 2) continue;
        FacMomRow row;
        row.kind = kind;
        row.q = q;
        row.n_bins = nb;
        const MomentEstimate central = factorial_moment(ev0, q, kind);
        row.value = central.value;
        row.stat_err = central.stat_err;
        double sys = 0.0;
        for (const SignEventSet& ev : shifted) {
          const MomentEstimate alt = factorial_moment(ev, q, kind);
          sys = std::max(sys, std::fabs(alt.value - central.value));
        }
        row.sys_err = sys;
        table.rows.push_back(row);
      }
    }
  }
  return table;
}

SlopeFit intermittency_slope(const FacMomTable& table, SignKind kind, int q) {
  std::vector<double> xs, ys;
  for (const FacMomRow& row : table.rows) {
    if (row.kind != kind || row.q != q || !(row.value > 0.0)) continue;
    xs.push_back(std::log(static_cast<double>(row.n_bins)));
    ys.push_back(std::log(row.value));
  }
  const std::size_t n = xs.size();
  if (n < 3) throw FitError("intermittency slope needs >= 3 usable moment points");
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) sx += xs[i], sy += ys[i];
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("bin counts are degenerate; slope undefined");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - my - fit.slope * (xs[i] - mx);
    ss += e * e;
  }
  fit.stderr_ = n > 2 ? std::sqrt(ss / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

MultiplicityDistribution multiplicity_distribution(const SignEventSet& ev, SignKind species) {
  if (species == SignKind::kPM)
    throw ParamError("multiplicity distribution is per species; the cross kind has none");
  if (ev.n_events == 0) throw DataError("no events to average over");
  std::vector<double> counts(ev.window_len + 1, 0.0);
  for (std::size_t e = 0; e < ev.n_events; ++e) {
    std::uint32_t n = 0;
    for (std::size_t k = 0; k < ev.n_bins; ++k) {
      if (species == SignKind::kPP || species == SignKind::kAll) n += ev.pos[e * ev.n_bins + k];
      if (species == SignKind::kMM || species == SignKind::kAll) n += ev.neg[e * ev.n_bins + k];
    }
    counts[n] += 1.0;
  }
  MultiplicityDistribution dist;
  dist.probs.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    dist.probs[i] = counts[i] / static_cast<double>(ev.n_events);
  while (dist.probs.size() > 1 && dist.probs.back() == 0.0) dist.probs.pop_back();
  return dist;
}

std::vector<double> moments_from_distribution(const MultiplicityDistribution& dist, int max_q) {
  if (max_q < 1) throw ParamError("moment order must be >= 1");
  double norm = 0.0;
  for (double p : dist.probs) norm += p;
  if (std::fabs(norm - 1.0) > 1e-12)
    throw ParamError("multiplicity distribution does not sum to 1");
  double mean_n = 0.0;
  for (std::size_t n = 0; n < dist.probs.size(); ++n)
    mean_n += static_cast<double>(n) * dist.probs[n];
  if (!(mean_n > 0.0)) throw DataError("distribution has zero mean; moments undefined");
  std::vector<double> out(static_cast<std::size_t>(max_q));
  for (int q = 1; q <= max_q; ++q) {
    double acc = 0.0;
    for (std::size_t n = 0; n < dist.probs.size(); ++n)
      acc += dist.probs[n] * falling_factorial(static_cast<std::uint32_t>(n), q);
    out[static_cast<std::size_t>(q - 1)] = acc / std::pow(mean_n, q);
  }
  return out;
}

double generating_function(const MultiplicityDistribution& dist, double z) {
  double acc = 0.0;
  double w = 1.0;  // (1+z)^n
  for (double p : dist.probs) {
    acc += p * w;
    w *= 1.0 + z;
  }
  return acc;
}

std::vector<double> cumulants_from_factorial(const std::vector<double>& f_moments, double mean_n) {
  if (!(mean_n > 0.0)) throw ParamError("species mean must be positive");
  const std::size_t q_max = f_moments.size() + 1;  // moments run 2..q_max
  // Power-series coefficients of G(z): a_q = <n>^q F_q / q!, a_1 = <n>.
  std::vector<double> a(q_max + 1, 0.0), b(q_max + 1, 0.0);
  a[0] = 1.0;
  a[1] = mean_n;
  double fact = 1.0;
  for (std::size_t q = 2; q <= q_max; ++q) {
    fact *= static_cast<double>(q);
    a[q] = std::pow(mean_n, static_cast<double>(q)) * f_moments[q - 2] / fact;
  }
  // Formal log: b_q = a_q - (1/q) sum_{j=1}^{q-1} j b_j a_{q-j}.
  b[1] = a[1];
  for (std::size_t q = 2; q <= q_max; ++q) {
    double s = 0.0;
    for (std::size_t j = 1; j < q; ++j) s += static_cast<double>(j) * b[j] * a[q - j];
    b[q] = a[q] - s / static_cast<double>(q);
  }
  std::vector<double> out(q_max - 1);
  fact = 1.0;
  for (std::size_t q = 2; q <= q_max; ++q) {
    fact *= static_cast<double>(q);
    out[q - 2] = fact * b[q] / std::pow(mean_n, static_cast<double>(q));
  }
  return out;
}

std::vector<double> factorial_from_cumulants(const std::vector<double>& cumulants, double mean_n) {
  if (!(mean_n > 0.0)) throw ParamError("species mean must be positive");
  const std::size_t q_max = cumulants.size() + 1;
  std::vector<double> a(q_max + 1, 0.0), b(q_max + 1, 0.0);
  b[1] = mean_n;
  for (std::size_t q = 2; q <= q_max; ++q) {
    double fact = 1.0;
    for (std::size_t j = 2; j <= q; ++j) fact *= static_cast<double>(j);
    b[q] = std::pow(mean_n, static_cast<double>(q)) * cumulants[q - 2] / fact;
  }
  a[0] = 1.0;
  // Formal exp: a_q = (1/q) sum_{j=1}^{q} j b_j a_{q-j}.
  for (std::size_t q = 1; q <= q_max; ++q) {
    double s = 0.0;
    for (std::size_t j = 1; j <= q; ++j) s += static_cast<double>(j) * b[j] * a[q - j];
    a[q] = s / static_cast<double>(q);
  }
  std::vector<double> out(q_max - 1);
  for (std::size_t q = 2; q <= q_max; ++q) {
    double fact = 1.0;
    for (std::size_t j = 2; j <= q; ++j) fact *= static_cast<double>(j);
    out[q - 2] = fact * a[q] / std::pow(mean_n, static_cast<double>(q));
  }
  return out;
}

}  // namespace finscale
