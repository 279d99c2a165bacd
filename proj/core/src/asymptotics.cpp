#include "henon/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "henon/quadrature.hpp"

namespace henon {

namespace {

// Least squares with column equilibration; basis columns evaluated by `fn`.
template <int K, class Fn>
std::array<double, K> lsq_fit(const std::vector<double>& x,
                              const std::vector<double>& y, Fn&& fn) {
  std::array<double, K> scale{};
  for (int k = 0; k < K; ++k) {
    double s = 0;
    for (double xi : x) {
      const double v = fn(k, xi);
      s += v * v;
    }
    scale[k] = 1.0 / std::sqrt(s / x.size());
  }
  double ata[K][K] = {};
  double atb[K] = {};
  for (std::size_t i = 0; i < x.size(); ++i) {
    double row[K];
    for (int k = 0; k < K; ++k) row[k] = fn(k, x[i]) * scale[k];
    for (int a = 0; a < K; ++a) {
      for (int b = 0; b < K; ++b) ata[a][b] += row[a] * row[b];
      atb[a] += row[a] * y[i];
    }
  }
  // Gaussian elimination with partial pivoting on the K x K system.
  for (int c = 0; c < K; ++c) {
    int piv = c;
    for (int r = c + 1; r < K; ++r)
      if (std::abs(ata[r][c]) > std::abs(ata[piv][c])) piv = r;
    std::swap(ata[c], ata[piv]);
    std::swap(atb[c], atb[piv]);
    for (int r = 0; r < K; ++r) {
      if (r == c) continue;
      const double f = ata[r][c] / ata[c][c];
      for (int k = c; k < K; ++k) ata[r][k] -= f * ata[c][k];
      atb[r] -= f * atb[c];
    }
  }
  std::array<double, K> out{};
  for (int k = 0; k < K; ++k) out[k] = atb[k] / ata[k][k] * scale[k];
  return out;
}

}  // namespace

double AsymptoticsN3::disagreement() const {
  double worst = 0;
  const double pairs[3][2] = {{a1, a1_fit}, {a2, a2_fit}, {a3, a3_fit}};
  for (auto& p : pairs)
    worst = std::max(worst, std::abs(p[0] - p[1]) /
                                std::max(std::abs(p[0]), 1e-300));
  return worst;
}

AsymptoticsN3 coeffs_n3(const RadialProfile& prof) {
  if (prof.params.dim != 3)
    throw PreconditionError("coeffs_n3 requires N = 3");
  if (!prof.global())
    throw PreconditionError("coeffs_n3 requires a global profile");
  if (prof.r_last() < 1e3 * (1 - 1e-9))
    throw PreconditionError("coeffs_n3 requires r_max >= 1e3");

  AsymptoticsN3 out;
  const double m2 = profile_moment(prof, 2, false, 1);
  const double m3 = profile_moment(prof, 3, false, 1);
  const double m4 = profile_moment(prof, 4, false, 1);
  out.a1 = -0.5 * m2;
  out.a2 = 0.5 * m3;
  out.a3 = -m4 / 6.0;
  const double m2r = profile_moment(prof, 2, false, 2);
  const double m3r = profile_moment(prof, 3, false, 2);
  const double m4r = profile_moment(prof, 4, false, 2);
  out.refine_delta = std::max(
      {std::abs(m2r - m2) / std::max(std::abs(m2), 1e-300),
       std::abs(m3r - m3) / std::max(std::abs(m3), 1e-300),
       std::abs(m4r - m4) / std::max(std::abs(m4), 1e-300)});
  out.tail_bound = moment_tail_bound_exp(prof, 4);
  if (!(out.tail_bound <= 1e-8 * std::abs(out.a1)))
    throw InconclusiveError(
        "insufficient decay on the grid: moment tails not negligible");

  out.fit_lo = 0.6 * prof.r_last();
  out.fit_hi = 0.95 * prof.r_last();
  std::vector<double> xs, ys;
  for (const RadialState& s : prof.samples)
    if (s.r >= out.fit_lo && s.r <= out.fit_hi) {
      xs.push_back(s.r);
      ys.push_back(s.u);
    }
  auto coef = lsq_fit<3>(xs, ys, [](int k, double r) {
    return k == 0 ? r : (k == 1 ? 1.0 : 1.0 / r);
  });
  out.a1_fit = coef[0];
  out.a2_fit = coef[1];
  out.a3_fit = coef[2];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double fit = coef[0] * xs[i] + coef[1] + coef[2] / xs[i];
    out.fit_residual = std::max(out.fit_residual, std::abs(ys[i] - fit));
  }
  return out;
}

AsymptoticsN4 mass_n4(const RadialProfile& prof) {
  if (prof.params.dim != 4)
    throw PreconditionError("mass_n4 requires N = 4");
  if (!prof.global())
    throw PreconditionError("mass_n4 requires a global profile");
  AsymptoticsN4 out;
  const double m3 = profile_moment(prof, 3, false, 1);
  const double ml = profile_moment(prof, 3, true, 1);
  out.c0 = 0.25 * m3;
  out.ct = 0.25 * ml;
  out.c0_expected = 8 + 2 * prof.params.alpha;
  out.mass_integral = m3;
  const double m3r = profile_moment(prof, 3, false, 2);
  const double mlr = profile_moment(prof, 3, true, 2);
  out.refine_delta =
      std::max(std::abs(m3r - m3) / std::max(std::abs(m3), 1e-300),
               std::abs(mlr - ml) / std::max(std::abs(ml), 1e-300));
  const double t3 = moment_tail_bound_power(prof, 3, false);
  out.tail_rel = t3 / std::max(m3, 1e-300);
  return out;
}

double n4_tail_gap(const RadialProfile& prof, const AsymptoticsN4& asym,
                   double r) {
  return prof.u_at(r) + asym.c0 * std::log(r) - asym.ct;
}

LimitN5 check_limit_n5(const RadialProfile& prof, double r_hi) {
  const int n = prof.params.dim;
  const double a = prof.params.alpha;
  if (n <= 4) throw PreconditionError("check_limit_n5 requires N >= 5");
  if (!prof.global())
    throw PreconditionError("check_limit_n5 requires a global profile");
  if (r_hi <= 0) r_hi = prof.r_last();
  const double lam = lambda0(n, a);

  LimitN5 out;
  const double thresh = n * n * (n - 4.0) * (n - 4.0) / 16.0;
  out.at_or_above_n_alpha = thresh >= std::exp(lam);

  double prev_w1 = 0;
  int sign_changes = 0;
  bool have_prev = false;
  out.max_w_all = -1e300;
  for (const RadialState& s : prof.samples) {
    if (s.r > r_hi * (1 + 1e-12)) break;
    const double w = s.u + (4 + a) * std::log(s.r) - lam;
    out.max_w_all = std::max(out.max_w_all, w);
    if (s.r >= r_hi / 10.0) {
      out.sup_w_tail = std::max(out.sup_w_tail, std::abs(w));
      out.w_end = w;
    }
    if (s.r >= r_hi / 100.0) {
      const double w1 = s.r * s.du + (4 + a);
      if (have_prev && w1 * prev_w1 < 0) ++sign_changes;
      if (w1 != 0) {
        prev_w1 = w1;
        have_prev = true;
      }
    }
  }
  out.oscillatory = sign_changes >= 3;
  out.nonpositivity_defect = std::max(0.0, out.max_w_all);
  return out;
}

EnergyTrace energy_trace(const LogProfile& log, double s_lo, double s_hi) {
  const int n = log.params.dim;
  const double a = log.params.alpha;
  if (n == 3) throw PreconditionError("energy trace unsupported for N = 3");
  EnergyTrace out;
  out.conservative = (n == 4);
  const double elam =
      n >= 5 ? 2.0 * (4 + a) * (n - 2) * (n - 4) : 0.0;
  const double quad = 0.5 * (n * n - 10.0 * n + 20.0);

  std::vector<double> eprime;
  for (const LogSample& ls : log.samples) {
    if (ls.s < s_lo || ls.s > s_hi) continue;
    double e;
    if (n == 4) {
      e = ls.w3 * ls.w1 - 0.5 * ls.w2 * ls.w2 - 2.0 * ls.w1 * ls.w1 -
          std::exp(ls.w);
    } else {
      const double pot = std::exp(ls.w) - ls.w - 1.0;
      e = ls.w3 * ls.w1 - 0.5 * ls.w2 * ls.w2 +
          2.0 * (n - 4) * ls.w2 * ls.w1 + quad * ls.w1 * ls.w1 - elam * pot;
      eprime.push_back(2.0 * (n - 4) * ls.w2 * ls.w2 +
                       2.0 * (n - 2) * (n - 4) * ls.w1 * ls.w1);
    }
    out.samples.emplace_back(ls.s, e);
  }
  if (out.samples.empty())
    throw PreconditionError("energy window contains no samples");

  if (n == 4) {
    const double e0 = out.samples.front().second;
    for (auto& [s, e] : out.samples)
      out.drift = std::max(out.drift, std::abs(e - e0) / (1 + std::abs(e0)));
  } else {
    for (std::size_t i = 1; i < out.samples.size(); ++i)
      out.monotonicity_defect =
          std::max(out.monotonicity_defect,
                   out.samples[i - 1].second - out.samples[i].second);
  }
  out.final_value = out.samples.back().second;
  out.limit_estimate = out.final_value;

  if (n >= 5) {
    // Fit the decay rate of E' over the trailing window and close the tail.
    const double s_end = out.samples.back().first;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      if (out.samples[i].first < s_end - 2.5) continue;
      if (eprime[i] > 0) {
        xs.push_back(out.samples[i].first);
        ys.push_back(std::log(eprime[i]));
      }
    }
    if (xs.size() >= 8) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
      }
      const double m = xs.size();
      const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      if (slope < -1e-3)
        out.limit_estimate = out.final_value + eprime.back() / (-slope);
    }
  }
  return out;
}

RadialProfile truncate_profile(const RadialProfile& prof, double r_hi) {
  if (r_hi >= prof.r_last()) return prof;
  if (r_hi <= prof.r_first())
    throw PreconditionError("truncation radius below the first sample");
  RadialProfile out;
  out.params = prof.params;
  out.opts = prof.opts;
  out.stats = prof.stats;
  out.status = prof.status;
  out.status.r_reached = r_hi;
  for (const RadialState& s : prof.samples) {
    if (s.r > r_hi) break;
    out.samples.push_back(s);
  }
  if (out.samples.back().r < r_hi * (1 - 1e-14))
    out.samples.push_back(prof.at(r_hi));
  return out;
}

}  // namespace henon
