#include "henon/radial.hpp"

#include <algorithm>
#include <cmath>

namespace henon {

namespace {

inline double forcing(double r, double alpha, double u) {
  const double w = alpha == 0.0 ? 1.0 : std::pow(r, alpha);
  return w * std::exp(u);
}

}  // namespace

std::array<double, 4> rhs(const RadialState& s, const ProblemParams& p) {
  p.validate();
  if (!(s.r > 0)) throw PreconditionError("rhs requires r > 0");
  if (s.u > u_blowup)
    throw BlowUpSignal("u above the blow-up threshold; e^u not evaluated");
  const double n1 = p.dim - 1;
  return {s.du, s.lap - n1 * s.du / s.r, s.dlap,
          forcing(s.r, p.alpha, s.u) - n1 * s.dlap / s.r};
}

double series_k(int dim, double alpha) {
  const double n = dim;
  return (4 + alpha) * (2 + alpha) * (n + 2 + alpha) * (n + alpha);
}

RadialState series_start(const ProblemParams& p, double r_start) {
  p.validate();
  if (!(r_start > 0)) throw PreconditionError("series start requires r > 0");
  const double n = p.dim;
  const double a = p.alpha;
  const double c2 = p.beta / (2 * n);
  const double c4 = std::exp(p.delta) / series_k(p.dim, a);
  const double r = r_start;
  const double r2 = r * r;
  const double r2a = std::pow(r, 2 + a);
  RadialState s;
  s.r = r;
  s.u = p.delta + c2 * r2 + c4 * r2a * r2;
  s.du = 2 * c2 * r + (4 + a) * c4 * r2a * r;
  s.lap = p.beta + c4 * (4 + a) * (n + 2 + a) * r2a;
  s.dlap = c4 * (4 + a) * (n + 2 + a) * (2 + a) * r2a / r;
  return s;
}

double series_truncation(const ProblemParams& p, double r) {
  const double n = p.dim;
  const double a = p.alpha;
  const double k6 = (6 + a) * (4 + a) * (n + 4 + a) * (n + 2 + a);
  const double k8 =
      (8 + 2 * a) * (6 + 2 * a) * (n + 6 + 2 * a) * (n + 4 + 2 * a);
  const double t6 = std::exp(p.delta) * std::abs(p.beta) / (2 * n) / k6 *
                    std::pow(r, 6 + a);
  const double t8 = std::exp(2 * p.delta) / series_k(p.dim, a) / k8 *
                    std::pow(r, 8 + 2 * a);
  return t6 + t8;
}

RadialProfile integrate(const ProblemParams& p, double r_max,
                        const IntegrateOptions& opts) {
  p.validate();
  if (!(r_max > opts.r_start))
    throw PreconditionError("r_max must exceed r_start");
  if (!(opts.rtol > 0) || !(opts.atol > 0))
    throw PreconditionError("tolerances must be positive");

  RadialProfile prof;
  prof.params = p;
  prof.opts = opts;

  const double n1 = p.dim - 1;
  const double alpha = p.alpha;
  auto f = [n1, alpha](double r, const std::array<double, 4>& y,
                       std::array<double, 4>& dy) {
    dy[0] = y[1];
    dy[1] = y[2] - n1 * y[1] / r;
    dy[2] = y[3];
    dy[3] = forcing(r, alpha, std::min(y[0], u_exp_cap)) - n1 * y[3] / r;
  };

  const RadialState s0 = series_start(p, opts.r_start);
  std::array<double, 4> y0{s0.u, s0.du, s0.lap, s0.dlap};
  prof.samples.push_back(s0);
  double next_cp = opts.r_start * opts.checkpoint_ratio;

  RunStatus status;
  if (s0.lap >= 0) {
    status.lap_crossed = true;
    status.lap_cross_r = s0.r;
  }

  auto push = [&prof](double r, const std::array<double, 4>& y) {
    if (r > prof.samples.back().r * (1 + 1e-15))
      prof.samples.push_back({r, y[0], y[1], y[2], y[3]});
  };
  // dense output at the checkpoint radius inside an accepted step
  auto push_interp = [&](double r0, const std::array<double, 4>& ya,
                         const std::array<double, 4>& ka, double r1,
                         const std::array<double, 4>& yb,
                         const std::array<double, 4>& kb, double rc) {
    std::array<double, 4> yi;
    for (int i = 0; i < 4; ++i)
      yi[i] = hermite(r0, ya[i], ka[i], r1, yb[i], kb[i], rc);
    push(rc, yi);
  };

  OdeOptions ode;
  ode.rtol = opts.rtol;
  ode.atol = opts.atol;

  bool stopped = false;
  prof.stats = dopri5<4>(
      f, opts.r_start, y0, r_max, ode,
      [&](double r0, const std::array<double, 4>& ya,
          const std::array<double, 4>& ka, double r1,
          const std::array<double, 4>& yb,
          const std::array<double, 4>& kb) {
        if (!status.lap_crossed && yb[2] >= 0.0) {
          status.lap_crossed = true;
          // linear estimate of the crossing radius inside the step
          const double dv = yb[2] - ya[2];
          status.lap_cross_r =
              dv > 0 ? r0 + (r1 - r0) * (-ya[2] / dv) : r1;
        }
        if (yb[0] >= u_blowup) {
          status.threshold_hit = true;
          // refine the threshold radius from the Hermite model of u
          double lo = r0, hi = r1;
          for (int it = 0; it < 30; ++it) {
            const double mid = 0.5 * (lo + hi);
            (hermite(r0, ya[0], ka[0], r1, yb[0], yb[1], mid) < u_blowup
                 ? lo
                 : hi) = mid;
          }
          status.r_reached = hi;
          push(r1, yb);
          stopped = true;
          return StepControl::kStop;
        }
        while (next_cp < r1 * (1 - 1e-14)) {
          push_interp(r0, ya, ka, r1, yb, kb, next_cp);
          next_cp *= opts.checkpoint_ratio;
        }
        if (r1 >= next_cp) {
          push(r1, yb);
          while (next_cp <= r1) next_cp *= opts.checkpoint_ratio;
        }
        if (r1 >= r_max) push(r1, yb);
        return StepControl::kContinue;
      });

  if (!stopped) {
    status.r_reached = prof.samples.back().r;
    if (prof.samples.back().r < r_max * (1 - 1e-12))
      throw IntegrationStall("integration ended before r_max",
                             prof.samples.back().r, 0.0);
  }
  status.kind = (status.threshold_hit || status.lap_crossed)
                    ? RunStatus::kBlowUp
                    : RunStatus::kGlobal;
  prof.status = status;
  return prof;
}

RadialState RadialProfile::at(double r) const {
  const double lo = r_first(), hi = r_last();
  if (r < lo * (1 - 1e-12) || r > hi * (1 + 1e-12))
    throw PreconditionError("interpolation radius outside the profile range");
  r = std::clamp(r, lo, hi);
  auto it = std::lower_bound(
      samples.begin(), samples.end(), r,
      [](const RadialState& s, double x) { return s.r < x; });
  if (it == samples.begin()) return samples.front();
  if (it == samples.end()) return samples.back();
  const RadialState& b = *it;
  const RadialState& a = *(it - 1);
  if (b.r == r) return b;

  const double n1 = params.dim - 1;
  auto ddu = [&](const RadialState& s) { return s.lap - n1 * s.du / s.r; };
  auto ddlap = [&](const RadialState& s) {
    return forcing(s.r, params.alpha, std::min(s.u, u_exp_cap)) -
           n1 * s.dlap / s.r;
  };
  RadialState out;
  out.r = r;
  out.u = hermite(a.r, a.u, a.du, b.r, b.u, b.du, r);
  out.du = hermite(a.r, a.du, ddu(a), b.r, b.du, ddu(b), r);
  out.lap = hermite(a.r, a.lap, a.dlap, b.r, b.lap, b.dlap, r);
  out.dlap = hermite(a.r, a.dlap, ddlap(a), b.r, b.dlap, ddlap(b), r);
  return out;
}

RadialProfile scale_solution(const RadialProfile& prof, double lambda) {
  if (!(lambda > 0)) throw PreconditionError("scaling requires lambda > 0");
  const double a = prof.params.alpha;
  const double shift = (4 + a) * std::log(lambda);
  const double l2 = lambda * lambda;
  RadialProfile out;
  out.params = prof.params;
  out.params.delta += shift;
  out.params.beta *= l2;
  out.opts = prof.opts;
  out.opts.r_start = prof.opts.r_start / lambda;
  out.stats = prof.stats;
  out.status = prof.status;
  out.status.r_reached /= lambda;
  out.status.lap_cross_r /= lambda;
  out.samples.reserve(prof.samples.size());
  for (const RadialState& s : prof.samples)
    out.samples.push_back({s.r / lambda, s.u + shift, s.du * lambda,
                           s.lap * l2, s.dlap * l2 * lambda});
  return out;
}

double lap_monotonicity_defect(const RadialProfile& prof) {
  double worst = 0.0;
  for (std::size_t i = 1; i < prof.samples.size(); ++i)
    worst = std::min(worst, prof.samples[i].lap - prof.samples[i - 1].lap);
  return worst;
}

double laplacian_reconstruction_defect(const RadialProfile& prof) {
  const auto& s = prof.samples;
  if (s.size() < 7) return 0.0;
  double lap_scale = 0.0;
  for (const auto& q : s) lap_scale = std::max(lap_scale, std::abs(q.lap));
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < s.size(); ++i) {
    // quartic fit through the 5 neighbours, differentiated at r_i
    double m[5][6];
    for (int j = 0; j < 5; ++j) {
      const double dx = s[i - 2 + j].r - s[i].r;
      double pw = 1.0;
      for (int k = 0; k < 5; ++k) {
        m[j][k] = pw;
        pw *= dx;
      }
      m[j][5] = s[i - 2 + j].u;
    }
    for (int c = 0; c < 5; ++c) {
      int piv = c;
      for (int rr = c + 1; rr < 5; ++rr)
        if (std::abs(m[rr][c]) > std::abs(m[piv][c])) piv = rr;
      std::swap_ranges(m[c], m[c] + 6, m[piv]);
      for (int rr = 0; rr < 5; ++rr) {
        if (rr == c || m[c][c] == 0.0) continue;
        const double fac = m[rr][c] / m[c][c];
        for (int k = c; k < 6; ++k) m[rr][k] -= fac * m[c][k];
      }
    }
    const double d1 = m[1][5] / m[1][1];
    const double d2 = 2.0 * m[2][5] / m[2][2];
    const double v_fd = d2 + (prof.params.dim - 1) * d1 / s[i].r;
    const double scale = std::max(std::abs(s[i].lap), 1e-2 * lap_scale);
    worst = std::max(worst, std::abs(v_fd - s[i].lap) / scale);
  }
  return worst;
}

}  // namespace henon
