#include "henon/second_order.hpp"

#include <algorithm>
#include <cmath>

#include "henon/banded.hpp"

namespace henon {

Profile2 integrate2(const SecondOrderParams& p, double r_max,
                    const IntegrateOptions& opts) {
  p.validate();
  if (!(r_max > opts.r_start))
    throw PreconditionError("r_max must exceed r_start");

  const double n1 = p.dim - 1;
  const double alpha = p.alpha;
  auto f = [n1, alpha](double r, const std::array<double, 2>& y,
                       std::array<double, 2>& dy) {
    const double w = alpha == 0.0 ? 1.0 : std::pow(r, alpha);
    dy[0] = y[1];
    dy[1] = -n1 * y[1] / r - w * std::exp(y[0]);
  };

  Profile2 prof;
  prof.params = p;
  prof.r_start = opts.r_start;
  const double rs = opts.r_start;
  const double denom = (2 + alpha) * (p.dim + alpha);
  std::array<double, 2> y0{
      p.u0 - std::exp(p.u0) * std::pow(rs, 2 + alpha) / denom,
      -std::exp(p.u0) * std::pow(rs, 1 + alpha) / (p.dim + alpha)};
  prof.samples.push_back({rs, y0[0], y0[1]});
  double next_cp = rs * opts.checkpoint_ratio;

  OdeOptions ode;
  ode.rtol = opts.rtol;
  ode.atol = opts.atol;
  prof.stats = dopri5<2>(
      f, rs, y0, r_max, ode,
      [&](double r0, const std::array<double, 2>& ya,
          const std::array<double, 2>& ka, double r1,
          const std::array<double, 2>& yb, const std::array<double, 2>& kb) {
        auto push = [&](double r, double u, double du) {
          if (r > prof.samples.back().r * (1 + 1e-15))
            prof.samples.push_back({r, u, du});
        };
        while (next_cp < r1 * (1 - 1e-14)) {
          push(next_cp, hermite(r0, ya[0], ka[0], r1, yb[0], kb[0], next_cp),
               hermite(r0, ya[1], ka[1], r1, yb[1], kb[1], next_cp));
          next_cp *= opts.checkpoint_ratio;
        }
        if (r1 >= next_cp) {
          push(r1, yb[0], yb[1]);
          while (next_cp <= r1) next_cp *= opts.checkpoint_ratio;
        }
        if (r1 >= r_max) push(r1, yb[0], yb[1]);
        return StepControl::kContinue;
      });
  return prof;
}

Sample2 Profile2::at(double r) const {
  const double lo = samples.front().r, hi = samples.back().r;
  if (r < lo * (1 - 1e-12) || r > hi * (1 + 1e-12))
    throw PreconditionError("interpolation radius outside the profile range");
  r = std::clamp(r, lo, hi);
  auto it = std::lower_bound(samples.begin(), samples.end(), r,
                             [](const Sample2& s, double x) { return s.r < x; });
  if (it == samples.begin()) return samples.front();
  if (it == samples.end()) return samples.back();
  const Sample2& b = *it;
  const Sample2& a = *(it - 1);
  if (b.r == r) return b;
  const double n1 = params.dim - 1;
  auto ddu = [&](const Sample2& s) {
    const double w = params.alpha == 0.0 ? 1.0 : std::pow(s.r, params.alpha);
    return -n1 * s.du / s.r - w * std::exp(s.u);
  };
  Sample2 out;
  out.r = r;
  out.u = hermite(a.r, a.u, a.du, b.r, b.u, b.du, r);
  out.du = hermite(a.r, a.du, ddu(a), b.r, b.du, ddu(b), r);
  return out;
}

double singular_u(int dim, double alpha, double r) {
  if (dim < 3) throw PreconditionError("singular solution requires N >= 3");
  if (!(alpha > -2.0)) throw PreconditionError("alpha must exceed -2");
  return -(2 + alpha) * std::log(r) + std::log((2 + alpha) * (dim - 2));
}

double singular_residual(int dim, double alpha, double r) {
  const double u = singular_u(dim, alpha, r);
  // Delta(-(2+alpha) ln r) = -(2+alpha)(N-2)/r^2
  const double lap = -(2 + alpha) * (dim - 2) / (r * r);
  return std::abs(lap + std::pow(r, alpha) * std::exp(u));
}

SingularStability threshold2(int dim, double alpha) {
  if (dim < 3) throw PreconditionError("threshold requires N >= 3");
  if (!(alpha > -2.0)) throw PreconditionError("alpha must exceed -2");
  const double n2 = dim - 2;
  return (2 + alpha) * n2 <= n2 * n2 / 4.0
             ? SingularStability::kStableSingular
             : SingularStability::kUnstableAtInfinitySingular;
}

double sphere_u(double r, double lambda) {
  const double q = 4.0 + lambda * lambda * r * r;
  return std::log(32.0 * lambda * lambda / (q * q));
}

double sphere_residual(double r, double lambda) {
  const double l2 = lambda * lambda;
  const double q = 4.0 + l2 * r * r;
  // u' = -4 l^2 r / q, u'' = -4 l^2 (4 - l^2 r^2)/q^2, Delta u = u'' + u'/r
  const double lap = -4.0 * l2 * (4.0 - l2 * r * r) / (q * q) - 4.0 * l2 / q;
  return std::abs(lap + 32.0 * l2 / (q * q));
}

Witness2 hardy1d_min(int dim, double c, double r1, double r2, int grid) {
  if (grid < 64) throw PreconditionError("grid must be >= 64");
  if (!(r1 > 0) || !(r2 > r1)) throw PreconditionError("invalid annulus");
  const int n = grid;
  std::vector<double> r(n);
  const double l1 = std::log(r1), l2 = std::log(r2);
  for (int i = 0; i < n; ++i) r[i] = std::exp(l1 + (l2 - l1) * i / (n - 1.0));
  r.front() = r1;
  r.back() = r2;

  const int m = n - 2;  // interior unknowns, phi = 0 at both ends
  BandedSym a(m, 1);
  std::vector<double> b(m, 0.0), v(m, 0.0);
  auto cellw = [](double lo, double hi, double p) {
    return (std::pow(hi, p) - std::pow(lo, p)) / p;
  };
  // P1 stiffness with exact r^{N-1} edge weights
  for (int e = 0; e + 1 < n; ++e) {
    const double h = r[e + 1] - r[e];
    const double w = cellw(r[e], r[e + 1], static_cast<double>(dim)) / (h * h);
    const int i = e - 1, j = e;  // unknown indices of the edge endpoints
    if (i >= 0) a.add(i, i, w);
    if (j < m) a.add(j, j, w);
    if (i >= 0 && j < m) a.add(j, i, -w);
  }
  // mass r^{N-3} node cells
  for (int i = 0; i < m; ++i) {
    const int node = i + 1;
    const double lo = 0.5 * (r[node - 1] + r[node]);
    const double hi = 0.5 * (r[node] + r[node + 1]);
    b[i] = cellw(lo, hi, dim - 2.0);
    v[i] = c * b[i];
  }
  BandedSym q = a;
  for (int i = 0; i < m; ++i) q.at(i, i) -= v[i];

  GenEig eig = smallest_eig(q, b, -c - 1.0, c + 1.0, 1e-12);
  Witness2 out;
  out.quotient = eig.lambda;
  out.negative = eig.lambda < 0;
  out.r.assign(r.begin() + 1, r.end() - 1);
  out.phi = std::move(eig.vec);

  // independent trapezoid re-quadrature of the minimizer
  auto phi_at = [&](int node) -> double {
    return (node >= 1 && node <= n - 2) ? out.phi[node - 1] : 0.0;
  };
  double qn = 0, qd = 0;
  for (int e = 0; e + 1 < n; ++e) {
    const double h = r[e + 1] - r[e];
    const double slope = (phi_at(e + 1) - phi_at(e)) / h;
    const double rm = 0.5 * (r[e] + r[e + 1]);
    qn += std::pow(rm, dim - 1.0) * h * slope * slope;
  }
  for (int i = 0; i < m; ++i) {
    const int node = i + 1;
    const double tw = 0.5 * (r[node + 1] - r[node - 1]) *
                      std::pow(r[node], dim - 3.0);
    qn -= c * tw * phi_at(node) * phi_at(node);
    qd += tw * phi_at(node) * phi_at(node);
  }
  out.q_independent = qn / std::max(qd, 1e-300);
  return out;
}

Witness2 witness2(int dim, double alpha, double R, int grid) {
  if (!(alpha > -2.0)) throw PreconditionError("alpha must exceed -2");
  if (!(dim >= 10 && dim < 10 + 4 * alpha))
    throw PreconditionError(
        "witness applies to 10 <= N < 10 + 4 alpha only (not applicable)");
  const double c = (2 + alpha) * (dim - 2);  // r^alpha e^U = c / r^2
  return hardy1d_min(dim, c, R, 16.0 * R, grid);
}

double singular_limit_gap(const Profile2& prof) {
  const Sample2& e = prof.samples.back();
  const double target = singular_u(prof.params.dim, prof.params.alpha, e.r);
  return std::abs(e.u - target);
}

}  // namespace henon
