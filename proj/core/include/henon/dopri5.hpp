#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "henon/types.hpp"

namespace henon {

struct StepStats {
  std::uint64_t n_steps = 0;
  std::uint64_t n_accepted = 0;
  std::uint64_t n_rejected = 0;
  std::uint64_t n_rhs = 0;
  double h_min = 0.0;
  double h_max = 0.0;
};

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-14;
  double h_init = 0.0;  // 0: derived from the start abscissa
  double safety = 0.9;
  std::uint64_t max_steps = 50'000'000;
};

// Trajectory-level options shared by the radial integrators.
struct IntegrateOptions {
  double rtol = 1e-10;
  double atol = 1e-14;
  double r_start = 1e-6;
  double checkpoint_ratio = 1.01;  // geometric sample retention
};

enum class StepControl { kContinue, kStop };

// Cubic Hermite interpolation through (x0,f0,d0) and (x1,f1,d1).
inline double hermite(double x0, double f0, double d0, double x1, double f1,
                      double d1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * d1;
}

// Dormand-Prince 5(4) with FSAL and an I step controller. The callback sees
// every accepted step with derivatives at both ends:
//   on_step(t_prev, y_prev, k_prev, t, y, k) -> StepControl
// Integration runs left to right (t_end > t0 > 0, t is the radius here).
template <std::size_t D, class Rhs, class OnStep>
StepStats dopri5(Rhs&& f, double t0, std::array<double, D> y, double t_end,
                 const OdeOptions& opt, OnStep&& on_step) {
  using Vec = std::array<double, D>;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  // y5 - y4 error weights.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  StepStats st;
  double t = t0;
  Vec k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  f(t, y, k1);
  st.n_rhs++;

  double h = opt.h_init > 0 ? opt.h_init : 0.01 * t0;
  h = std::min(h, t_end - t0);
  st.h_min = h;
  st.h_max = h;

  while (t < t_end) {
    if (st.n_steps++ > opt.max_steps)
      throw IntegrationStall("step budget exhausted", t, h);
    if (!(h > 0) || t + h == t)
      throw IntegrationStall("step size underflow", t, h);
    const bool last = (t + h >= t_end);
    if (last) h = t_end - t;

    auto stage = [&](Vec& out, auto... terms) {
      for (std::size_t i = 0; i < D; ++i) {
        double acc = 0.0;
        ((acc += terms.first * terms.second[i]), ...);
        out[i] = y[i] + h * acc;
      }
    };
    using P = std::pair<double, const Vec&>;
    stage(ytmp, P{a21, k1});
    f(t + c2 * h, ytmp, k2);
    stage(ytmp, P{a31, k1}, P{a32, k2});
    f(t + c3 * h, ytmp, k3);
    stage(ytmp, P{a41, k1}, P{a42, k2}, P{a43, k3});
    f(t + c4 * h, ytmp, k4);
    stage(ytmp, P{a51, k1}, P{a52, k2}, P{a53, k3}, P{a54, k4});
    f(t + c5 * h, ytmp, k5);
    stage(ytmp, P{a61, k1}, P{a62, k2}, P{a63, k3}, P{a64, k4}, P{a65, k5});
    f(t + h, ytmp, k6);
    stage(ynew, P{b1, k1}, P{b3, k3}, P{b4, k4}, P{b5, k5}, P{b6, k6});
    f(t + h, ynew, k7);
    st.n_rhs += 6;

    double err = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                             e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc =
          opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / D);

    if (err <= 1.0) {
      st.n_accepted++;
      st.h_min = std::min(st.h_min, h);
      st.h_max = std::max(st.h_max, h);
      const double t_prev = t;
      const Vec y_prev = y;
      const Vec k_prev = k1;
      t = last ? t_end : t + h;
      y = ynew;
      k1 = k7;  // FSAL
      if (on_step(t_prev, y_prev, k_prev, t, y, k1) == StepControl::kStop)
        return st;
      const double fac = std::clamp(
          opt.safety * std::pow(std::max(err, 1e-10), -0.2), 1.0, 5.0);
      h *= fac;
    } else {
      st.n_rejected++;
      const double fac =
          std::clamp(opt.safety * std::pow(err, -0.2), 0.2, 0.9);
      h *= fac;
    }
  }
  return st;
}

}  // namespace henon
