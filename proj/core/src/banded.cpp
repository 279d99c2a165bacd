#include "henon/banded.hpp"

#include <algorithm>
#include <cmath>

namespace henon {

std::vector<double> BandedSym::multiply(const std::vector<double>& x) const {
  std::vector<double> y(n, 0.0);
  for (int j = 0; j < n; ++j) {
    y[j] += get(j, j) * x[j];
    for (int k = 1; k <= bw && j + k < n; ++k) {
      y[j + k] += get(j + k, j) * x[j];
      y[j] += get(j + k, j) * x[j + k];
    }
  }
  return y;
}

void BandedLdlt::factor(const BandedSym& a) {
  n = a.n;
  bw = a.bw;
  l.assign((bw + 1) * n, 0.0);
  d.assign(n, 0.0);
  neg_pivots = 0;
  double scale = 1e-300;
  for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a.get(j, j)));

  auto lref = [&](int i, int j) -> double& { return l[(i - j) * n + j]; };
  for (int j = 0; j < n; ++j) {
    double dj = a.get(j, j);
    const int k0 = std::max(0, j - bw);
    for (int k = k0; k < j; ++k) dj -= lref(j, k) * lref(j, k) * d[k];
    if (std::abs(dj) < 1e-14 * scale)
      dj = (dj < 0 ? -1.0 : 1.0) * 1e-14 * scale;
    d[j] = dj;
    if (dj < 0) ++neg_pivots;
    for (int i = j + 1; i <= std::min(n - 1, j + bw); ++i) {
      double v = (i - j <= bw) ? a.get(i, j) : 0.0;
      for (int k = std::max(0, i - bw); k < j; ++k)
        v -= lref(i, k) * lref(j, k) * d[k];
      lref(i, j) = v / dj;
    }
  }
}

void BandedLdlt::solve(std::vector<double>& x) const {
  auto lval = [&](int i, int j) { return l[(i - j) * n + j]; };
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i <= std::min(n - 1, j + bw); ++i)
      x[i] -= lval(i, j) * x[j];
  for (int j = 0; j < n; ++j) x[j] /= d[j];
  for (int j = n - 1; j >= 0; --j)
    for (int i = j + 1; i <= std::min(n - 1, j + bw); ++i)
      x[j] -= lval(i, j) * x[i];
}

int inertia_below(const BandedSym& a, const std::vector<double>& b_diag,
                  double sigma) {
  BandedSym shifted = a;
  for (int j = 0; j < a.n; ++j) shifted.at(j, j) -= sigma * b_diag[j];
  BandedLdlt f;
  f.factor(shifted);
  return f.neg_pivots;
}

GenEig smallest_eig(const BandedSym& a, const std::vector<double>& b_diag,
                    double lo, double hi, double tol) {
  // make sure the bracket contains the smallest eigenvalue
  int guard = 0;
  while (inertia_below(a, b_diag, lo) > 0 && ++guard < 80) {
    const double width = std::max(hi - lo, 1.0);
    lo -= width;
  }
  guard = 0;
  while (inertia_below(a, b_diag, hi) < 1 && ++guard < 80) {
    const double width = std::max(hi - lo, 1.0);
    hi += width;
  }
  while (hi - lo > tol * std::max(1.0, std::abs(lo) + std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (inertia_below(a, b_diag, mid) >= 1 ? hi : lo) = mid;
  }

  GenEig out;
  out.lambda = 0.5 * (lo + hi);

  // inverse iteration with a shift just below the eigenvalue
  const double shift = lo - 1e-8 * std::max(1.0, std::abs(lo));
  BandedSym shifted = a;
  for (int j = 0; j < a.n; ++j) shifted.at(j, j) -= shift * b_diag[j];
  BandedLdlt f;
  f.factor(shifted);
  std::vector<double> x(a.n);
  for (int i = 0; i < a.n; ++i)
    x[i] = std::sin((i + 1) * 2.399963);  // deterministic non-degenerate seed
  for (int it = 0; it < 12; ++it) {
    for (int i = 0; i < a.n; ++i) x[i] *= b_diag[i];
    f.solve(x);
    double nrm = 0;
    for (int i = 0; i < a.n; ++i) nrm += x[i] * x[i] * b_diag[i];
    nrm = std::sqrt(nrm);
    for (auto& v : x) v /= nrm;
  }
  // Rayleigh quotient sharpens the bisection estimate.
  const std::vector<double> ax = a.multiply(x);
  double num = 0, den = 0;
  for (int i = 0; i < a.n; ++i) {
    num += x[i] * ax[i];
    den += x[i] * x[i] * b_diag[i];
  }
  const double rq = num / den;
  if (rq >= lo - tol && rq <= hi + tol) out.lambda = rq;
  out.vec = std::move(x);
  return out;
}

}  // namespace henon
