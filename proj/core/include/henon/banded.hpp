#pragma once

#include <vector>

namespace henon {

// Symmetric banded matrix, lower storage: entry(i, j) with 0 <= i-j <= bw is
// band[(i-j)*n + j].
struct BandedSym {
  int n = 0;
  int bw = 0;
  std::vector<double> band;

  BandedSym() = default;
  BandedSym(int n_, int bw_) : n(n_), bw(bw_), band((bw_ + 1) * n_, 0.0) {}
  double& at(int i, int j) { return band[(i - j) * n + j]; }       // i >= j
  double get(int i, int j) const { return band[(i - j) * n + j]; }
  void add(int i, int j, double v) {
    if (i < j) std::swap(i, j);
    band[(i - j) * n + j] += v;
  }
  std::vector<double> multiply(const std::vector<double>& x) const;
};

// LDL^T factorization without pivoting (tiny pivots are perturbed, which is
// harmless for inertia bisection). neg_pivots realizes Sylvester's law:
// the number of eigenvalues of A below the factorization shift.
struct BandedLdlt {
  int n = 0;
  int bw = 0;
  std::vector<double> l;  // unit lower band
  std::vector<double> d;
  int neg_pivots = 0;

  void factor(const BandedSym& a);
  void solve(std::vector<double>& x) const;  // in place
};

// Number of generalized eigenvalues of (A, B) below sigma (B diagonal > 0).
int inertia_below(const BandedSym& a, const std::vector<double>& b_diag,
                  double sigma);

struct GenEig {
  double lambda = 0.0;
  std::vector<double> vec;
};

// Smallest generalized eigenvalue of A x = lambda B x by inertia bisection
// on [lo, hi] followed by inverse iteration for the eigenvector.
GenEig smallest_eig(const BandedSym& a, const std::vector<double>& b_diag,
                    double lo, double hi, double tol);

}  // namespace henon
