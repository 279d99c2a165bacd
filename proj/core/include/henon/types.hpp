#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace henon {

// Fourth-order radial initial value problem for Delta^2 u = r^alpha e^u:
//   u(0) = delta, u'(0) = 0, (Delta u)(0) = beta, u'''(0) = 0.
struct ProblemParams {
  int dim = 3;        // space dimension N
  double alpha = 0.0; // weight exponent, must be > -2
  double delta = 0.0; // u(0)
  double beta = 0.0;  // Delta u(0)

  // Throws PreconditionError on invalid (dim, alpha).
  void validate() const;
};

// Second-order radial problem Delta u + r^alpha e^u = 0:
//   u(0) = u0, u'(0) = 0.
struct SecondOrderParams {
  int dim = 3;
  double alpha = 0.0;
  double u0 = 0.0;

  void validate() const;
};

// Invalid inputs (dimension/exponent out of the admissible range, bad flags).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// N <= 2: the fourth-order problem has no entire solution, shooting is refused.
struct NoEntireSolution : PreconditionError {
  using PreconditionError::PreconditionError;
};

// A computation terminated without a usable answer (reported, never silent).
struct InconclusiveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bisection could not certify both bracket sides at the r_max cap.
struct InconclusiveBracket : InconclusiveError {
  using InconclusiveError::InconclusiveError;
};

// Raised by the right-hand side overflow guard once u exceeds the blow-up
// threshold; e^u is not evaluated past this point.
struct BlowUpSignal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adaptive step size underflowed; carries the location for diagnostics.
struct IntegrationStall : std::runtime_error {
  double r = 0.0;
  double h = 0.0;
  IntegrationStall(const std::string& msg, double r_, double h_)
      : std::runtime_error(msg), r(r_), h(h_) {}
};

// Blow-up threshold: once u >= u_blowup the label is unambiguous (e^50 is
// still representable, and with Delta u > 0 the growth is doubly exponential).
inline constexpr double u_blowup = 50.0;
// Stage evaluations inside a step may overshoot the threshold; the exponent is
// capped a little above it so the final partial step stays finite.
inline constexpr double u_exp_cap = 58.0;

std::string cell_key(int dim, double alpha);

}  // namespace henon
