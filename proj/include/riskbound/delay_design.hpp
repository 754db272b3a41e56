// Reference-signal design for delay estimation: the Neumann boundary-value
// problem s - s''/lambda = x, its raised-cosine closed form, and the
// nu-parameterized tilted-prior bound.
#pragma once

#include "riskbound/bayes_bounds.hpp"
#include "riskbound/core.hpp"
#include "riskbound/divergences.hpp"

namespace riskbound {

struct DelayDesignProblem {
  GridFunction x;            // delayed pulse on [0, T]
  double lambda_mult = 1.0;  // Lagrange multiplier
  double n0 = 1.0;

  void validate() const;
};

// Second-order central differences with ghost-point Neumann ends, solved by
// the Thomas algorithm. Throws ConditioningError when the discrete operator
// is too ill-conditioned or the normwise backward error exceeds tol.
[[nodiscard]] GridFunction solve_reference_ode(const DelayDesignProblem& problem,
                                               double tol = 1e-8);

// Discrete Lagrangian sum (s_{i+1} - s_i)^2 / h + lambda * trapezoid (x - s)^2.
// The ODE solution is its exact minimizer on the grid.
[[nodiscard]] double reference_lagrangian(const DelayDesignProblem& problem,
                                          const GridFunction& s);

// max |s - s''/lambda - x| over all points (ghost stencil at the ends), and
// the one-sided slope estimate |s'| at both ends.
struct OdeResidual {
  double interior = 0.0;
  double boundary = 0.0;
};
[[nodiscard]] OdeResidual ode_residual(const DelayDesignProblem& problem, const GridFunction& s);

// nu = lambda / (lambda + omega0^2).
[[nodiscard]] double nu_from_lambda(double lambda, double omega0);

struct NuTradeoff {
  double nu = 0.0;
  double omega0 = 1.0;
  double ex = 1.0;

  void validate() const;
  // int (ds/dt)^2 = E_x omega0^2 nu^2 / 3.
  [[nodiscard]] double derivative_energy() const { return ex * omega0 * omega0 * nu * nu / 3.0; }
  // int (s - x)^2 / N0 = (E_x / 3 N0) (1 - nu)^2.
  [[nodiscard]] double distance(double n0) const {
    return ex / (3.0 * n0) * (1.0 - nu) * (1.0 - nu);
  }
};

// x(t) = sqrt(2 E_x / 3T) (1 - cos(omega0 t)) on [0, T].
struct RaisedCosinePulse {
  double ex = 1.0;
  double horizon = 1.0;
  double omega0 = 2.0 * 3.141592653589793;

  [[nodiscard]] double amplitude() const { return std::sqrt(2.0 * ex / (3.0 * horizon)); }
  [[nodiscard]] GridFunction waveform(const UniformGrid& grid) const;
  // Whether omega0 T is a multiple of pi, so the cosine solution meets s'(T) = 0.
  [[nodiscard]] bool analytic_compatible() const;
  // s*(t) = A (1 - nu cos(omega0 t)). Throws DomainError when not compatible.
  [[nodiscard]] GridFunction analytic_solution(double lambda, const UniformGrid& grid) const;
  // Analytic path when compatible, numeric solver otherwise.
  [[nodiscard]] GridFunction reference(double lambda, const UniformGrid& grid,
                                       double n0 = 1.0) const;
};

// alpha / (I(Q_beta) + 2 nu^2 omega0^2 E_x / 3N0) - D(Q_beta || P) - (E_x / 3N0)(1 - nu)^2.
[[nodiscard]] BoundValue nu_bound(const TiltedPrior& tilt, double alpha, double nu,
                                  double omega0, double ex, double n0);
[[nodiscard]] BoundValue nu_bound(const LogDensity& prior, double alpha, double beta, double nu,
                                  double omega0, double ex, double n0);
// Joint supremum over nu in [0, 1] and beta on a log bracket.
[[nodiscard]] BoundValue maximize_nu_bound(const LogDensity& prior, double alpha, double omega0,
                                           double ex, double n0);
// The nu = 0 form: sup_beta [alpha / I(Q_beta) - D(Q_beta || P)] - E_x / 3N0.
[[nodiscard]] BoundValue nu_zero_bound(const LogDensity& prior, double alpha, double ex,
                                       double n0);

}  // namespace riskbound
