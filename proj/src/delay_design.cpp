#include "riskbound/delay_design.hpp"

#include <algorithm>
#include <numbers>

#include "riskbound/optimize.hpp"

namespace riskbound {

void DelayDesignProblem::validate() const {
  if (x.size() < 64) throw ShapeError("delay design needs at least 64 grid points");
  require(lambda_mult > 0.0, "lambda must be positive");
  require(n0 > 0.0, "N0 must be positive");
  for (double v : x.values) require(std::isfinite(v), "pulse samples must be finite");
}

GridFunction solve_reference_ode(const DelayDesignProblem& problem, double tol) {
  problem.validate();
  const std::size_t n = problem.x.size();
  const double h = problem.x.grid.step();
  const double r = 1.0 / (problem.lambda_mult * h * h);
  // Spectrum of the discrete operator lies in [1, 1 + 4r].
  if (1.0 + 4.0 * r > 1e12)
    throw ConditioningError("reference ODE is ill-conditioned: lambda * h^2 too small");

  std::vector<double> lower(n, -r), diag(n, 1.0 + 2.0 * r), upper(n, -r);
  upper[0] = -2.0 * r;
  lower[n - 1] = -2.0 * r;
  std::vector<double> rhs = problem.x.values;

  for (std::size_t i = 1; i < n; ++i) {
    const double m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> s(n);
  s[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) s[i] = (rhs[i] - upper[i] * s[i + 1]) / diag[i];

  GridFunction out{problem.x.grid, std::move(s)};
  // Normwise backward error: the residual relative to |x| + |A| |s|.
  const auto res = ode_residual(problem, out);
  double xmax = 0.0, smax = 0.0;
  for (double v : problem.x.values) xmax = std::max(xmax, std::abs(v));
  for (double v : out.values) smax = std::max(smax, std::abs(v));
  if (!(res.interior <= tol * (xmax + (1.0 + 4.0 * r) * smax)))
    throw ConditioningError("reference ODE residual above tolerance");
  return out;
}

OdeResidual ode_residual(const DelayDesignProblem& problem, const GridFunction& s) {
  const std::size_t n = s.size();
  if (n != problem.x.size() || !(s.grid == problem.x.grid))
    throw ShapeError("solution and pulse grids differ");
  const double h = s.grid.step();
  const double r = 1.0 / (problem.lambda_mult * h * h);
  const auto& v = s.values;
  OdeResidual res;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i == 0 ? v[1] : v[i - 1];
    const double right = i + 1 == n ? v[n - 2] : v[i + 1];
    const double e = v[i] - r * (left - 2.0 * v[i] + right) - problem.x.values[i];
    res.interior = std::max(res.interior, std::abs(e));
  }
  // The ghost-point condition holds exactly; report the one-sided
  // second-order slope estimate, which is O(h^2).
  const double d0 = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  const double d1 = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  res.boundary = std::max(std::abs(d0), std::abs(d1));
  return res;
}

double reference_lagrangian(const DelayDesignProblem& problem, const GridFunction& s) {
  if (s.size() != problem.x.size() || !(s.grid == problem.x.grid))
    throw ShapeError("solution and pulse grids differ");
  const double h = s.grid.step();
  double kinetic = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double d = s.values[i + 1] - s.values[i];
    kinetic += d * d / h;
  }
  std::vector<double> diff(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = problem.x.values[i] - s.values[i];
    diff[i] = d * d;
  }
  return kinetic + problem.lambda_mult * trapezoid(diff, h);
}

double nu_from_lambda(double lambda, double omega0) {
  require(lambda >= 0.0 && omega0 > 0.0, "need lambda >= 0 and omega0 > 0");
  return lambda / (lambda + omega0 * omega0);
}

void NuTradeoff::validate() const {
  require(nu >= 0.0 && nu <= 1.0, "nu must lie in [0, 1]");
  require(omega0 > 0.0 && ex >= 0.0, "need omega0 > 0 and E_x >= 0");
}

GridFunction RaisedCosinePulse::waveform(const UniformGrid& grid) const {
  const double a = amplitude();
  return GridFunction::sample(grid, [&](double t) { return a * (1.0 - std::cos(omega0 * t)); });
}

bool RaisedCosinePulse::analytic_compatible() const {
  const double k = omega0 * horizon / std::numbers::pi;
  return k >= 0.5 && std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, k);
}

GridFunction RaisedCosinePulse::analytic_solution(double lambda, const UniformGrid& grid) const {
  require(lambda > 0.0, "lambda must be positive");
  if (!analytic_compatible())
    throw DomainError("omega0 T is not a multiple of pi; the cosine solution violates s'(T) = 0");
  const double a = amplitude();
  const double nu = nu_from_lambda(lambda, omega0);
  return GridFunction::sample(grid,
                              [&](double t) { return a * (1.0 - nu * std::cos(omega0 * t)); });
}

GridFunction RaisedCosinePulse::reference(double lambda, const UniformGrid& grid,
                                          double n0) const {
  if (analytic_compatible()) return analytic_solution(lambda, grid);
  return solve_reference_ode({waveform(grid), lambda, n0});
}

// ---------------------------------------------------------------------------

BoundValue nu_bound(const TiltedPrior& tilt, double alpha, double nu, double omega0, double ex,
                    double n0) {
  require(n0 > 0.0, "N0 must be positive");
  const NuTradeoff trade{nu, omega0, ex};
  trade.validate();
  auto b = tilted_prior_bound(tilt, alpha, trade.derivative_energy() / n0, trade.distance(n0));
  b.with("nu", nu);
  return b;
}

BoundValue nu_bound(const LogDensity& prior, double alpha, double beta, double nu, double omega0,
                    double ex, double n0) {
  require(beta > 0.0, "beta must be positive");
  return nu_bound(tilt_prior(prior, beta), alpha, nu, omega0, ex, n0);
}

namespace {
BoundValue best_nu(const TiltedPrior& tilt, double alpha, double omega0, double ex, double n0) {
  BoundValue best = BoundValue::useless("no feasible nu");
  auto f = [&](double nu) {
    auto b = nu_bound(tilt, alpha, nu, omega0, ex, n0);
    best = better(best, b);
    return b.status == BoundStatus::kUseless ? -kInf : b.value;
  };
  (void)opt::scan_then_golden_maximize(f, 0.0, 1.0, 101, 1e-10);
  return best;
}
}  // namespace

BoundValue maximize_nu_bound(const LogDensity& prior, double alpha, double omega0, double ex,
                             double n0) {
  BoundValue best = BoundValue::useless("no feasible beta");
  auto f = [&](double beta) {
    try {
      auto b = best_nu(tilt_prior(prior, beta), alpha, omega0, ex, n0);
      best = better(best, b);
      return b.status == BoundStatus::kUseless ? -kInf : b.value;
    } catch (const DivergenceError&) {
      return -kInf;
    }
  };
  (void)opt::log_scan_then_golden_maximize(f, 1e-4, 1e2, 40, 1e-7);
  return best;
}

BoundValue nu_zero_bound(const LogDensity& prior, double alpha, double ex, double n0) {
  require(n0 > 0.0 && ex >= 0.0, "need N0 > 0 and E_x >= 0");
  auto b = maximize_tilted_prior_bound(prior, alpha, 0.0, ex / (3.0 * n0));
  b.with("nu", 0.0);
  return b;
}

}  // namespace riskbound
