// Lower bounds on Lambda_NB = ln E_theta exp{alpha (est - theta)^2} for
// unbiased estimators, and the ML reference performance. Unbiasedness is an
// assumption of every bound here; it is recorded, not checked.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <string>

#include "riskbound/core.hpp"

namespace riskbound {

// alpha N0 / (2 E_s) for alpha < E_s / N0, +inf from E_s / N0 on.
[[nodiscard]] BoundValue scalar_linear_bound(double alpha, double es, double n0);
// -0.5 ln(1 - alpha N0 / E_s), +inf when alpha N0 / E_s >= 1.
[[nodiscard]] double scalar_ml_lambda(double alpha, double es, double n0);

// theta = sum theta_i s_i(t), common energy es, correlations Gamma.
struct VectorLinearModel {
  Eigen::MatrixXd gamma;
  double es = 1.0;
  double n0 = 1.0;

  // Symmetry, unit diagonal and positive definiteness (MatrixError), and the
  // condition number (ConditioningError above 1e12).
  void validate() const;
  [[nodiscard]] double condition_number() const;
  // alpha^T Gamma^{-1} alpha via Cholesky.
  [[nodiscard]] double inverse_quad_form(const Eigen::VectorXd& alpha) const;
};

// The risk is [alpha^T (est - theta)]^2, so a scalar model with risk factor a
// corresponds to k = 1 and alpha_vec = sqrt(a).
[[nodiscard]] BoundValue vector_linear_bound(const VectorLinearModel& model,
                                             const Eigen::VectorXd& alpha);
// t such that t u lies on the ellipsoid alpha^T Gamma^{-1} alpha = E_s / N0.
[[nodiscard]] double critical_radius(const VectorLinearModel& model,
                                     const Eigen::VectorXd& direction);
// -0.5 ln(1 - (N0/E_s) alpha^T Gamma^{-1} alpha).
[[nodiscard]] double vector_ml_lambda(const VectorLinearModel& model,
                                      const Eigen::VectorXd& alpha);
// -0.5 ln det(I - (N0/E_s) alpha alpha^T Gamma^{-1}); same value, evaluated directly.
[[nodiscard]] double vector_ml_lambda_det(const VectorLinearModel& model,
                                          const Eigen::VectorXd& alpha);

// rho(theta, theta~) = int x(t, theta) x(t, theta~) dt / E on the range [lo, hi]
// (either end may be infinite).
struct CorrelationProfile {
  std::function<double(double, double)> rho;
  double ex = 1.0;
  double lo = -kInf;
  double hi = kInf;

  [[nodiscard]] bool unbounded() const { return !std::isfinite(lo) || !std::isfinite(hi); }
};

struct NonlinearSearch {
  std::size_t grid_points = 2001;
  double probe_step = 1.0;       // Delta in theta~ = theta +- 2^j Delta
  double divergence_cap = 1e6;   // nats; above this the supremum is +inf
  double stable_tol = 1e-4;
  int max_doublings = 60;
};

// sup over theta~ of alpha L_NB(theta~) + alpha (theta - theta~)^2 - 2E(1 - rho)/N0.
[[nodiscard]] BoundValue nonlinear_bound(const CorrelationProfile& profile, double alpha,
                                         double theta,
                                         const std::function<double(double)>& l_nb, double n0,
                                         const NonlinearSearch& search = {});

// Dense row-major matrix from text, entries separated by commas or spaces.
[[nodiscard]] Eigen::MatrixXd read_matrix_csv(std::istream& in);
[[nodiscard]] Eigen::MatrixXd read_matrix_csv_file(const std::string& path);

}  // namespace riskbound
