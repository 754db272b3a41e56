// Bayesian lower bounds on Lambda_B(alpha) = ln E exp{alpha (est - Theta)^2}.
//
// Every bound comes in two forms: an evaluation at explicit free parameters
// and a maximizer over them. Maximizers record their argmax in the returned
// BoundValue; divergent bounds carry the witnessing parameters.
#pragma once

#include <functional>
#include <vector>

#include "riskbound/core.hpp"
#include "riskbound/divergences.hpp"

namespace riskbound {

// Theta ~ N(0, sigma2), y(t) = theta s(t) + n(t), ||s||^2 = es, noise N0/2.
struct LinearGaussianModel {
  double sigma2 = 1.0;
  double es = 0.0;
  double n0 = 1.0;

  void validate() const;
  [[nodiscard]] double alpha_c() const { return 1.0 / (2.0 * sigma2) + es / n0; }
  // Conditional-mean estimator est = gain * int s y dt.
  [[nodiscard]] double estimator_gain() const { return sigma2 / (sigma2 * es + 0.5 * n0); }
  [[nodiscard]] double mmse() const { return 1.0 / (2.0 * alpha_c()); }
};

// alpha * mse_lb - divergence. An infinite divergence yields a useless bound.
[[nodiscard]] BoundValue generic_bayes_bound(double alpha, double mse_lb, double divergence);

// min over estimators of Lambda_B: 0.5 ln(1 / (1 - alpha / alpha_c)).
[[nodiscard]] BoundValue linear_gaussian_min_lambda(const LinearGaussianModel& model,
                                                    double alpha);
[[nodiscard]] double linear_gaussian_lambda_value(double alpha, double alpha_c);

// Nonlinear signal x(t, theta) with theta-independent energy under a Gaussian
// prior N(0, sigma2). The signal is evaluated on a time grid over [0, T].
struct NonlinearBayesModel {
  std::function<double(double t, double theta)> signal;
  UniformGrid time;
  double ex = 1.0;
  double n0 = 1.0;
  double sigma2 = 1.0;

  // Checks the energy of x(., theta) at probe parameters against ex (1%).
  void validate(std::span<const double> probe_thetas = {}) const;
  [[nodiscard]] double horizon() const { return time.length(); }
};

// x(t, theta) = sqrt(2 E_x / T) cos(omega t + theta), omega = 2 pi cycles / T.
[[nodiscard]] NonlinearBayesModel phase_modulation_model(double sigma2, double ex, double n0,
                                                         double horizon = 1.0, int cycles = 8,
                                                         std::size_t time_points = 2049);

// Gaussian density N(0, sigma2) sampled over +-half_width_sd standard deviations.
[[nodiscard]] GridFunction gaussian_grid_density(double sigma2, double half_width_sd = 8.0,
                                                 std::size_t n = 1025);

// E_Q[Theta x(t, Theta)] as a waveform, for a prior Q given as a grid density.
[[nodiscard]] GridFunction correlation_waveform(const NonlinearBayesModel& model,
                                                const GridFunction& q_prior);
// int (E_Q[Theta x(t, Theta)])^2 dt.
[[nodiscard]] double correlation_energy(const NonlinearBayesModel& model,
                                        const GridFunction& q_prior);
// Closed form of the above for phase modulation and Q = N(0, sigma2_q).
[[nodiscard]] double phase_correlation_energy(double ex, double sigma2_q);

// s*(t) = sqrt(E_s) g(t) / ||g|| with g = E_Q[Theta x(t, Theta)].
[[nodiscard]] GridFunction optimal_reference_signal(const NonlinearBayesModel& model,
                                                    const GridFunction& q_prior, double es);

// Ingredients of the Gaussian-reference bound for a nonlinear signal model.
struct LinearReferenceInputs {
  double alpha = 0.0;
  double sigma2 = 1.0;       // true prior variance
  double ex = 0.0;           // true signal energy
  double n0 = 1.0;
  std::function<double(double sigma2_q)> corr_energy;  // int (E_Q[Theta x])^2 dt
};

// Bound at fixed (sigma2_q, lambda = E_s / N0) with the optimal reference s*.
[[nodiscard]] BoundValue linear_reference_bound(const LinearReferenceInputs& in, double sigma2_q,
                                                double lambda);
// The closed lambda choice d^2 / (4 c^2) = K / (N0 sigma2_q^2).
[[nodiscard]] double auto_lambda(const LinearReferenceInputs& in, double sigma2_q);
[[nodiscard]] BoundValue linear_reference_bound_auto(const LinearReferenceInputs& in,
                                                     double sigma2_q);
// Numerical maximization over lambda >= 0 at fixed sigma2_q.
[[nodiscard]] BoundValue maximize_lambda(const LinearReferenceInputs& in, double sigma2_q);
// The closed lambda choice, maximized over sigma2_q on a log bracket.
[[nodiscard]] BoundValue maximize_auto_lambda_bound(const LinearReferenceInputs& in);
// Joint maximization over (sigma2_q, lambda) by coordinate ascent.
[[nodiscard]] BoundValue maximize_linear_reference_bound(const LinearReferenceInputs& in);

// Convenience wrappers on NonlinearBayesModel (numerical correlation energy).
[[nodiscard]] LinearReferenceInputs reference_inputs(const NonlinearBayesModel& model,
                                                     double alpha);
[[nodiscard]] LinearReferenceInputs phase_reference_inputs(double alpha, double sigma2,
                                                           double ex, double n0);
[[nodiscard]] BoundValue nonlinear_linear_ref_bound(const NonlinearBayesModel& model,
                                                    double alpha, double sigma2_q,
                                                    double lambda);

// Large-sigma phase bound with the e^{-sigma2_q} terms dropped:
// 0.5 ln(1 / (1 - 2 alpha sigma2)) - E_x / N0 at sigma2_q = sigma2 / (1 - 2 alpha sigma2).
[[nodiscard]] BoundValue phase_bound_large_sigma(double alpha, double sigma2, double ex_over_n0);

// ---------------------------------------------------------------------------
// Tilted-prior (Bayesian Cramer-Rao) bounds.

// alpha / (I(Q_beta) + 2 E_s/N0) - D(Q_beta || P) - corr_term.
[[nodiscard]] BoundValue tilted_prior_bound(const TiltedPrior& tilt, double alpha,
                                            double es_over_n0, double corr_term);
[[nodiscard]] BoundValue tilted_prior_bound(const LogDensity& prior, double alpha, double beta,
                                            double es_over_n0, double corr_term);
// Maximization over beta on a log-spaced bracket.
[[nodiscard]] BoundValue maximize_tilted_prior_bound(const LogDensity& prior, double alpha,
                                                     double es_over_n0, double corr_term);

struct AlphaCEstimate {
  double value = kInf;  // upper bound on alpha_c; +inf when no beta_0 exists
  double beta0 = 0.0;
  double tolerance = 0.0;  // change between the last two sweep points
  bool found_beta0 = false;
  std::string diagnostics;
};

// lim_{beta -> beta_0} I(Q_beta) [(beta - 1) phi'(beta) - phi(beta)], where
// I(Q_beta) -> 0 at beta_0, searched along beta = 2^-k.
[[nodiscard]] AlphaCEstimate alpha_c_upper(const LogDensity& prior, int max_halvings = 24);

// ---------------------------------------------------------------------------
// Weiss-Weinstein rectangular-pulse delay bound.

inline constexpr double kWeissWeinsteinRect = 0.324;

// alpha * 0.324 tau_q^2 / gamma^2 - 2 gamma (1 - sqrt(tau / tau_q)), tau_q >= tau.
[[nodiscard]] double ww_rect_delay_objective(double alpha, double gamma, double tau,
                                             double tau_q);
// Stationary-point evaluation; reports tau_q* and the applicability window.
[[nodiscard]] BoundValue ww_rect_delay_bound(double alpha, double gamma, double tau);
// Coefficients c in gamma = c (alpha tau^2)^{1/3} for the window edges.
[[nodiscard]] double ww_applicability_coefficient();
[[nodiscard]] double ww_nontrivial_coefficient();

// ---------------------------------------------------------------------------
// Logarithmic probability comparison bounds.

struct LpcbModels {
  double sigma2 = 1.0;    // true prior variance
  double sigma2_q = 1.0;  // reference prior variance
  double es = 0.0;        // reference (DC) energy
  double ex = 0.0;        // true signal energy
  double n0 = 1.0;
  double q_const = 0.0;
  double horizon = 1.0;
};

// Five-term bound at a split 0 < beta < alpha.
[[nodiscard]] BoundValue lpcb_bound(double alpha, double beta, const LpcbModels& m);
// Supremum over beta in (1e-6 alpha, (1 - 1e-6) alpha), log-spaced scan then golden.
[[nodiscard]] BoundValue lpcb_sup(const LpcbModels& m, double alpha, std::size_t scan = 200);

struct LpcbChain {
  std::vector<double> betas;
  std::vector<GaussianAwgnModel> models;  // models.front() = P, models.back() = Q (linear)
};

// Returns a * D_a(to || from).
using RenyiEvaluator = std::function<double(const GaussianAwgnModel& from,
                                            const GaussianAwgnModel& to, double order)>;

[[nodiscard]] RenyiEvaluator awgn_renyi_evaluator(const ChannelParams& ch);

// k-step chain bound:
// alpha / (alpha - sum beta) * Lambda_Q(alpha - sum beta)
//   - alpha sum_{i<k} D_{(alpha - sum_{j<i} beta_j)/beta_i}(P_{i+1} || P_i) / beta_i.
[[nodiscard]] BoundValue iterated_lpcb(const LpcbChain& chain, double alpha, double n0,
                                       const RenyiEvaluator& renyi);

// Bisection on alpha for the onset of divergence of a bound family. Returns
// the smallest alpha (within tol) at which bound(alpha) is +inf, assuming
// divergence is monotone in alpha; +inf when no divergence up to hi.
[[nodiscard]] double alpha_c_by_bisection(const std::function<BoundValue(double)>& bound,
                                          double lo, double hi, double tol = 1e-4);

}  // namespace riskbound
