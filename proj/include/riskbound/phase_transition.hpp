// Bernoulli risk-sensitive error exponent and the Curie-Weiss magnetization
// analysis of the optimal Bayes exponential moment.
#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "riskbound/core.hpp"

namespace riskbound {

// alpha = a * n. Grids cover [0, 1]; the theta grid is inset by theta_inset.
struct ExponentProblem {
  double a = 1.0;
  std::size_t q_points = 201;
  std::size_t t_points = 401;
  std::size_t theta_points = 401;
  double theta_inset = 1e-6;
  std::size_t threads = 0;

  void validate() const;
};

// max over theta of a (t - theta)^2 - D(q || theta), with golden refinement
// of every local maximum of the theta grid.
[[nodiscard]] double inner_max(const ExponentProblem& p, double q, double t);

// argmin over t of inner_max (smallest t on ties) and the attained value.
struct MinimaxPoint {
  double t = 0.0;
  double value = 0.0;
};
[[nodiscard]] MinimaxPoint minimax_in_t(const ExponentProblem& p, double q);

// E(a) = max_q min_t max_theta [a (t - theta)^2 - D(q || theta)].
[[nodiscard]] double error_exponent(const ExponentProblem& p);

// argmin_t max_theta [a (t - theta)^2 - D(q || theta)]; equals q at a = 0.
[[nodiscard]] double asymptotic_estimator(double q, const ExponentProblem& p);

struct BernoulliExponent {
  double exponent = 0.0;
  double q_star = 0.0;
  std::vector<double> q;
  std::vector<double> theta_hat;
};
// E(a) together with the estimator curve on the q grid, from one pass.
[[nodiscard]] BernoulliExponent bernoulli_bayes_exponent(const ExponentProblem& p);

// max_q [a (est(q) - theta)^2 - D(q || theta)]: the exponential rate of
// E_theta exp{a n (est - theta)^2} for an estimator depending on q = k / n.
[[nodiscard]] double estimator_exponent(double a, double theta,
                                        const std::function<double(double)>& est,
                                        std::size_t q_points = 20001);
// The same for est(q) = q.
[[nodiscard]] double nonbayes_ml_exponent(double a, double theta, std::size_t q_points = 20001);

// ---------------------------------------------------------------------------

struct CurieWeissParams {
  double mu = 0.0;
  double a = 0.0;

  CurieWeissParams(double mu_, double a_);
  [[nodiscard]] double field() const;     // B = atanh(mu) - 2 a mu
  [[nodiscard]] double coupling() const { return 2.0 * a; }  // J
};

struct MagnetizationRoot {
  double m = 0.0;
  bool stable = false;
  double potential = 0.0;  // h2((1+m)/2) + B m + (J/2) m^2
};

struct RootSet {
  std::vector<MagnetizationRoot> roots;  // ascending m
  std::size_t dominant = 0;
  bool dominant_tie = false;

  [[nodiscard]] double dominant_m() const { return roots.at(dominant).m; }
};

// Roots of m - tanh(J m + B) by a sign scan over `cells` cells and bisection.
[[nodiscard]] RootSet magnetization_roots(const CurieWeissParams& p, std::size_t cells = 10000);

// a0(mu) = atanh(mu) / (2 mu), with a0(0) = 1/2.
[[nodiscard]] double a0(double mu);

enum class Phase { kParamagnetic, kPositiveLowA, kPositiveHighA, kNegativeLowA, kNegativeHighA };
[[nodiscard]] std::string_view to_string(Phase p);

struct PhaseLabel {
  Phase phase = Phase::kParamagnetic;
  bool boundary = false;
  bool multicritical = false;
  double dominant_m = 0.0;

  [[nodiscard]] std::string text() const;
};

inline constexpr double kPhaseBoundaryBand = 1e-9;

[[nodiscard]] PhaseLabel classify_phase(double mu, double a);

struct DiagramRow {
  double mu = 0.0;
  double a = 0.0;
  PhaseLabel label;
};
[[nodiscard]] std::vector<DiagramRow> phase_diagram(const std::vector<double>& mus,
                                                    const std::vector<double>& as,
                                                    std::size_t threads = 0);

}  // namespace riskbound
