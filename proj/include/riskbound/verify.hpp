// Ground truth for the bounds: seeded Monte Carlo over sufficient statistics,
// exact finite-n Bernoulli sums, and the risk-sensitive posterior estimator.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "riskbound/core.hpp"

namespace riskbound {

// Counter-based standard normal: a pure function of (seed, index, stream).
[[nodiscard]] double counter_normal(std::uint64_t seed, std::uint64_t index,
                                    std::uint64_t stream);
[[nodiscard]] double counter_uniform(std::uint64_t seed, std::uint64_t index,
                                     std::uint64_t stream);

enum class McModel {
  kLinearGaussian,  // Theta ~ N(0, sigma2), z = Theta E_s + noise of variance E_s N0 / 2
  kPhaseTrivial,    // phase model with est = 0, error = -Theta
  kScalarMl,        // non-Bayes scalar linear model, ML error ~ N(0, N0 / 2E_s)
};

enum class McEstimator { kConditionalMean, kZero, kMaximumLikelihood };

[[nodiscard]] std::string_view to_string(McModel m);
[[nodiscard]] std::string_view to_string(McEstimator e);

struct MCRun {
  McModel model = McModel::kLinearGaussian;
  McEstimator estimator = McEstimator::kConditionalMean;
  double alpha = 0.0;
  std::size_t n_samples = 1000000;
  std::uint64_t seed = 1;
  double sigma2 = 1.0;
  double es = 1.0;
  double n0 = 1.0;
  std::size_t batches = 20;
  std::size_t threads = 0;

  // alpha beyond which the exponential moment diverges.
  [[nodiscard]] double threshold() const;
  // Closed-form Lambda for the configured pair.
  [[nodiscard]] double exact_lambda() const;
  void validate() const;
};

struct MCResult {
  double lambda_hat = 0.0;
  double se = 0.0;
  double max_share = 0.0;
  bool heavy_tail = false;  // max_share above 0.01: the interval is not trustworthy
  std::vector<double> batch_lambdas;

  [[nodiscard]] bool covers(double truth, double k = 3.0) const {
    return std::abs(lambda_hat - truth) <= k * se;
  }
};

inline constexpr double kMcAlphaMargin = 0.8;
inline constexpr double kHeavyTailShare = 0.01;

// ln mean exp(alpha err^2). Refuses alpha > 0.8 * threshold with DivergenceError.
[[nodiscard]] MCResult mc_lambda(const MCRun& run);

struct BernoulliExact {
  std::size_t n = 100;
  double a = 1.0;
  double theta = 0.5;
  std::function<double(std::size_t k, std::size_t n)> estimator;  // k successes -> est

  void validate() const;
};

// ln sum_k C(n,k) theta^k (1-theta)^(n-k) exp{a n (est(k) - theta)^2}.
[[nodiscard]] double bernoulli_exact_lambda(const BernoulliExact& spec);

[[nodiscard]] double frequency_estimator(std::size_t k, std::size_t n);

// A posterior over theta as weighted atoms. Grid posteriors carry truncated
// tails that are probed before tilting.
struct Posterior {
  std::vector<double> theta;
  std::vector<double> weight;
  bool truncated_tails = false;

  [[nodiscard]] static Posterior from_grid(const GridFunction& density);
  [[nodiscard]] static Posterior atoms(std::vector<double> theta, std::vector<double> weight);
  [[nodiscard]] double mean() const;
};

struct PosteriorEstimate {
  double eta = 0.0;
  int iterations = 0;
  bool used_fallback = false;
};

// Solves eta = E[Theta e^{alpha (Theta - eta)^2}] / E[e^{alpha (Theta - eta)^2}] by damped
// iteration from the posterior mean, falling back to direct minimization.
[[nodiscard]] PosteriorEstimate risk_sensitive_posterior_estimator(const Posterior& posterior,
                                                                   double alpha,
                                                                   double damping = 0.5,
                                                                   double tol = 1e-10,
                                                                   int max_iter = 10000);
// ln E[e^{alpha (Theta - eta)^2}] under the posterior; convex in eta.
[[nodiscard]] double posterior_log_moment(const Posterior& posterior, double alpha, double eta);

// ---------------------------------------------------------------------------

struct CertifyCheck {
  std::string name;
  double alpha = 0.0;
  double bound = 0.0;
  double truth = 0.0;
  double se = 0.0;  // zero for closed-form truths
  bool passed = false;
};

struct CertifyOptions {
  std::size_t samples = 200000;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
};

// The default battery: every bound against a truth for the matching model.
// A check passes when bound <= truth + 3 se (+1e-9).
[[nodiscard]] std::vector<CertifyCheck> certify_default(const CertifyOptions& opt = {});

}  // namespace riskbound
