#include "riskbound/verify.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

#include "riskbound/bayes_bounds.hpp"
#include "riskbound/nonbayes_bounds.hpp"
#include "riskbound/optimize.hpp"
#include "riskbound/parallel.hpp"

namespace riskbound {
namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  const std::uint64_t h = mix(seed ^ mix(index ^ mix(stream + 0x5851f42d4c957f2dULL)));
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

double counter_normal(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  const double u1 = counter_uniform(seed, index, 2 * stream);
  const double u2 = counter_uniform(seed, index, 2 * stream + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string_view to_string(McModel m) {
  switch (m) {
    case McModel::kLinearGaussian: return "lin-gauss";
    case McModel::kPhaseTrivial: return "phase";
    case McModel::kScalarMl: return "nonbayes-linear";
  }
  return "unknown";
}

std::string_view to_string(McEstimator e) {
  switch (e) {
    case McEstimator::kConditionalMean: return "cond-mean";
    case McEstimator::kZero: return "zero";
    case McEstimator::kMaximumLikelihood: return "ml";
  }
  return "unknown";
}

void MCRun::validate() const {
  require(alpha > 0.0, "alpha must be positive");
  require(n_samples >= 1000, "at least 1000 samples are required");
  require(batches >= 2 && n_samples >= batches, "need at least two nonempty batches");
  require(sigma2 > 0.0 && es > 0.0 && n0 > 0.0, "model parameters must be positive");
  const bool ok = (model == McModel::kLinearGaussian &&
                   (estimator == McEstimator::kConditionalMean ||
                    estimator == McEstimator::kZero)) ||
                  (model == McModel::kPhaseTrivial && estimator == McEstimator::kZero) ||
                  (model == McModel::kScalarMl && estimator == McEstimator::kMaximumLikelihood);
  require(ok, "estimator is not available for this model");
}

double MCRun::threshold() const {
  switch (model) {
    case McModel::kLinearGaussian:
      return estimator == McEstimator::kConditionalMean
                 ? LinearGaussianModel{sigma2, es, n0}.alpha_c()
                 : 1.0 / (2.0 * sigma2);
    case McModel::kPhaseTrivial: return 1.0 / (2.0 * sigma2);
    case McModel::kScalarMl: return es / n0;
  }
  return 0.0;
}

double MCRun::exact_lambda() const {
  // Every supported pair has a centered Gaussian error of variance 1 / (2 threshold).
  return linear_gaussian_lambda_value(alpha, threshold());
}

MCResult mc_lambda(const MCRun& run) {
  run.validate();
  if (run.alpha > kMcAlphaMargin * run.threshold())
    throw DivergenceError("alpha exceeds 0.8 x divergence threshold " +
                          std::to_string(run.threshold()) + "; Monte Carlo variance may be infinite");

  const double sd = std::sqrt(run.sigma2);
  const double noise_sd = std::sqrt(run.es * run.n0 / 2.0);
  const double gain = LinearGaussianModel{run.sigma2, run.es, run.n0}.estimator_gain();
  const double ml_sd = std::sqrt(run.n0 / (2.0 * run.es));
  auto error = [&](std::uint64_t i) {
    switch (run.model) {
      case McModel::kLinearGaussian: {
        const double theta = sd * counter_normal(run.seed, i, 0);
        if (run.estimator == McEstimator::kZero) return -theta;
        const double z = theta * run.es + noise_sd * counter_normal(run.seed, i, 1);
        return gain * z - theta;
      }
      case McModel::kPhaseTrivial: return -sd * counter_normal(run.seed, i, 0);
      case McModel::kScalarMl: return ml_sd * counter_normal(run.seed, i, 0);
    }
    return 0.0;
  };

  struct Batch {
    double lse = 0.0;
    double max = 0.0;
    std::size_t n = 0;
  };
  const std::size_t nb = run.batches, n = run.n_samples;
  const auto batches = parallel_map<Batch>(nb, run.threads, [&](std::size_t b) {
    const std::size_t lo = b * n / nb, hi = (b + 1) * n / nb;
    std::vector<double> v(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      const double e = error(i);
      v[i - lo] = run.alpha * e * e;
    }
    const double m = *std::max_element(v.begin(), v.end());
    return Batch{log_sum_exp(v), m, hi - lo};
  });

  std::vector<double> lses, maxes;
  for (const auto& b : batches) lses.push_back(b.lse), maxes.push_back(b.max);
  const double total = log_sum_exp(lses);
  MCResult out;
  out.lambda_hat = total - std::log(static_cast<double>(n));
  std::vector<double> ratio;
  for (const auto& b : batches) {
    const double lb = b.lse - std::log(static_cast<double>(b.n));
    out.batch_lambdas.push_back(lb);
    ratio.push_back(std::exp(lb - out.lambda_hat));
  }
  const double mean = std::accumulate(ratio.begin(), ratio.end(), 0.0) / static_cast<double>(nb);
  double var = 0.0;
  for (double r : ratio) var += (r - mean) * (r - mean);
  var /= static_cast<double>(nb - 1);
  // Delta method: SE(ln M) = SE(M) / M, with M normalized to ~1.
  out.se = std::sqrt(var / static_cast<double>(nb)) / mean;
  out.max_share = std::exp(*std::max_element(maxes.begin(), maxes.end()) - total);
  out.heavy_tail = out.max_share > kHeavyTailShare;
  return out;
}

// ---------------------------------------------------------------------------

void BernoulliExact::validate() const {
  require(n >= 1 && n <= 100000, "n must lie in [1, 1e5]");
  require(a >= 0.0, "a must be nonnegative");
  require(theta > 0.0 && theta < 1.0, "theta must lie in (0, 1)");
  require(static_cast<bool>(estimator), "estimator is empty");
}

double frequency_estimator(std::size_t k, std::size_t n) {
  return static_cast<double>(k) / static_cast<double>(n);
}

double bernoulli_exact_lambda(const BernoulliExact& spec) {
  spec.validate();
  const double nd = static_cast<double>(spec.n);
  const double lt = std::log(spec.theta), l1t = std::log1p(-spec.theta);
  std::vector<double> base(spec.n + 1), terms(spec.n + 1);
  for (std::size_t k = 0; k <= spec.n; ++k) {
    const double kd = static_cast<double>(k);
    base[k] = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) +
              kd * lt + (nd - kd) * l1t;
    const double d = spec.estimator(k, spec.n) - spec.theta;
    terms[k] = base[k] + spec.a * nd * d * d;
  }
  if (std::abs(log_sum_exp(base)) > 1e-11)
    throw ResolutionError("binomial probabilities do not sum to one");
  return log_sum_exp(terms);
}

// ---------------------------------------------------------------------------

Posterior Posterior::from_grid(const GridFunction& density) {
  Posterior p;
  p.theta = density.grid.points();
  const auto w = trapezoid_weights(density.grid);
  for (std::size_t i = 0; i < w.size(); ++i) {
    require(density.values[i] >= 0.0, "posterior density must be nonnegative");
    p.weight.push_back(w[i] * density.values[i]);
  }
  p.truncated_tails = true;
  const double total = std::accumulate(p.weight.begin(), p.weight.end(), 0.0);
  require(std::abs(total - 1.0) <= 1e-4, "posterior density is not normalized");
  return p;
}

Posterior Posterior::atoms(std::vector<double> theta, std::vector<double> weight) {
  if (theta.empty() || theta.size() != weight.size())
    throw ShapeError("atoms need matching nonempty location and weight lists");
  double total = 0.0;
  for (double w : weight) {
    require(w >= 0.0, "weights must be nonnegative");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-9, "weights must sum to one");
  return {std::move(theta), std::move(weight), false};
}

double Posterior::mean() const {
  double s = 0.0, w = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) s += weight[i] * theta[i], w += weight[i];
  return s / w;
}

namespace {

std::vector<double> tilted_logs(const Posterior& p, double alpha, double eta) {
  std::vector<double> v(p.theta.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = p.theta[i] - eta;
    v[i] = p.weight[i] > 0.0 ? std::log(p.weight[i]) + alpha * d * d : -kInf;
  }
  return v;
}

double tilted_mean(const Posterior& p, double alpha, double eta) {
  const auto v = tilted_logs(p, alpha, eta);
  const double m = *std::max_element(v.begin(), v.end());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = std::exp(v[i] - m);
    num += w * p.theta[i];
    den += w;
  }
  return num / den;
}

void probe_tails(const Posterior& p, double alpha, double eta) {
  const auto v = tilted_logs(p, alpha, eta);
  const double m = *std::max_element(v.begin(), v.end());
  const double edge = std::max(v.front(), v.back());
  if (edge - m > std::log(1e-8) || v.front() > v[1] || v.back() > v[v.size() - 2])
    throw DivergenceError("tilted posterior does not decay at the grid ends; alpha beyond the tail threshold");
}

}  // namespace

double posterior_log_moment(const Posterior& posterior, double alpha, double eta) {
  return log_sum_exp(tilted_logs(posterior, alpha, eta));
}

PosteriorEstimate risk_sensitive_posterior_estimator(const Posterior& posterior, double alpha,
                                                     double damping, double tol, int max_iter) {
  require(alpha >= 0.0, "alpha must be nonnegative");
  require(damping > 0.0 && damping <= 1.0, "damping must lie in (0, 1]");
  PosteriorEstimate est;
  est.eta = posterior.mean();
  if (alpha == 0.0) return est;
  if (posterior.truncated_tails) probe_tails(posterior, alpha, est.eta);

  for (int it = 1; it <= max_iter; ++it) {
    const double next = (1.0 - damping) * est.eta + damping * tilted_mean(posterior, alpha, est.eta);
    const double step = std::abs(next - est.eta);
    est.eta = next;
    est.iterations = it;
    if (step < tol) return est;
  }
  const auto [lo, hi] = std::minmax_element(posterior.theta.begin(), posterior.theta.end());
  auto r = opt::golden_minimize([&](double eta) { return posterior_log_moment(posterior, alpha, eta); },
                                *lo, *hi, 1e-12);
  est.eta = r.x;
  est.used_fallback = true;
  return est;
}

// ---------------------------------------------------------------------------

std::vector<CertifyCheck> certify_default(const CertifyOptions& opt) {
  std::vector<CertifyCheck> out;
  auto add = [&](std::string name, double alpha, const BoundValue& b, double truth, double se) {
    const double bound = b.status == BoundStatus::kUseless ? -kInf : b.value;
    const bool ok = bound <= truth + 3.0 * se + 1e-9;
    out.push_back({std::move(name), alpha, bound, truth, se, ok});
  };
  auto mc = [&](MCRun run) {
    run.n_samples = std::max<std::size_t>(opt.samples, 1000);
    run.seed = opt.seed;
    run.threads = opt.threads;
    return mc_lambda(run);
  };

  // Linear Gaussian: sigma2 = 1, E_s = N0 = 1, alpha_c = 1.5.
  const LinearGaussianModel lg{1.0, 1.0, 1.0};
  for (double alpha : {0.1, 0.3, 0.6, 0.9, 1.2, 1.45}) {
    const double exact = linear_gaussian_min_lambda(lg, alpha).value;
    add("generic_q_eq_p", alpha, generic_bayes_bound(alpha, lg.mmse(), 0.0), exact, 0.0);
    for (double beta : {0.5, 1.0, 2.0})
      add("tilted_gaussian_beta" + std::to_string(beta).substr(0, 3), alpha,
          tilted_prior_bound(gaussian_log_density(lg.sigma2), alpha, beta, lg.es / lg.n0, 0.0),
          exact, 0.0);
  }
  {
    MCRun run;
    run.alpha = 0.5 * lg.alpha_c();
    run.sigma2 = lg.sigma2, run.es = lg.es, run.n0 = lg.n0;
    const auto r = mc(run);
    add("linear_gaussian_min_vs_mc", run.alpha, linear_gaussian_min_lambda(lg, run.alpha),
        r.lambda_hat, r.se);
  }

  // Phase modulation, sigma2 = 1, E_x / N0 = 1; truth is the trivial estimator.
  const double s2 = 1.0, snr = 1.0;
  for (double alpha : {0.05, 0.15, 0.25, 0.35, 0.45}) {
    const double truth = linear_gaussian_lambda_value(alpha, 1.0 / (2.0 * s2));
    add("phase_linear_reference", alpha,
        maximize_linear_reference_bound(phase_reference_inputs(alpha, s2, snr, 1.0)), truth, 0.0);
    add("phase_large_sigma", alpha, phase_bound_large_sigma(alpha, s2, snr), truth, 0.0);
  }
  {
    MCRun run;
    run.model = McModel::kPhaseTrivial;
    run.estimator = McEstimator::kZero;
    run.alpha = 0.3;
    run.sigma2 = s2;
    const auto r = mc(run);
    add("phase_linear_reference_vs_mc", run.alpha,
        maximize_linear_reference_bound(phase_reference_inputs(run.alpha, s2, snr, 1.0)),
        r.lambda_hat, r.se);
  }

  // Logarithmic probability comparison, sigma2 = 1/2, E_s = q = 0.
  for (double ex : {0.001, 0.01, 0.1}) {
    const LpcbModels m{0.5, 0.5, 0.0, ex, 1.0, 0.0, 1.0};
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
      const double truth = linear_gaussian_lambda_value(alpha, 1.0);
      add("lpcb_sup", alpha, lpcb_sup(m, alpha), truth, 0.0);
      LpcbChain chain{{0.3 * alpha, 0.2 * alpha},
                      {GaussianAwgnModel{0.5, NonlinearSignal{ex, 0.0}},
                       GaussianAwgnModel{0.5, DcLinearSignal{0.0}}}};
      add("iterated_lpcb_k2", alpha,
          iterated_lpcb(chain, alpha, 1.0, awgn_renyi_evaluator({1.0, 1.0})), truth, 0.0);
    }
  }

  // Non-Bayes: E_s = 2, N0 = 1.
  for (double alpha : {0.1, 0.5, 1.0, 1.5, 1.9})
    add("scalar_nonbayes", alpha, scalar_linear_bound(alpha, 2.0, 1.0),
        scalar_ml_lambda(alpha, 2.0, 1.0), 0.0);
  {
    MCRun run;
    run.model = McModel::kScalarMl;
    run.estimator = McEstimator::kMaximumLikelihood;
    run.alpha = 1.0;
    run.es = 2.0;
    const auto r = mc(run);
    add("scalar_nonbayes_vs_mc", run.alpha, scalar_linear_bound(run.alpha, 2.0, 1.0),
        r.lambda_hat, r.se);
  }
  {
    VectorLinearModel vm;
    vm.gamma.resize(2, 2);
    vm.gamma << 1.0, 0.3, 0.3, 1.0;
    vm.es = 2.0;
    for (double t : {0.2, 0.6, 1.0}) {
      Eigen::VectorXd a(2);
      a << t, -0.5 * t;
      add("vector_nonbayes", t, vector_linear_bound(vm, a), vector_ml_lambda(vm, a), 0.0);
    }
  }
  return out;
}

}  // namespace riskbound
