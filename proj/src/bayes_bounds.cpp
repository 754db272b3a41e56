#include "riskbound/bayes_bounds.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <sstream>

#include "riskbound/optimize.hpp"

namespace riskbound {

void LinearGaussianModel::validate() const {
  require(sigma2 > 0.0, "prior variance must be positive");
  require(n0 > 0.0, "noise density N0 must be positive");
  require(es >= 0.0, "reference energy must be nonnegative");
}

BoundValue generic_bayes_bound(double alpha, double mse_lb, double divergence) {
  require(alpha > 0.0, "alpha must be positive");
  require(mse_lb >= 0.0, "MSE lower bound must be nonnegative");
  require(divergence >= 0.0, "divergence must be nonnegative");
  if (divergence == kInf) return BoundValue::useless("reference model has infinite divergence");
  return BoundValue::from(alpha * mse_lb - divergence);
}

double linear_gaussian_lambda_value(double alpha, double alpha_c) {
  if (alpha >= alpha_c) return kInf;
  return -0.5 * std::log1p(-alpha / alpha_c);
}

BoundValue linear_gaussian_min_lambda(const LinearGaussianModel& model, double alpha) {
  model.validate();
  require(alpha > 0.0, "alpha must be positive");
  auto b = BoundValue::from(linear_gaussian_lambda_value(alpha, model.alpha_c()));
  b.with("gain", model.estimator_gain()).with("alpha_c", model.alpha_c());
  return b;
}

// ---------------------------------------------------------------------------

void NonlinearBayesModel::validate(std::span<const double> probe_thetas) const {
  require(static_cast<bool>(signal), "signal family is empty");
  require(ex > 0.0 && n0 > 0.0 && sigma2 > 0.0, "energy, N0 and prior variance must be positive");
  std::vector<double> probes(probe_thetas.begin(), probe_thetas.end());
  if (probes.empty()) {
    const double sd = std::sqrt(sigma2);
    for (int k = -6; k <= 6; ++k) probes.push_back(0.5 * k * sd);
  }
  for (double th : probes) {
    auto x = GridFunction::sample(time, [&](double t) { return signal(t, th); });
    const double e = energy(x);
    if (std::abs(e - ex) > 0.01 * ex) {
      std::ostringstream os;
      os << "signal energy " << e << " at theta=" << th << " deviates from E_x=" << ex
         << " by more than 1%";
      throw DomainError(os.str());
    }
  }
}

NonlinearBayesModel phase_modulation_model(double sigma2, double ex, double n0, double horizon,
                                           int cycles, std::size_t time_points) {
  require(horizon > 0.0 && cycles > 0, "phase model needs T > 0 and a positive cycle count");
  const double amp = std::sqrt(2.0 * ex / horizon);
  const double omega = 2.0 * std::numbers::pi * cycles / horizon;
  NonlinearBayesModel m{[amp, omega](double t, double th) { return amp * std::cos(omega * t + th); },
                        UniformGrid(0.0, horizon, time_points), ex, n0, sigma2};
  return m;
}

GridFunction gaussian_grid_density(double sigma2, double half_width_sd, std::size_t n) {
  require(sigma2 > 0.0, "variance must be positive");
  const double sd = std::sqrt(sigma2);
  const UniformGrid g(-half_width_sd * sd, half_width_sd * sd, n);
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma2);
  return GridFunction::sample(g, [&](double t) { return c * std::exp(-t * t / (2.0 * sigma2)); });
}

GridFunction correlation_waveform(const NonlinearBayesModel& model, const GridFunction& q_prior) {
  const auto w = trapezoid_weights(q_prior.grid);
  std::vector<double> coef(q_prior.size());
  for (std::size_t i = 0; i < coef.size(); ++i)
    coef[i] = w[i] * q_prior.grid.at(i) * q_prior.values[i];
  return GridFunction::sample(model.time, [&](double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i)
      if (coef[i] != 0.0) s += coef[i] * model.signal(t, q_prior.grid.at(i));
    return s;
  });
}

double correlation_energy(const NonlinearBayesModel& model, const GridFunction& q_prior) {
  return energy(correlation_waveform(model, q_prior));
}

double phase_correlation_energy(double ex, double sigma2_q) {
  return ex * sigma2_q * sigma2_q * std::exp(-sigma2_q);
}

GridFunction optimal_reference_signal(const NonlinearBayesModel& model,
                                      const GridFunction& q_prior, double es) {
  require(es >= 0.0, "reference energy must be nonnegative");
  GridFunction g = correlation_waveform(model, q_prior);
  const double e = energy(g);
  double peak = 0.0;
  for (double v : g.values) peak = std::max(peak, std::abs(v));
  if (!(e > 0.0) || peak <= 1e-14 * std::sqrt(model.ex / model.horizon()))
    throw DomainError("E_Q[Theta x(t, Theta)] vanishes identically; no reference signal");
  const double scale = std::sqrt(es / e);
  for (double& v : g.values) v *= scale;
  return g;
}

// ---------------------------------------------------------------------------

namespace {
void check_inputs(const LinearReferenceInputs& in, double sigma2_q) {
  require(in.alpha > 0.0, "alpha must be positive");
  require(in.sigma2 > 0.0 && in.n0 > 0.0 && in.ex >= 0.0, "invalid model parameters");
  require(sigma2_q > 0.0, "reference prior variance must be positive");
  require(static_cast<bool>(in.corr_energy), "correlation energy callback is empty");
}
}  // namespace

BoundValue linear_reference_bound(const LinearReferenceInputs& in, double sigma2_q,
                                  double lambda) {
  check_inputs(in, sigma2_q);
  require(lambda >= 0.0, "lambda must be nonnegative");
  const double k = lambda > 0.0 ? in.corr_energy(sigma2_q) : 0.0;
  const double v = in.alpha * sigma2_q / (1.0 + 2.0 * lambda * sigma2_q) - lambda * sigma2_q -
                   gaussian_kl({in.sigma2, sigma2_q}) -
                   (in.ex - 2.0 * std::sqrt(lambda * in.n0 * k)) / in.n0;
  auto b = BoundValue::from(v);
  b.with("sigma2_q", sigma2_q).with("lambda", lambda);
  return b;
}

double auto_lambda(const LinearReferenceInputs& in, double sigma2_q) {
  check_inputs(in, sigma2_q);
  return in.corr_energy(sigma2_q) / (in.n0 * sigma2_q * sigma2_q);
}

BoundValue linear_reference_bound_auto(const LinearReferenceInputs& in, double sigma2_q) {
  return linear_reference_bound(in, sigma2_q, auto_lambda(in, sigma2_q));
}

BoundValue maximize_lambda(const LinearReferenceInputs& in, double sigma2_q) {
  check_inputs(in, sigma2_q);
  const double k = in.corr_energy(sigma2_q);
  // f(lambda) = a / (1 + b lambda) - c lambda + d sqrt(lambda) + const.
  auto f = [&](double lam) {
    return in.alpha * sigma2_q / (1.0 + 2.0 * lam * sigma2_q) - lam * sigma2_q +
           2.0 * std::sqrt(lam * k / in.n0);
  };
  const double guess = k / (in.n0 * sigma2_q * sigma2_q);
  const double hi = 1e4 * (1.0 + guess) + 10.0 * in.alpha;
  auto best = opt::log_scan_then_golden_maximize(f, 1e-12 * (1.0 + guess), hi, 160);
  const double lam = f(0.0) >= best.f ? 0.0 : best.x;
  return linear_reference_bound(in, sigma2_q, lam);
}

BoundValue maximize_auto_lambda_bound(const LinearReferenceInputs& in) {
  check_inputs(in, in.sigma2);
  BoundValue best = BoundValue::useless("no feasible sigma2_q");
  auto f = [&](double s2q) {
    auto b = linear_reference_bound_auto(in, s2q);
    best = better(best, b);
    return b.value;
  };
  (void)opt::log_scan_then_golden_maximize(f, in.sigma2 * 1e-4, in.sigma2 * 1e6, 200, 1e-10);
  return best;
}

BoundValue maximize_linear_reference_bound(const LinearReferenceInputs& in) {
  check_inputs(in, in.sigma2);
  auto objective = [&](double s2q, double lam) {
    return linear_reference_bound(in, s2q, lam).value;
  };
  opt::Box2D box{in.sigma2 * 1e-4, in.sigma2 * 1e6, 1e-10, 1e6, true, true};
  auto p = opt::coordinate_ascent(objective, box, 3);
  BoundValue best = maximize_lambda(in, p.x);
  // lambda = 0 sits outside the log box; compare against it explicitly.
  best = better(best, linear_reference_bound(in, p.x, 0.0));
  best = better(best, linear_reference_bound_auto(in, p.x));
  return best;
}

LinearReferenceInputs reference_inputs(const NonlinearBayesModel& model, double alpha) {
  return {alpha, model.sigma2, model.ex, model.n0, [model](double s2q) {
            return correlation_energy(model, gaussian_grid_density(s2q));
          }};
}

LinearReferenceInputs phase_reference_inputs(double alpha, double sigma2, double ex, double n0) {
  return {alpha, sigma2, ex, n0, [ex](double s2q) { return phase_correlation_energy(ex, s2q); }};
}

BoundValue nonlinear_linear_ref_bound(const NonlinearBayesModel& model, double alpha,
                                      double sigma2_q, double lambda) {
  return linear_reference_bound(reference_inputs(model, alpha), sigma2_q, lambda);
}

BoundValue phase_bound_large_sigma(double alpha, double sigma2, double ex_over_n0) {
  require(alpha > 0.0 && sigma2 > 0.0 && ex_over_n0 >= 0.0, "invalid phase-bound parameters");
  const double alpha_c = 1.0 / (2.0 * sigma2);
  BoundValue b;
  if (alpha >= alpha_c) {
    b = BoundValue::from(kInf);
  } else {
    b = BoundValue::from(-0.5 * std::log1p(-2.0 * alpha * sigma2) - ex_over_n0);
    b.with("sigma2_q", sigma2 / (1.0 - 2.0 * alpha * sigma2));
  }
  b.with("alpha_c_upper", alpha_c);
  return b;
}

// ---------------------------------------------------------------------------

BoundValue tilted_prior_bound(const TiltedPrior& tilt, double alpha, double es_over_n0,
                              double corr_term) {
  require(alpha > 0.0, "alpha must be positive");
  require(es_over_n0 >= 0.0 && corr_term >= 0.0, "energy ratio and path term must be >= 0");
  if (!tilt.boundary_regular)
    return BoundValue::useless(
        "prior does not vanish at its support boundary; Cramer-Rao regularity fails");
  const double info = tilt.fisher_info + 2.0 * es_over_n0;
  const double first = info > 0.0 ? alpha / info : kInf;
  auto b = BoundValue::from(first - tilt.kl_to_base() - corr_term);
  b.with("beta", tilt.beta).with("fisher_info", tilt.fisher_info).with("kl", tilt.kl_to_base());
  return b;
}

BoundValue tilted_prior_bound(const LogDensity& prior, double alpha, double beta,
                              double es_over_n0, double corr_term) {
  require(beta > 0.0, "beta must be positive");
  return tilted_prior_bound(tilt_prior(prior, beta), alpha, es_over_n0, corr_term);
}

BoundValue maximize_tilted_prior_bound(const LogDensity& prior, double alpha, double es_over_n0,
                                       double corr_term) {
  BoundValue best = BoundValue::useless("no feasible beta");
  auto f = [&](double beta) {
    try {
      auto b = tilted_prior_bound(prior, alpha, beta, es_over_n0, corr_term);
      best = better(best, b);
      return b.status == BoundStatus::kUseless ? -kInf : b.value;
    } catch (const DivergenceError&) {
      return -kInf;
    }
  };
  (void)opt::log_scan_then_golden_maximize(f, 1e-4, 1e2, 48, 1e-8);
  return best;
}

AlphaCEstimate alpha_c_upper(const LogDensity& prior, int max_halvings) {
  AlphaCEstimate est;
  double prev_info = kInf, prev_g = kInf, info0 = 0.0;
  for (int k = 0; k <= max_halvings; ++k) {
    const double beta = std::ldexp(1.0, -k);
    TiltedPrior t;
    try {
      t = tilt_prior(prior, beta);
    } catch (const DivergenceError&) {
      est.diagnostics = "tilt not integrable below beta=" + std::to_string(beta);
      return est;
    }
    if (!t.boundary_regular) {
      est.diagnostics =
          "prior does not vanish at its support boundary; Cramer-Rao regularity fails";
      return est;
    }
    const double info = t.fisher_info;
    const double g = info * t.kl_to_base();
    if (k == 0) info0 = info;
    if (k > 0 && info > prev_info * (1.0 + 1e-9)) {
      est.diagnostics = "Fisher information grows as beta decreases; no beta_0 found";
      return est;
    }
    if (k > 0 && info <= 1e-5 * info0) {
      est.value = g;
      est.beta0 = 0.0;
      est.tolerance = std::abs(g - prev_g);
      est.found_beta0 = true;
      est.diagnostics = "I(Q_beta) -> 0 as beta -> 0; limit taken at beta=" + std::to_string(beta);
      return est;
    }
    prev_info = info;
    prev_g = g;
  }
  est.diagnostics = "Fisher information did not vanish along the beta sweep; no beta_0 found";
  return est;
}

// ---------------------------------------------------------------------------

double ww_rect_delay_objective(double alpha, double gamma, double tau, double tau_q) {
  require(alpha > 0.0 && gamma > 0.0 && tau > 0.0, "alpha, gamma and tau must be positive");
  require(tau_q >= tau, "auxiliary pulse must be at least as wide as the true pulse");
  return alpha * kWeissWeinsteinRect * tau_q * tau_q / (gamma * gamma) -
         2.0 * gamma * (1.0 - std::sqrt(tau / tau_q));
}

double ww_applicability_coefficient() { return std::cbrt(2.0 * kWeissWeinsteinRect); }

double ww_nontrivial_coefficient() {
  const double c = 2.0 * kWeissWeinsteinRect;
  return std::pow(2.5 * kWeissWeinsteinRect * std::pow(c, -0.8), 5.0 / 3.0);
}

BoundValue ww_rect_delay_bound(double alpha, double gamma, double tau) {
  require(alpha > 0.0 && gamma > 0.0 && tau > 0.0, "alpha, gamma and tau must be positive");
  // Stationary point of the objective in tau_q.
  const double tau_q =
      std::pow(gamma * gamma * gamma * std::sqrt(tau) / (2.0 * kWeissWeinsteinRect * alpha), 0.4);
  const double scale = std::cbrt(alpha * tau * tau);
  BoundValue b;
  if (tau_q < tau) {
    b = BoundValue::from(ww_rect_delay_objective(alpha, gamma, tau, tau));
    b.status = BoundStatus::kOutOfWindow;
    b.diagnostics = "gamma below the applicability window (tau_q* < tau)";
    b.with("tau_q", tau);
  } else {
    b = BoundValue::from(ww_rect_delay_objective(alpha, gamma, tau, tau_q));
    b.with("tau_q", tau_q);
  }
  b.with("nontrivial", b.value >= 0.0 ? 1.0 : 0.0)
      .with("window_lo", ww_applicability_coefficient() * scale)
      .with("nontrivial_hi", ww_nontrivial_coefficient() * scale);
  return b;
}

// ---------------------------------------------------------------------------

BoundValue lpcb_bound(double alpha, double beta, const LpcbModels& m) {
  require(alpha > 0.0, "alpha must be positive");
  require(beta > 0.0 && beta < alpha, "LPCB split must satisfy 0 < beta < alpha");
  require(m.sigma2 > 0.0 && m.sigma2_q > 0.0 && m.n0 > 0.0 && m.horizon > 0.0 && m.es >= 0.0 &&
              m.ex >= 0.0,
          "invalid LPCB model parameters");
  const double s = alpha - beta;
  const double alpha_c_q = 1.0 / (2.0 * m.sigma2_q) + m.es / m.n0;
  const RenyiLinearParams rp{m.sigma2, m.sigma2_q, m.es, m.ex, m.n0, m.q_const, m.horizon};
  const QuadMgfCoeffs c = renyi_mgf_coeffs(RenyiOrder(alpha / beta), rp);
  const double one_minus = 1.0 - 2.0 * c.a_coef * m.sigma2;

  BoundValue b;
  if (one_minus <= 0.0) {
    b = BoundValue::useless("Renyi divergence is infinite at this split");
  } else {
    const double divergence_terms =
        -alpha / (2.0 * s) * std::log(m.sigma2 / m.sigma2_q) - alpha * m.ex / (beta * m.n0) -
        beta * c.b_coef * c.b_coef * m.sigma2 / (2.0 * s * one_minus) +
        beta / (2.0 * s) * std::log(one_minus);
    const double first =
        s >= alpha_c_q ? kInf : -alpha / (2.0 * s) * std::log1p(-s / alpha_c_q);
    b = BoundValue::from(first + divergence_terms);
  }
  b.with("beta", beta);
  return b;
}

BoundValue lpcb_sup(const LpcbModels& m, double alpha, std::size_t scan) {
  require(alpha > 0.0, "alpha must be positive");
  const double lo = 1e-6 * alpha, hi = (1.0 - 1e-6) * alpha;
  BoundValue best = BoundValue::useless("no feasible split");
  auto f = [&](double beta) {
    auto b = lpcb_bound(alpha, beta, m);
    best = better(best, b);
    return b.status == BoundStatus::kUseless ? -kInf : b.value;
  };
  (void)opt::log_scan_then_golden_maximize(f, lo, hi, scan, 1e-12);
  return best;
}

RenyiEvaluator awgn_renyi_evaluator(const ChannelParams& ch) {
  return [ch](const GaussianAwgnModel& from, const GaussianAwgnModel& to, double order) {
    return scaled_renyi(from, to, RenyiOrder(order), ch);
  };
}

BoundValue iterated_lpcb(const LpcbChain& chain, double alpha, double n0,
                         const RenyiEvaluator& renyi) {
  require(alpha > 0.0 && n0 > 0.0, "alpha and N0 must be positive");
  const std::size_t k = chain.models.size();
  require(k >= 1 && chain.betas.size() == k, "chain needs one split per model");
  for (double b : chain.betas) require(b > 0.0, "chain splits must be positive");
  const double total = std::accumulate(chain.betas.begin(), chain.betas.end(), 0.0);
  require(total < alpha, "chain splits must sum to less than alpha");
  const auto* terminal = std::get_if<DcLinearSignal>(&chain.models.back().signal);
  require(terminal != nullptr, "the last chain model must be a linear reference model");

  const double s = alpha - total;
  const double alpha_c_q = 1.0 / (2.0 * chain.models.back().sigma2) + terminal->es / n0;
  const double first = alpha / s * linear_gaussian_lambda_value(s, alpha_c_q);

  double penalty = 0.0;
  double level = alpha;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const double order = level / chain.betas[i];
    const double scaled = renyi(chain.models[i], chain.models[i + 1], order);
    if (scaled == kInf) {
      penalty = kInf;
      break;
    }
    // (alpha / beta_i) D_{order} = (alpha / level) * order * D_{order}.
    penalty += alpha / level * scaled;
    level -= chain.betas[i];
  }
  BoundValue b;
  if (penalty == kInf)
    b = BoundValue::useless("a chain step has infinite Renyi divergence");
  else
    b = BoundValue::from(first - penalty);
  for (std::size_t i = 0; i < k; ++i) b.with("beta" + std::to_string(i + 1), chain.betas[i]);
  return b;
}

double alpha_c_by_bisection(const std::function<BoundValue(double)>& bound, double lo, double hi,
                            double tol) {
  require(lo > 0.0 && hi > lo, "bisection bracket must satisfy 0 < lo < hi");
  if (!bound(hi).infinite()) return kInf;
  if (bound(lo).infinite()) return lo;
  return opt::bisect_predicate([&](double a) { return bound(a).infinite(); }, lo, hi, tol);
}

}  // namespace riskbound
