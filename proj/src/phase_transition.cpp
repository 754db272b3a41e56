#include "riskbound/phase_transition.hpp"

#include <algorithm>

#include "riskbound/divergences.hpp"
#include "riskbound/optimize.hpp"
#include "riskbound/parallel.hpp"

namespace riskbound {

void ExponentProblem::validate() const {
  require(a >= 0.0 && std::isfinite(a), "a must be finite and nonnegative");
  require(q_points >= 101 && t_points >= 101 && theta_points >= 101,
          "grid resolutions must be at least 101 points");
  require(theta_inset > 0.0 && theta_inset < 0.25, "theta inset must lie in (0, 0.25)");
}

namespace {

class Kernel {
 public:
  explicit Kernel(const ExponentProblem& p) : p_(p), grid_(p.theta_inset, 1.0 - p.theta_inset, p.theta_points) {
    p.validate();
    theta_ = grid_.points();
    log_t_.resize(theta_.size());
    log_1mt_.resize(theta_.size());
    for (std::size_t i = 0; i < theta_.size(); ++i) {
      log_t_[i] = std::log(theta_[i]);
      log_1mt_[i] = std::log1p(-theta_[i]);
    }
    vals_.resize(theta_.size());
  }

  double inner(double q, double t) {
    const double a = p_.a;
    const double c = xlogx(q) + xlogx(1.0 - q);
    const std::size_t n = theta_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double d = t - theta_[i];
      vals_[i] = a * d * d - (c - q * log_t_[i] - (1.0 - q) * log_1mt_[i]);
    }
    auto exact = [&](double th) {
      const double d = t - th;
      return a * d * d - binary_divergence(q, th);
    };
    double best = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
      const bool left_ok = i == 0 || vals_[i] >= vals_[i - 1];
      const bool right_ok = i + 1 == n || vals_[i] >= vals_[i + 1];
      if (!left_ok || !right_ok) continue;
      best = std::max(best, vals_[i]);
      const double lo = theta_[i == 0 ? 0 : i - 1];
      const double hi = theta_[i + 1 == n ? n - 1 : i + 1];
      best = std::max(best, opt::golden_maximize(exact, lo, hi, 1e-12).f);
    }
    return best;
  }

  MinimaxPoint minimax(double q) {
    const UniformGrid tg(0.0, 1.0, p_.t_points);
    std::size_t arg = 0;
    double fbest = kInf;
    for (std::size_t j = 0; j < tg.n; ++j) {
      const double v = inner(q, tg.at(j));
      if (v < fbest) fbest = v, arg = j;
    }
    const double lo = tg.at(arg == 0 ? 0 : arg - 1);
    const double hi = tg.at(arg + 1 == tg.n ? arg : arg + 1);
    auto r = opt::golden_minimize([&](double t) { return inner(q, t); }, lo, hi, 1e-12);
    if (r.f < fbest) return {r.x, r.f};
    return {tg.at(arg), fbest};
  }

 private:
  const ExponentProblem& p_;
  UniformGrid grid_;
  std::vector<double> theta_, log_t_, log_1mt_, vals_;
};

}  // namespace

double inner_max(const ExponentProblem& p, double q, double t) {
  require(q >= 0.0 && q <= 1.0 && t >= 0.0 && t <= 1.0, "q and t must lie in [0, 1]");
  return Kernel(p).inner(q, t);
}

MinimaxPoint minimax_in_t(const ExponentProblem& p, double q) {
  require(q >= 0.0 && q <= 1.0, "q must lie in [0, 1]");
  return Kernel(p).minimax(q);
}

double asymptotic_estimator(double q, const ExponentProblem& p) {
  require(q >= 0.0 && q <= 1.0, "q must lie in [0, 1]");
  p.validate();
  // With a = 0 every t ties; the divergence alone is minimized at theta = q.
  if (p.a == 0.0) return q;
  return Kernel(p).minimax(q).t;
}

BernoulliExponent bernoulli_bayes_exponent(const ExponentProblem& p) {
  p.validate();
  const UniformGrid qg(0.0, 1.0, p.q_points);
  BernoulliExponent out;
  out.q = qg.points();
  const auto pts = parallel_map<MinimaxPoint>(qg.n, p.threads, [&](std::size_t i) {
    if (p.a == 0.0) return MinimaxPoint{qg.at(i), 0.0};
    return Kernel(p).minimax(qg.at(i));
  });
  std::size_t arg = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out.theta_hat.push_back(pts[i].t);
    if (pts[i].value > pts[arg].value) arg = i;
  }
  out.exponent = pts[arg].value;
  out.q_star = qg.at(arg);
  if (p.a > 0.0) {
    Kernel k(p);
    const double lo = qg.at(arg == 0 ? 0 : arg - 1);
    const double hi = qg.at(arg + 1 == qg.n ? arg : arg + 1);
    auto r = opt::golden_maximize([&](double q) { return k.minimax(q).value; }, lo, hi, 1e-9);
    if (r.f > out.exponent) out.exponent = r.f, out.q_star = r.x;
  }
  return out;
}

double error_exponent(const ExponentProblem& p) { return bernoulli_bayes_exponent(p).exponent; }

double estimator_exponent(double a, double theta, const std::function<double(double)>& est,
                          std::size_t q_points) {
  require(a >= 0.0, "a must be nonnegative");
  require(theta > 0.0 && theta < 1.0, "theta must lie in (0, 1)");
  auto f = [&](double q) {
    const double d = est(q) - theta;
    return a * d * d - binary_divergence(q, theta);
  };
  return opt::scan_then_golden_maximize(f, 0.0, 1.0, q_points, 1e-13).f;
}

double nonbayes_ml_exponent(double a, double theta, std::size_t q_points) {
  return estimator_exponent(a, theta, [](double q) { return q; }, q_points);
}

// ---------------------------------------------------------------------------

CurieWeissParams::CurieWeissParams(double mu_, double a_) : mu(mu_), a(a_) {
  require(std::abs(mu) < 1.0, "mu must lie in (-1, 1)");
  require(a >= 0.0 && std::isfinite(a), "a must be finite and nonnegative");
}

double CurieWeissParams::field() const { return std::atanh(mu) - 2.0 * a * mu; }

double a0(double mu) {
  require(std::abs(mu) < 1.0, "mu must lie in (-1, 1)");
  if (std::abs(mu) < 1e-8) return 0.5 + mu * mu / 6.0;
  return std::atanh(mu) / (2.0 * mu);
}

RootSet magnetization_roots(const CurieWeissParams& p, std::size_t cells) {
  require(cells >= 2, "root scan needs at least two cells");
  const double b = p.field(), j = p.coupling();
  auto f = [&](double m) { return m - std::tanh(j * m + b); };
  auto at = [&](std::size_t i) {
    return i == cells ? 1.0 : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(cells);
  };
  std::vector<double> ms;
  double x0 = at(0), f0 = f(x0);
  if (f0 == 0.0) ms.push_back(x0);
  for (std::size_t i = 1; i <= cells; ++i) {
    const double x1 = at(i), f1 = f(x1);
    if (f1 == 0.0)
      ms.push_back(x1);
    else if (f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0))
      ms.push_back(opt::bisect_root(f, x0, x1, 1e-12));
    x0 = x1;
    f0 = f1;
  }
  RootSet out;
  for (double m : ms) {
    const double pot = binary_entropy(0.5 * (1.0 + m)) + b * m + 0.5 * j * m * m;
    out.roots.push_back({m, j * (1.0 - m * m) < 1.0, pot});
  }
  if (out.roots.empty()) throw ResolutionError("no magnetization root found");
  double best = -kInf;
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    const double v = out.roots[i].potential;
    const double tol = 1e-12 * std::max(1.0, std::abs(v));
    if (v > best + tol) {
      best = v;
      out.dominant = i;
      out.dominant_tie = false;
    } else if (std::abs(v - best) <= tol) {
      out.dominant_tie = true;
      if (out.roots[i].m >= 0.0 && out.roots[out.dominant].m < 0.0) out.dominant = i;
    }
  }
  return out;
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kParamagnetic: return "Paramagnetic";
    case Phase::kPositiveLowA: return "PositiveM_lowA";
    case Phase::kPositiveHighA: return "PositiveM_highA";
    case Phase::kNegativeLowA: return "NegativeM_lowA";
    case Phase::kNegativeHighA: return "NegativeM_highA";
  }
  return "unknown";
}

std::string PhaseLabel::text() const {
  if (multicritical) return "Multicritical";
  std::string s(to_string(phase));
  if (boundary) s += "|boundary";
  return s;
}

PhaseLabel classify_phase(double mu, double a) {
  const CurieWeissParams p(mu, a);
  const auto roots = magnetization_roots(p);
  PhaseLabel label;
  label.dominant_m = roots.dominant_m();
  const double a_zero = a0(mu);
  label.multicritical =
      std::abs(mu) <= kPhaseBoundaryBand && std::abs(a - 0.5) <= kPhaseBoundaryBand;
  label.boundary = label.multicritical || std::abs(a - 0.5) <= kPhaseBoundaryBand ||
                   (a > 0.5 && std::abs(a - a_zero) <= kPhaseBoundaryBand) ||
                   (a > 0.5 && roots.dominant_tie);
  if (a < 0.5) {
    label.phase = Phase::kParamagnetic;
  } else {
    const bool positive = label.dominant_m >= 0.0;
    const bool low = a < a_zero;
    label.phase = positive ? (low ? Phase::kPositiveLowA : Phase::kPositiveHighA)
                           : (low ? Phase::kNegativeLowA : Phase::kNegativeHighA);
  }
  return label;
}

std::vector<DiagramRow> phase_diagram(const std::vector<double>& mus,
                                      const std::vector<double>& as, std::size_t threads) {
  const std::size_t n = mus.size() * as.size();
  return parallel_map<DiagramRow>(n, threads, [&](std::size_t k) {
    const double mu = mus[k / as.size()], a = as[k % as.size()];
    return DiagramRow{mu, a, classify_phase(mu, a)};
  });
}

}  // namespace riskbound
