#include "riskbound/divergences.hpp"

#include <algorithm>
#include <numbers>

namespace riskbound {

double binary_divergence(double q, double theta) {
  require(q >= 0.0 && q <= 1.0, "binary_divergence: q must lie in [0, 1]");
  require(theta >= 0.0 && theta <= 1.0, "binary_divergence: theta must lie in [0, 1]");
  double d = 0.0;
  if (q > 0.0) d += theta > 0.0 ? q * std::log(q / theta) : kInf;
  if (q < 1.0) d += theta < 1.0 ? (1.0 - q) * std::log((1.0 - q) / (1.0 - theta)) : kInf;
  // Rounding can leave a tiny negative value when q == theta.
  return std::max(d, 0.0);
}

double binary_entropy(double u) {
  require(u >= 0.0 && u <= 1.0, "binary_entropy: u must lie in [0, 1]");
  return -xlogx(u) - xlogx(1.0 - u);
}

double gaussian_kl(const GaussianPriorPair& pair) {
  require(pair.sigma2_p > 0.0 && pair.sigma2_q > 0.0, "gaussian_kl: variances must be positive");
  const double r = pair.sigma2_q / pair.sigma2_p;
  return std::max(0.0, 0.5 * (r - std::log(r) - 1.0));
}

double path_divergence(const GridFunction& x1, const GridFunction& x2, double n0) {
  if (!(x1.grid == x2.grid)) throw ShapeError("path_divergence: waveforms must share a grid");
  require(n0 > 0.0, "path_divergence: n0 must be positive");
  std::vector<double> d2(x1.size());
  for (std::size_t i = 0; i < d2.size(); ++i) {
    const double d = x1.values[i] - x2.values[i];
    d2[i] = d * d;
  }
  return trapezoid(d2, x1.grid.step()) / n0;
}

double log_gaussian_quad_mgf(const QuadMgfCoeffs& c) {
  require(c.sigma2 > 0.0, "gaussian_quad_mgf: sigma2 must be positive");
  const double s = 1.0 - 2.0 * c.a_coef * c.sigma2;
  if (s <= 0.0) return kInf;
  return c.b_coef * c.b_coef * c.sigma2 / (2.0 * s) - 0.5 * std::log(s);
}

double gaussian_quad_mgf(const QuadMgfCoeffs& c) { return std::exp(log_gaussian_quad_mgf(c)); }

RenyiOrder::RenyiOrder(double a) : a_(a) {
  require(a > 1.0 && std::isfinite(a), "Renyi order must satisfy a > 1");
}

namespace {

// ||x_to(., theta) - x_from(., theta)||^2 = c0 + c2 theta^2 - c1 theta.
struct PathQuadratic {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

PathQuadratic path_quadratic(const GaussianAwgnModel& a, const GaussianAwgnModel& b,
                             const ChannelParams& ch) {
  const auto* la = std::get_if<DcLinearSignal>(&a.signal);
  const auto* lb = std::get_if<DcLinearSignal>(&b.signal);
  const auto* na = std::get_if<NonlinearSignal>(&a.signal);
  const auto* nb = std::get_if<NonlinearSignal>(&b.signal);
  if (la && lb) {
    const double d = std::sqrt(la->es) - std::sqrt(lb->es);
    return {0.0, 0.0, d * d};
  }
  if (na && nb) {
    if (na->ex != nb->ex || na->q_const != nb->q_const)
      throw DomainError("Renyi divergence between two different nonlinear signals is not available");
    return {};
  }
  const NonlinearSignal& nl = na ? *na : *nb;
  const DcLinearSignal& lin = la ? *la : *lb;
  require(ch.horizon > 0.0, "observation horizon must be positive");
  return {nl.ex, 2.0 * nl.q_const * std::sqrt(lin.es / ch.horizon), lin.es};
}

void check_model(const GaussianAwgnModel& m) {
  require(m.sigma2 > 0.0, "model prior variance must be positive");
  if (const auto* l = std::get_if<DcLinearSignal>(&m.signal))
    require(l->es >= 0.0, "reference energy must be nonnegative");
  else
    require(std::get<NonlinearSignal>(m.signal).ex >= 0.0, "signal energy must be nonnegative");
}

}  // namespace

double scaled_renyi(const GaussianAwgnModel& from, const GaussianAwgnModel& to,
                    RenyiOrder order, const ChannelParams& ch) {
  check_model(from);
  check_model(to);
  require(ch.n0 > 0.0, "n0 must be positive");
  const double a = order.value();
  const PathQuadratic pq = path_quadratic(from, to, ch);
  const double k = a * (a - 1.0) / ch.n0;
  QuadMgfCoeffs c{a / (2.0 * from.sigma2) - a / (2.0 * to.sigma2) + k * pq.c2, k * pq.c1,
                  from.sigma2};
  const double log_mgf = log_gaussian_quad_mgf(c);
  if (log_mgf == kInf) return kInf;
  const double log_integral = 0.5 * a * std::log(from.sigma2 / to.sigma2) + k * pq.c0 + log_mgf;
  return log_integral / (a - 1.0);
}

double kl_divergence(const GaussianAwgnModel& from, const GaussianAwgnModel& to,
                     const ChannelParams& ch) {
  check_model(from);
  check_model(to);
  require(ch.n0 > 0.0, "n0 must be positive");
  const PathQuadratic pq = path_quadratic(from, to, ch);
  return gaussian_kl({from.sigma2, to.sigma2}) + (pq.c0 + pq.c2 * to.sigma2) / ch.n0;
}

namespace {
std::pair<GaussianAwgnModel, GaussianAwgnModel> linear_pair(const RenyiLinearParams& p) {
  return {GaussianAwgnModel{p.sigma2, NonlinearSignal{p.ex, p.q_const}},
          GaussianAwgnModel{p.sigma2_q, DcLinearSignal{p.es}}};
}
}  // namespace

double renyi_gaussian_linear(RenyiOrder order, const RenyiLinearParams& p) {
  auto [P, Q] = linear_pair(p);
  return scaled_renyi(P, Q, order, {p.n0, p.horizon});
}

QuadMgfCoeffs renyi_mgf_coeffs(RenyiOrder order, const RenyiLinearParams& p) {
  const double a = order.value();
  require(p.sigma2 > 0.0 && p.sigma2_q > 0.0 && p.n0 > 0.0 && p.horizon > 0.0,
          "renyi_mgf_coeffs: invalid model parameters");
  const double A =
      a / (2.0 * p.sigma2) - a / (2.0 * p.sigma2_q) + a * (a - 1.0) * p.es / p.n0;
  const double B = 2.0 * a * (a - 1.0) * p.q_const / p.n0 * std::sqrt(p.es / p.horizon);
  return {A, B, p.sigma2};
}

// ---------------------------------------------------------------------------

GridFunction TiltedPrior::density() const {
  std::vector<double> v(base.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = log_base[i] == -kInf ? 0.0 : std::exp(beta * log_base[i] - phi);
  return {base.grid, std::move(v)};
}

double fisher_information(const GridFunction& density) {
  const auto& q = density.values;
  const std::size_t n = q.size();
  if (n < 3) throw ShapeError("fisher_information: need at least three grid points");
  for (double v : q)
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("density must be finite and >= 0");
  // Zeros attached to either end are outside the support; zeros with mass on
  // both sides are an interior gap.
  std::size_t first = 0, last = n - 1;
  while (first < n && q[first] == 0.0) ++first;
  while (last > first && q[last] == 0.0) --last;
  if (first >= last) throw DomainError("density has no mass on its grid");
  for (std::size_t i = first; i <= last; ++i)
    if (q[i] == 0.0) throw DomainError("density vanishes at an interior point");

  const double h = density.grid.step();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = std::sqrt(q[i]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d;
    if (i == 0)
      d = (r[1] - r[0]) / h;
    else if (i == n - 1)
      d = (r[n - 1] - r[n - 2]) / h;
    else
      d = (r[i + 1] - r[i - 1]) / (2.0 * h);
    d2[i] = d * d;
  }
  return 4.0 * trapezoid(d2, h);
}

namespace {

constexpr double kBoundaryRatio = 1e-6;

bool vanishes_at_ends(std::span<const double> v) {
  const double peak = *std::max_element(v.begin(), v.end());
  return v.front() <= kBoundaryRatio * peak && v.back() <= kBoundaryRatio * peak;
}

// ln int exp(beta * logp) on a grid, logp may contain -inf.
double log_partition(std::span<const double> logp, double beta, double h) {
  std::vector<double> terms(logp.size());
  for (std::size_t i = 0; i < logp.size(); ++i) {
    const double w = (i == 0 || i + 1 == logp.size()) ? 0.5 * h : h;
    terms[i] = logp[i] == -kInf ? -kInf : beta * logp[i] + std::log(w);
  }
  return log_sum_exp(terms);
}

double phi_step(double beta) { return 1e-5 * beta; }

TiltedPrior finish_tilt(GridFunction base, std::span<const double> logp, double beta,
                        std::optional<double> analytic_phi_prime) {
  const double h = base.grid.step();
  TiltedPrior t;
  t.beta = beta;
  t.phi = log_partition(logp, beta, h);
  if (!std::isfinite(t.phi)) throw DivergenceError("tilted prior is not integrable on its grid");
  t.z_beta = std::exp(t.phi);
  if (analytic_phi_prime) {
    t.phi_prime = *analytic_phi_prime;
  } else {
    const double s = phi_step(beta);
    t.phi_prime =
        (log_partition(logp, beta + s, h) - log_partition(logp, beta - s, h)) / (2.0 * s);
  }
  t.base = std::move(base);
  t.log_base.assign(logp.begin(), logp.end());
  GridFunction q = t.density();
  t.boundary_regular = vanishes_at_ends(q.values);
  t.fisher_info = fisher_information(q);
  return t;
}

}  // namespace

TiltedPrior tilt_prior(const GridFunction& base, double beta,
                       std::optional<double> analytic_phi_prime) {
  require(beta > 0.0 && std::isfinite(beta), "tilt_prior: beta must be positive");
  for (double v : base.values) require(v >= 0.0 && std::isfinite(v), "density must be >= 0");
  const double mass = integrate(base);
  require(std::abs(mass - 1.0) <= 1e-4, "tilt_prior: base density must integrate to 1");
  std::vector<double> logp(base.size());
  for (std::size_t i = 0; i < logp.size(); ++i)
    logp[i] = base.values[i] > 0.0 ? std::log(base.values[i]) : -kInf;
  return finish_tilt(base, logp, beta, analytic_phi_prime);
}

namespace {

// Locates the edge beyond which beta * (log_p - log_p(center)) < -cut.
double find_edge(const LogDensity& p, double beta, double direction, double bound) {
  constexpr double kCut = 60.0;
  const double ref = p.log_p(p.center);
  if (std::isfinite(bound)) return bound;
  double step = p.scale / std::sqrt(std::min(beta, 1.0));
  for (int i = 0; i < 200; ++i) {
    const double x = p.center + direction * step;
    if (beta * (p.log_p(x) - ref) < -kCut) return x;
    step *= 1.5;
  }
  throw DivergenceError("tilted prior mass does not decay; tilt is not integrable");
}

}  // namespace

TiltedPrior tilt_prior(const LogDensity& prior, double beta, std::size_t n) {
  require(beta > 0.0 && std::isfinite(beta), "tilt_prior: beta must be positive");
  require(n >= 64, "tilt_prior: grid needs at least 64 points");
  require(prior.lo < prior.hi, "tilt_prior: empty support");
  const UniformGrid grid(find_edge(prior, beta, -1.0, prior.lo),
                         find_edge(prior, beta, 1.0, prior.hi), n);
  // Normalizing constant of P itself, on a grid adapted to beta = 1.
  const UniformGrid g1(find_edge(prior, 1.0, -1.0, prior.lo), find_edge(prior, 1.0, 1.0, prior.hi),
                       n);
  std::vector<double> logp1(n);
  for (std::size_t i = 0; i < n; ++i) logp1[i] = prior.log_p(g1.at(i));
  const double log_z1 = log_partition(logp1, 1.0, g1.step());

  std::vector<double> logp(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    logp[i] = prior.log_p(grid.at(i)) - log_z1;
    p[i] = std::exp(logp[i]);
  }
  return finish_tilt(GridFunction(grid, std::move(p)), logp, beta, std::nullopt);
}

LogDensity gaussian_log_density(double sigma2) {
  require(sigma2 > 0.0, "Gaussian prior variance must be positive");
  const double c = -0.5 * std::log(2.0 * std::numbers::pi * sigma2);
  return {[sigma2, c](double t) { return c - t * t / (2.0 * sigma2); }, -kInf, kInf, 0.0,
          std::sqrt(sigma2)};
}

LogDensity uniform_log_density(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, "uniform prior needs lo < hi");
  const double c = -std::log(hi - lo);
  return {[=](double t) { return t >= lo && t <= hi ? c : -kInf; }, lo, hi, 0.5 * (lo + hi),
          hi - lo};
}

LogDensity raised_cosine_log_density(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, "raised-cosine prior needs lo < hi");
  const double len = hi - lo;
  return {[=](double t) {
            if (t < lo || t > hi) return -kInf;
            const double v = 1.0 - std::cos(2.0 * std::numbers::pi * (t - lo) / len);
            return v > 0.0 ? std::log(v / len) : -kInf;
          },
          lo, hi, 0.5 * (lo + hi), len};
}

GridFunction sample_density(const LogDensity& prior, const UniformGrid& grid) {
  auto f = GridFunction::sample(grid, [&](double t) { return std::exp(prior.log_p(t)); });
  const double mass = integrate(f);
  require(mass > 0.0, "sample_density: no mass on the grid");
  for (double& v : f.values) v /= mass;
  return f;
}

}  // namespace riskbound
