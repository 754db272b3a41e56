// Closed-form information measures shared by the Bayesian and non-Bayesian
// bounds. All values are in nats; +inf is a legitimate return value.
#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "riskbound/core.hpp"

namespace riskbound {

// q ln(q/theta) + (1-q) ln((1-q)/(1-theta)), with 0 ln 0 = 0.
[[nodiscard]] double binary_divergence(double q, double theta);

// -u ln u - (1-u) ln(1-u).
[[nodiscard]] double binary_entropy(double u);

struct GaussianPriorPair {
  double sigma2_p;  // prior variance under P
  double sigma2_q;  // prior variance under Q
};

// D[N(0, sigma2_q) || N(0, sigma2_p)].
[[nodiscard]] double gaussian_kl(const GaussianPriorPair& pair);

// Divergence between the laws of x1 + n and x2 + n for white noise of
// two-sided density n0/2: int (x1 - x2)^2 dt / n0.
[[nodiscard]] double path_divergence(const GridFunction& x1, const GridFunction& x2, double n0);

// Coefficients of E_P exp{A Theta^2 - B Theta}, Theta ~ N(0, sigma2).
struct QuadMgfCoeffs {
  double a_coef = 0.0;
  double b_coef = 0.0;
  double sigma2 = 1.0;

  [[nodiscard]] bool diverges() const { return 1.0 - 2.0 * a_coef * sigma2 <= 0.0; }
};

[[nodiscard]] double gaussian_quad_mgf(const QuadMgfCoeffs& c);
// ln of the same expectation; avoids overflow of the exponential.
[[nodiscard]] double log_gaussian_quad_mgf(const QuadMgfCoeffs& c);

class RenyiOrder {
 public:
  explicit RenyiOrder(double a);
  [[nodiscard]] double value() const { return a_; }

 private:
  double a_;
};

// Gaussian-prior models observed in white Gaussian noise over [0, T]. Two
// signal geometries are supported, matching what the closed forms need:
//   * a nonlinear signal x(t, theta) with theta-independent energy E_x and
//     theta-independent DC content q = int x(t, theta) dt;
//   * a linear model theta * s(t) with the DC reference s(t) = sqrt(E_s / T).
struct NonlinearSignal {
  double ex = 0.0;
  double q_const = 0.0;
};
struct DcLinearSignal {
  double es = 0.0;
};

struct GaussianAwgnModel {
  double sigma2 = 1.0;
  std::variant<NonlinearSignal, DcLinearSignal> signal;

  [[nodiscard]] bool is_linear() const {
    return std::holds_alternative<DcLinearSignal>(signal);
  }
};

struct ChannelParams {
  double n0 = 1.0;
  double horizon = 1.0;  // T
};

// Scaled Renyi divergence a * D_a(to || from), with
// D_a(Q||P) = ln int (dQ/dP)^a dP / (a (a - 1)). Returns +inf when the
// Gaussian integral diverges. Pairs of two different nonlinear signals are
// not representable and raise DomainError.
[[nodiscard]] double scaled_renyi(const GaussianAwgnModel& from, const GaussianAwgnModel& to,
                                  RenyiOrder order, const ChannelParams& ch);

// Kullback-Leibler divergence D(to || from) (the a -> 1 limit of the above).
[[nodiscard]] double kl_divergence(const GaussianAwgnModel& from, const GaussianAwgnModel& to,
                                   const ChannelParams& ch);

struct RenyiLinearParams {
  double sigma2 = 1.0;    // P prior variance
  double sigma2_q = 1.0;  // Q prior variance
  double es = 0.0;        // Q reference energy (DC signal)
  double ex = 0.0;        // P signal energy
  double n0 = 1.0;
  double q_const = 0.0;   // DC content of x(t, theta)
  double horizon = 1.0;
};

// a * D_a(Q || P) for P = nonlinear signal, Q = linear DC reference.
[[nodiscard]] double renyi_gaussian_linear(RenyiOrder order, const RenyiLinearParams& p);

// The A and B coefficients feeding the Gaussian quadratic MGF for the pair above.
[[nodiscard]] QuadMgfCoeffs renyi_mgf_coeffs(RenyiOrder order, const RenyiLinearParams& p);

// ---------------------------------------------------------------------------
// Tilted priors Q_beta = P^beta / Z(beta).

struct TiltedPrior {
  GridFunction base;  // normalized P on its grid
  std::vector<double> log_base;  // ln P on the same grid (-inf off the support)
  double beta = 1.0;
  double z_beta = 1.0;
  double phi = 0.0;        // ln Z(beta)
  double phi_prime = 0.0;  // d phi / d beta
  double fisher_info = 0.0;
  // False when the density does not vanish at an end of its support, i.e.
  // the Bayesian Cramer-Rao regularity conditions cannot hold.
  bool boundary_regular = true;

  [[nodiscard]] double kl_to_base() const { return (beta - 1.0) * phi_prime - phi; }
  [[nodiscard]] GridFunction density() const;
};

// Normalized density on an explicit grid; beta > 0.
[[nodiscard]] TiltedPrior tilt_prior(const GridFunction& base, double beta,
                                     std::optional<double> analytic_phi_prime = std::nullopt);

// A prior described by its log-density on a (possibly unbounded) support.
// The tilt grid is rebuilt for every beta so that wide tilts stay resolved.
struct LogDensity {
  std::function<double(double)> log_p;
  double lo = -kInf;
  double hi = kInf;
  double center = 0.0;  // a point of high density, used to locate the mass
  double scale = 1.0;   // rough width, used to seed the range search
};

[[nodiscard]] TiltedPrior tilt_prior(const LogDensity& prior, double beta,
                                     std::size_t n = 4096);

// Standard priors.
[[nodiscard]] LogDensity gaussian_log_density(double sigma2);
[[nodiscard]] LogDensity uniform_log_density(double lo, double hi);
// P(theta) proportional to 1 - cos(2 pi (theta - lo) / (hi - lo)) on [lo, hi].
[[nodiscard]] LogDensity raised_cosine_log_density(double lo, double hi);

// Grid sample of a log-density on [lo, hi] (finite), normalized.
[[nodiscard]] GridFunction sample_density(const LogDensity& prior, const UniformGrid& grid);

// Fisher information of a location family int Q'^2 / Q, computed as
// 4 int (d sqrt(Q))^2 with central differences inside and one-sided
// differences at the ends. Interior zeros raise DomainError.
[[nodiscard]] double fisher_information(const GridFunction& density);

}  // namespace riskbound
