#include <doctest.h>

#include "oracles.hpp"
#include "riskbound/divergences.hpp"

using namespace riskbound;

TEST_CASE("binary divergence values and conventions") {
  CHECK(binary_divergence(0.5, 0.5) == doctest::Approx(0.0));
  CHECK(binary_divergence(0.0, 0.5) == doctest::Approx(std::log(2.0)));
  CHECK(binary_divergence(1.0, 1.0) == 0.0);
  CHECK(binary_divergence(0.3, 0.0) == kInf);
  CHECK(binary_divergence(0.3, 1.0) == kInf);
  CHECK(binary_divergence(0.3, 0.7) >= 0.32);
  CHECK_THROWS_AS((void)binary_divergence(1.2, 0.5), DomainError);
}

TEST_CASE("Pinsker inequality on a dense grid") {
  for (int i = 0; i <= 200; ++i)
    for (int j = 1; j < 200; ++j) {
      const double q = i / 200.0, t = j / 200.0;
      const double d = binary_divergence(q, t);
      REQUIRE(d >= 2.0 * (q - t) * (q - t) - 1e-15);
      REQUIRE(d == doctest::Approx(oracle::kl_bernoulli(q, t)).epsilon(1e-12));
    }
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.25) == doctest::Approx(std::log(2.0) - binary_divergence(0.25, 0.5)));
}

TEST_CASE("Gaussian prior divergence") {
  CHECK(gaussian_kl({1.0, 1.0}) == 0.0);
  CHECK(gaussian_kl({1.0, 2.0}) == doctest::Approx(0.5 * (1.0 - std::log(2.0))));
  CHECK_THROWS_AS((void)gaussian_kl({0.0, 1.0}), DomainError);
  const double sigma2 = 1.7;
  const auto m = oracle::zoom_min([&](double x) { return gaussian_kl({sigma2, x}); }, 0.1, 10.0);
  CHECK(m.x == doctest::Approx(sigma2).epsilon(1e-4));
  // Direct integral of q ln(q / p).
  const double s2q = 0.6;
  const double direct = oracle::simpson(
      [&](double t) {
        const double q = oracle::gaussian_pdf(t, s2q), p = oracle::gaussian_pdf(t, sigma2);
        return q * std::log(q / p);
      },
      -12.0, 12.0);
  CHECK(gaussian_kl({sigma2, s2q}) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("path divergence") {
  const UniformGrid g(0.0, 3.0, 301);
  const auto one = GridFunction::sample(g, [](double) { return 1.0; });
  const auto zero = GridFunction::sample(g, [](double) { return 0.0; });
  CHECK(path_divergence(one, one, 1.0) == 0.0);
  CHECK(path_divergence(one, zero, 2.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS((void)path_divergence(one, GridFunction::sample(UniformGrid(0, 3, 300),
                                                                 [](double) { return 1.0; }),
                                        1.0),
                  ShapeError);

  // Rectangular pulses of energy E with widths tau <= tau~.
  const double ex = 2.0, n0 = 0.5, tau = 0.5, tau_q = 1.25;
  const UniformGrid fine(0.0, 2.0, 400001);
  auto rect = [&](double w) {
    return GridFunction::sample(fine, [&](double t) { return t < w ? std::sqrt(ex / w) : 0.0; });
  };
  const double gamma = ex / n0;
  CHECK(path_divergence(rect(tau), rect(tau_q), n0) ==
        doctest::Approx(2.0 * gamma * (1.0 - std::sqrt(tau / tau_q))).epsilon(1e-3));
}

TEST_CASE("nonnegativity on random inputs") {
  for (int i = 0; i < 500; ++i) {
    CHECK(binary_divergence(oracle::uniform(0, 1), oracle::uniform(0.01, 0.99)) >= 0.0);
    CHECK(gaussian_kl({oracle::uniform(0.01, 10), oracle::uniform(0.01, 10)}) >= 0.0);
  }
  const UniformGrid g(0.0, 1.0, 101);
  for (int i = 0; i < 50; ++i) {
    const double a = oracle::uniform(-2, 2), b = oracle::uniform(-2, 2);
    const auto x1 = GridFunction::sample(g, [&](double t) { return std::sin(a * t); });
    const auto x2 = GridFunction::sample(g, [&](double t) { return std::cos(b * t); });
    CHECK(path_divergence(x1, x2, oracle::uniform(0.1, 3)) >= 0.0);
  }
}

TEST_CASE("Gaussian quadratic MGF") {
  CHECK(gaussian_quad_mgf({0.0, 0.0, 1.0}) == doctest::Approx(1.0));
  CHECK(gaussian_quad_mgf({0.0, 1.0, 1.0}) == doctest::Approx(std::exp(0.5)));
  CHECK(gaussian_quad_mgf({1.0, 0.0, 1.0}) == kInf);
  CHECK(QuadMgfCoeffs{0.5, 0.0, 1.0}.diverges());
  CHECK_FALSE(QuadMgfCoeffs{0.49, 0.0, 1.0}.diverges());

  for (int i = 0; i < 100; ++i) {
    const double s2 = oracle::uniform(0.2, 3.0);
    const double slack = oracle::uniform(0.2, 3.0);  // 1 - 2 A s2
    const double A = (1.0 - slack) / (2.0 * s2);
    const double B = oracle::uniform(-2.0, 2.0);
    const double mean = -B * s2 / slack, sd = std::sqrt(s2 / slack);
    const double ref = oracle::simpson(
        [&](double t) {
          return std::exp(A * t * t - B * t - t * t / (2 * s2)) / std::sqrt(2 * oracle::kPi * s2);
        },
        mean - 14 * sd, mean + 14 * sd, 40000);
    REQUIRE(gaussian_quad_mgf({A, B, s2}) == doctest::Approx(ref).epsilon(1e-6));
  }
}

namespace {

// ln int q^a p^(1-a) exp{a (a-1) ||x_P - x_Q||^2 / N0} dtheta / (a - 1).
double renyi_oracle(double a, const RenyiLinearParams& p) {
  const double sd = std::sqrt(std::max(p.sigma2, p.sigma2_q));
  const double val = oracle::simpson(
      [&](double t) {
        const double d2 = p.ex - 2.0 * t * p.q_const * std::sqrt(p.es / p.horizon) + t * t * p.es;
        const double lq = -0.5 * std::log(2 * oracle::kPi * p.sigma2_q) - t * t / (2 * p.sigma2_q);
        const double lp = -0.5 * std::log(2 * oracle::kPi * p.sigma2) - t * t / (2 * p.sigma2);
        return std::exp(a * lq + (1 - a) * lp + a * (a - 1) * d2 / p.n0);
      },
      -40 * sd, 40 * sd, 200000);
  return std::log(val) / (a - 1.0);
}

}  // namespace

TEST_CASE("Renyi divergence of the linear reference") {
  RenyiLinearParams p{1.0, 1.0, 0.0, 0.7, 2.0, 0.0, 1.0};
  for (double a : {1.5, 2.0, 4.0})
    CHECK(renyi_gaussian_linear(RenyiOrder(a), p) == doctest::Approx(a * p.ex / p.n0));

  SUBCASE("finite iff 1 - 2 A sigma2 > 0 when E_s = 0") {
    p.sigma2 = 1.0;
    p.sigma2_q = 3.0;
    for (double a : {1.2, 1.4, 1.49, 1.51, 2.0}) {
      const double A = 0.5 * a * (1.0 / p.sigma2 - 1.0 / p.sigma2_q);
      const double v = renyi_gaussian_linear(RenyiOrder(a), p);
      if (1.0 - 2.0 * A * p.sigma2 > 0.0) {
        REQUIRE(std::isfinite(v));
        CHECK(v == doctest::Approx(renyi_oracle(a, p)).epsilon(1e-6));
      } else {
        CHECK(v == kInf);
      }
    }
  }
  SUBCASE("DC reference with DC content matches quadrature") {
    p = {0.8, 0.5, 0.3, 1.1, 1.5, 0.4, 2.0};
    for (double a : {1.1, 1.7, 2.5}) {
      const double v = renyi_gaussian_linear(RenyiOrder(a), p);
      CHECK(v == doctest::Approx(renyi_oracle(a, p)).epsilon(1e-6));
    }
  }
  SUBCASE("order one limit is the Kullback-Leibler divergence") {
    p = {0.8, 0.5, 0.3, 1.1, 1.5, 0.0, 2.0};
    const double kl = gaussian_kl({p.sigma2, p.sigma2_q}) + (p.ex + p.sigma2_q * p.es) / p.n0;
    CHECK(renyi_gaussian_linear(RenyiOrder(1.0 + 1e-4), p) == doctest::Approx(kl).epsilon(1e-3));
    GaussianAwgnModel P{p.sigma2, NonlinearSignal{p.ex, 0.0}}, Q{p.sigma2_q, DcLinearSignal{p.es}};
    CHECK(kl_divergence(P, Q, {p.n0, p.horizon}) == doctest::Approx(kl));
  }
  SUBCASE("nondecreasing in the order") {
    p = {1.0, 0.7, 0.4, 0.9, 1.0, 0.2, 1.0};
    double prev = 0.0;
    for (double a = 1.05; a < 3.0; a += 0.05) {
      const double v = renyi_gaussian_linear(RenyiOrder(a), p) / a;  // D_a itself
      REQUIRE(v >= prev - 1e-12);
      prev = v;
    }
  }
  CHECK_THROWS_AS(RenyiOrder(1.0), DomainError);
  CHECK_THROWS_AS(RenyiOrder(0.5), DomainError);
}

TEST_CASE("tilted Gaussian prior follows the analytic family") {
  const double s2 = 1.3, sd = std::sqrt(s2);
  const UniformGrid g(-8 * sd, 8 * sd, 4097);
  const auto base = GridFunction::sample(g, [&](double t) { return oracle::gaussian_pdf(t, s2); });
  for (double beta : {0.5, 1.0, 2.0, 4.0}) {
    const auto tilt = tilt_prior(base, beta);
    const auto q = tilt.density();
    CHECK(integrate(q) == doctest::Approx(1.0).epsilon(1e-6));
    const double var = oracle::simpson(
        [&](double t) {
          const auto i = static_cast<std::size_t>(std::lround((t - g.lo) / g.step()));
          return t * t * q.values[std::min(i, g.n - 1)];
        },
        g.lo, g.hi, 4096);
    CHECK(var == doctest::Approx(s2 / beta).epsilon(1e-4));
    CHECK(tilt.fisher_info == doctest::Approx(beta / s2).epsilon(1e-4));
    const double kl = 0.5 * (1.0 / beta + std::log(beta) - 1.0);
    CHECK(tilt.kl_to_base() == doctest::Approx(kl).epsilon(1e-4).scale(1e-9));
  }
  CHECK(tilt_prior(base, 1.0).kl_to_base() == doctest::Approx(0.0).scale(1e-9));
  CHECK_THROWS_AS((void)tilt_prior(base, 0.0), DomainError);
}

TEST_CASE("adaptive tilt of a log-density stays resolved for wide tilts") {
  const double s2 = 2.0;
  for (double beta : {1e-3, 0.1, 1.0, 10.0}) {
    const auto tilt = tilt_prior(gaussian_log_density(s2), beta);
    CHECK(tilt.fisher_info == doctest::Approx(beta / s2).epsilon(1e-4));
    CHECK(tilt.kl_to_base() ==
          doctest::Approx(0.5 * (1.0 / beta + std::log(beta) - 1.0)).epsilon(1e-4).scale(1e-9));
    CHECK(tilt.boundary_regular);
  }
}

TEST_CASE("uniform prior tilts to itself") {
  for (double beta : {0.3, 1.0, 5.0}) {
    const auto tilt = tilt_prior(uniform_log_density(0.0, 1.0), beta);
    CHECK(tilt.kl_to_base() == doctest::Approx(0.0).scale(1e-6));
    CHECK(tilt.fisher_info == doctest::Approx(0.0).scale(1e-9));
    CHECK_FALSE(tilt.boundary_regular);
    for (double v : tilt.density().values) REQUIRE(v == doctest::Approx(1.0));
  }
}

TEST_CASE("raised-cosine Fisher information") {
  // int p'^2 / p = 4 pi^2 / L^2 for p = (1 - cos(2 pi t / L)) / L.
  const double len = 0.6;
  const auto tilt = tilt_prior(raised_cosine_log_density(0.2, 0.2 + len), 1.0, 8192);
  CHECK(tilt.fisher_info == doctest::Approx(4 * oracle::kPi * oracle::kPi / (len * len)).epsilon(1e-3));
  CHECK(tilt.boundary_regular);
}

TEST_CASE("Fisher information rejects interior zeros") {
  const UniformGrid g(0.0, 1.0, 101);
  auto f = GridFunction::sample(g, [](double t) { return std::abs(t - 0.5) < 0.05 ? 0.0 : 1.0; });
  CHECK_THROWS_AS((void)fisher_information(f), DomainError);
}
