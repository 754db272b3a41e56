#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "riskbound/bayes_bounds.hpp"

using namespace riskbound;

namespace {

// ln E exp{alpha e^2} for e ~ N(0, v), by quadrature.
double gaussian_log_moment(double alpha, double v) {
  const double sd = std::sqrt(v / (1.0 - 2.0 * alpha * v));
  return std::log(oracle::simpson(
      [&](double e) { return std::exp(alpha * e * e - e * e / (2 * v)) / std::sqrt(2 * oracle::kPi * v); },
      -30 * sd, 30 * sd, 60000));
}

// a D_a(Q || P) for P: theta ~ N(0, s2), signal of energy ex and DC content q;
// Q: theta ~ N(0, s2q), signal theta sqrt(es / T). By quadrature over theta.
double renyi_oracle(double a, double s2, double s2q, double es, double ex, double n0, double q,
                    double T) {
  const double sd = std::sqrt(std::max(s2, s2q));
  const double v = oracle::simpson(
      [&](double t) {
        const double d2 = ex - 2 * t * q * std::sqrt(es / T) + t * t * es;
        const double lq = -0.5 * std::log(2 * oracle::kPi * s2q) - t * t / (2 * s2q);
        const double lp = -0.5 * std::log(2 * oracle::kPi * s2) - t * t / (2 * s2);
        return std::exp(a * lq + (1 - a) * lp + a * (a - 1) * d2 / n0);
      },
      -60 * sd, 60 * sd, 400000);
  return std::log(v) / (a - 1);
}

// sup over a dense log grid of beta of the sigma2_q = sigma2, E_s = 0 form.
double lastbound_oracle(double alpha, double sigma2, double snr) {
  auto f = [&](double beta) {
    const double s = alpha - beta;
    if (1 - 2 * sigma2 * s <= 0) return oracle::kInf;
    return alpha / (2 * s) * std::log(1 / (1 - 2 * sigma2 * s)) - alpha * snr / beta;
  };
  // Log grids refined toward both ends of (1e-6 alpha, (1 - 1e-6) alpha).
  double best = -oracle::kInf;
  const int n = 200000;
  for (int i = 0; i <= n; ++i) {
    const double u = alpha * std::exp(std::log(1e-6) + std::log(0.5e6) * i / n);
    best = std::max({best, f(u), f(alpha - u)});
  }
  return best;
}

}  // namespace

TEST_CASE("generic bound arithmetic") {
  CHECK(generic_bayes_bound(1.0, 0.5, 0.2).value == doctest::Approx(0.3));
  CHECK(generic_bayes_bound(2.0, 0.25, 0.0).value == doctest::Approx(0.5));
  CHECK(generic_bayes_bound(1.0, 0.5, kInf).status == BoundStatus::kUseless);
  CHECK_THROWS_AS((void)generic_bayes_bound(-1.0, 0.5, 0.2), DomainError);
  CHECK_THROWS_AS((void)generic_bayes_bound(1.0, -0.5, 0.2), DomainError);
  CHECK_THROWS_AS((void)generic_bayes_bound(1.0, 0.5, -0.2), DomainError);

  const LinearGaussianModel m{0.8, 1.3, 0.7};
  for (double f = 0.02; f < 1.0; f += 0.02) {
    const double alpha = f * m.alpha_c();
    REQUIRE(generic_bayes_bound(alpha, m.mmse(), 0.0).value <=
            linear_gaussian_min_lambda(m, alpha).value);
  }
}

TEST_CASE("linear Gaussian exact optimum") {
  CHECK(LinearGaussianModel{0.5, 0.0, 1.0}.alpha_c() == 1.0);
  const LinearGaussianModel m{1.2, 0.9, 0.6};
  const double ac = m.alpha_c();
  CHECK(linear_gaussian_min_lambda(m, ac / 2).value == doctest::Approx(0.5 * std::log(2.0)));
  CHECK(linear_gaussian_min_lambda(m, ac).infinite());
  CHECK(linear_gaussian_min_lambda(m, 2 * ac).infinite());
  CHECK(m.estimator_gain() == doctest::Approx(m.sigma2 / (m.sigma2 * m.es + 0.5 * m.n0)));
  // The conditional-mean error is N(0, MMSE); its log moment by quadrature.
  for (double f : {0.1, 0.4, 0.7, 0.9}) {
    const double alpha = f * ac;
    CHECK(linear_gaussian_min_lambda(m, alpha).value ==
          doctest::Approx(gaussian_log_moment(alpha, m.mmse())).epsilon(1e-8));
  }
  CHECK(alpha_c_by_bisection([&](double a) { return linear_gaussian_min_lambda(m, a); }, 0.01,
                             10.0) == doctest::Approx(ac).epsilon(1e-4));
}

TEST_CASE("optimal reference signal") {
  SUBCASE("linear family collapses to its waveform") {
    NonlinearBayesModel m{[](double t, double th) { return th * std::sin(3 * t); },
                          UniformGrid(0, 1, 513), 1.0, 1.0, 1.0};
    const auto q = gaussian_grid_density(0.7);
    const auto s = optimal_reference_signal(m, q, 2.0);
    CHECK(energy(s) == doctest::Approx(2.0));
    const double norm = std::sqrt(energy(GridFunction::sample(m.time, [](double t) {
      return std::sin(3 * t);
    })));
    for (std::size_t i = 1; i < s.size(); i += 37)
      CHECK(s.values[i] == doctest::Approx(std::sqrt(2.0) * std::sin(3 * m.time.at(i)) / norm));
  }
  SUBCASE("phase modulation: -sin waveform and closed-form correlation energy") {
    for (double s2q : {0.3, 1.0, 2.5}) {
      const auto m = phase_modulation_model(1.0, 1.5, 1.0);
      const auto q = gaussian_grid_density(s2q);
      CHECK(correlation_energy(m, q) ==
            doctest::Approx(1.5 * s2q * s2q * std::exp(-s2q)).epsilon(1e-6));
      const auto s = optimal_reference_signal(m, q, 1.0);
      const double omega = 2 * oracle::kPi * 8;
      for (std::size_t i = 0; i < s.size(); i += 97)
        CHECK(s.values[i] ==
              doctest::Approx(-std::sqrt(2.0) * std::sin(omega * m.time.at(i))).scale(1.0).epsilon(1e-6));
    }
  }
  SUBCASE("beats random equal-energy signals") {
    const double c1 = oracle::uniform(0.5, 2), c2 = oracle::uniform(-1, 1);
    NonlinearBayesModel m{[&](double t, double th) {
                            return std::cos(c1 * t * (1 + 0.3 * th)) + c2 * std::sin(th + t);
                          },
                          UniformGrid(0, 2, 257), 1.0, 1.0, 1.0};
    const auto q = gaussian_grid_density(0.5);
    const auto g = correlation_waveform(m, q);
    const auto s = optimal_reference_signal(m, q, 1.0);
    auto inner = [&](const GridFunction& a) {
      std::vector<double> p(a.size());
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = a.values[i] * g.values[i];
      return trapezoid(p, g.grid.step());
    };
    const double best = inner(s);
    for (int k = 0; k < 50; ++k) {
      const double a0 = oracle::uniform(-1, 1), a1 = oracle::uniform(-1, 1),
                   a2 = oracle::uniform(-1, 1), w = oracle::uniform(0, 6);
      auto r = GridFunction::sample(
          m.time, [&](double t) { return a0 + a1 * std::cos(w * t) + a2 * std::sin(2 * w * t); });
      const double e = energy(r);
      for (double& v : r.values) v /= std::sqrt(e);
      REQUIRE(inner(r) <= best + 1e-12);
    }
  }
  SUBCASE("vanishing correlation is rejected") {
    NonlinearBayesModel m{[](double t, double) { return std::sqrt(2.0) * std::cos(t); },
                          UniformGrid(0, oracle::kPi, 257), 1.0, 1.0, 1.0};
    CHECK_THROWS_AS((void)optimal_reference_signal(m, gaussian_grid_density(1.0), 1.0),
                    DomainError);
  }
  SUBCASE("energy validation") {
    auto m = phase_modulation_model(1.0, 1.0, 1.0);
    CHECK_NOTHROW(m.validate());
    m.ex = 1.2;
    CHECK_THROWS_AS(m.validate(), DomainError);
  }
}

TEST_CASE("Gaussian linear reference bound") {
  const double alpha = 0.3, s2 = 1.4, ex = 0.8, n0 = 1.1;
  const auto in = phase_reference_inputs(alpha, s2, ex, n0);

  SUBCASE("lambda = 0") {
    for (double s2q : {0.5, 1.4, 3.0})
      CHECK(linear_reference_bound(in, s2q, 0.0).value ==
            doctest::Approx(alpha * s2q - gaussian_kl({s2, s2q}) - ex / n0));
  }
  SUBCASE("sigma2_q = sigma2 with the closed lambda") {
    const double e = std::exp(-s2);
    const double expected =
        alpha * s2 / (1 + 2 * ex * s2 * e / n0) - (ex / n0) * (1 - s2 * e);
    CHECK(linear_reference_bound_auto(in, s2).value == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("optimizers dominate random probes and reproduce their argmax") {
    const auto best = maximize_linear_reference_bound(in);
    const auto best_auto = maximize_auto_lambda_bound(in);
    for (int k = 0; k < 100; ++k) {
      const double s2q = std::exp(oracle::uniform(std::log(1e-3), std::log(1e3)));
      const double lam = std::exp(oracle::uniform(std::log(1e-6), std::log(1e3)));
      REQUIRE(linear_reference_bound(in, s2q, lam).value <= best.value + 1e-9);
      REQUIRE(linear_reference_bound_auto(in, s2q).value <= best_auto.value + 1e-9);
    }
    CHECK(best.value >= best_auto.value - 1e-9);
    const auto again = linear_reference_bound(in, *best.arg("sigma2_q"), *best.arg("lambda"));
    CHECK(again.value == doctest::Approx(best.value).epsilon(1e-9));
    const auto lam_only = maximize_lambda(in, 2.0);
    for (double lam = 0.0; lam < 50.0; lam += 0.05)
      REQUIRE(linear_reference_bound(in, 2.0, lam).value <= lam_only.value + 1e-9);
  }
  SUBCASE("numerical correlation energy agrees with the closed form") {
    const auto model = phase_modulation_model(s2, ex, n0);
    for (double s2q : {0.4, 1.0, 2.0})
      CHECK(nonlinear_linear_ref_bound(model, alpha, s2q, 0.7).value ==
            doctest::Approx(linear_reference_bound(in, s2q, 0.7).value).epsilon(1e-6));
  }
}

TEST_CASE("large-sigma phase bound") {
  const double s2 = 25.0, snr = 0.4;
  CHECK(phase_bound_large_sigma(1 / (2 * s2), s2, snr).infinite());
  CHECK(phase_bound_large_sigma(0.03, s2, snr).infinite());
  CHECK(phase_bound_large_sigma(1 / (4 * s2), s2, snr).value ==
        doctest::Approx(0.5 * std::log(2.0) - snr));
  const auto model = phase_modulation_model(s2, snr, 1.0);
  for (double f : {0.1, 0.5, 0.9}) {
    const double alpha = f / (2 * s2);
    const double s2q = s2 / (1 - 2 * alpha * s2);
    const auto in = reference_inputs(model, alpha);
    const double exact = linear_reference_bound_auto(in, s2q).value;
    CHECK(phase_bound_large_sigma(alpha, s2, snr).value == doctest::Approx(exact).epsilon(1e-3));
  }
}

TEST_CASE("tilted-prior bound") {
  const double s2 = 0.8, alpha = 0.4, esn = 0.3;
  const auto prior = gaussian_log_density(s2);
  SUBCASE("identity tilt has no divergence term") {
    const auto b = tilted_prior_bound(prior, alpha, 1.0, esn, 0.0);
    CHECK(*b.arg("kl") == doctest::Approx(0.0).scale(1e-8));
    CHECK(b.value == doctest::Approx(alpha / (1 / s2 + 2 * esn)).epsilon(1e-5));
  }
  SUBCASE("Gaussian closed form across beta") {
    for (double beta : {0.05, 0.3, 1.0, 3.0}) {
      const double expected =
          alpha / (beta / s2 + 2 * esn) - 0.5 * (1 / beta + std::log(beta) - 1) - 0.1;
      CHECK(tilted_prior_bound(prior, alpha, beta, esn, 0.1).value ==
            doctest::Approx(expected).epsilon(1e-4));
    }
    const auto best = maximize_tilted_prior_bound(prior, alpha, esn, 0.1);
    const auto probe = oracle::zoom_max(
        [&](double lb) {
          const double beta = std::exp(lb);
          return alpha / (beta / s2 + 2 * esn) - 0.5 * (1 / beta + std::log(beta) - 1) - 0.1;
        },
        std::log(1e-4), std::log(1e2));
    CHECK(best.value == doctest::Approx(probe.value).epsilon(1e-4));
  }
  SUBCASE("critical risk factor from the beta sweep") {
    for (double v : {0.5, 2.0}) {
      const auto est = alpha_c_upper(gaussian_log_density(v));
      CHECK(est.found_beta0);
      CHECK(est.value == doctest::Approx(1 / (2 * v)).epsilon(1e-3));
      CHECK(est.tolerance < 1e-3);
    }
    const auto uni = alpha_c_upper(uniform_log_density(0.0, 1.0));
    CHECK_FALSE(uni.found_beta0);
    CHECK(uni.value == kInf);
    CHECK_FALSE(uni.diagnostics.empty());
  }
  SUBCASE("non-regular prior is flagged") {
    CHECK(tilted_prior_bound(uniform_log_density(0.0, 1.0), alpha, 1.0, esn, 0.0).status ==
          BoundStatus::kUseless);
  }
  CHECK_THROWS_AS((void)tilted_prior_bound(prior, alpha, 0.0, esn, 0.0), DomainError);
}

TEST_CASE("Weiss-Weinstein delay bound and its windows") {
  const auto b = ww_rect_delay_bound(1.0, 1.0, 1.0);
  CHECK(b.value == doctest::Approx(0.2922).epsilon(1e-4));
  CHECK(*b.arg("tau_q") == doctest::Approx(1.1895).epsilon(1e-4));
  CHECK(b.status == BoundStatus::kFinite);

  // tau~* from direct minimization of the objective over tau~ >= tau.
  auto value_at = [](double alpha, double gamma, double tau) {
    return oracle::zoom_min(
               [&](double tq) {
                 return alpha * 0.324 * tq * tq / (gamma * gamma) -
                        2 * gamma * (1 - std::sqrt(tau / tq));
               },
               tau, 50 * tau)
        .value;
  };
  for (double alpha : {0.5, 1.0, 3.0})
    for (double tau : {0.5, 1.0, 2.0}) {
      const double scale = std::cbrt(alpha * tau * tau);
      const double g0 = oracle::bisect([&](double g) { return value_at(alpha, g, tau); },
                                       0.9 * scale, 5 * scale);
      CHECK(g0 / scale == doctest::Approx(1.2552).epsilon(1e-3));
      CHECK(ww_rect_delay_bound(alpha, g0, tau).value == doctest::Approx(0.0).scale(1e-3));
      // Edge of applicability: the objective's slope at tau~ = tau vanishes.
      const double g1 = oracle::bisect(
          [&](double g) { return 2 * alpha * 0.324 * tau / (g * g) - g / tau; }, 0.1 * scale,
          5 * scale);
      CHECK(g1 / scale == doctest::Approx(0.8654).epsilon(1e-3));
      CHECK(*ww_rect_delay_bound(alpha, g1 * (1 + 1e-9), tau).arg("tau_q") ==
            doctest::Approx(tau).epsilon(1e-3));
      CHECK(ww_rect_delay_bound(alpha, 0.8 * g1, tau).status == BoundStatus::kOutOfWindow);
    }
  CHECK(ww_applicability_coefficient() == doctest::Approx(0.8654).epsilon(1e-3));
  CHECK(ww_nontrivial_coefficient() == doctest::Approx(1.2552).epsilon(1e-3));
}

TEST_CASE("logarithmic probability comparison bound") {
  SUBCASE("five-term form matches the Renyi quadrature") {
    const LpcbModels m{0.9, 0.6, 0.4, 1.2, 1.5, 0.3, 2.0};
    const double alpha = 0.9;
    for (double beta : {0.45, 0.6, 0.8}) {
      const double s = alpha - beta;
      const double ac = 1 / (2 * m.sigma2_q) + m.es / m.n0;
      const double expected = alpha / s * (-0.5 * std::log(1 - s / ac)) -
                              renyi_oracle(alpha / beta, m.sigma2, m.sigma2_q, m.es, m.ex, m.n0,
                                           m.q_const, m.horizon);
      CHECK(lpcb_bound(alpha, beta, m).value == doctest::Approx(expected).epsilon(1e-6));
    }
    // Large orders: 1 - 2 A sigma2 <= 0 and the Renyi term is infinite.
    const QuadMgfCoeffs c = renyi_mgf_coeffs(
        RenyiOrder(alpha / 0.05), {m.sigma2, m.sigma2_q, m.es, m.ex, m.n0, m.q_const, m.horizon});
    REQUIRE(c.diverges());
    CHECK(lpcb_bound(alpha, 0.05, m).status == BoundStatus::kUseless);
  }
  SUBCASE("supremum matches a dense beta grid") {
    for (double snr : {0.001, 0.01, 0.1})
      for (double alpha : {0.2, 0.6, 0.95}) {
        const LpcbModels m{0.5, 0.5, 0.0, snr, 1.0, 0.0, 1.0};
        const double sup = lpcb_sup(m, alpha).value;
        const double ref = lastbound_oracle(alpha, 0.5, snr);
        CHECK(sup >= ref - 1e-9);
        CHECK(sup == doctest::Approx(ref).epsilon(1e-6));
        for (int i = 0; i < 200; ++i) {
          const double beta = alpha * (1e-6 + (1 - 2e-6) * i / 199.0);
          REQUIRE(lpcb_bound(alpha, beta, m).value <= sup + 1e-12);
        }
      }
  }
  SUBCASE("divergent first term past the reference threshold") {
    const double s2 = 0.5, eps = 0.1;
    const LpcbModels m{s2, s2, 0.0, 0.01, 1.0, 0.0, 1.0};
    CHECK(lpcb_bound((1 + eps) / (2 * s2), eps / (2 * s2), m).infinite());
  }
  SUBCASE("split limits") {
    const LpcbModels m{0.7, 0.5, 0.2, 0.3, 1.0, 0.0, 1.0};
    const double alpha = 0.6;
    // beta -> alpha: the Kullback-Leibler bound alpha mmse_Q - D(Q || P).
    const double mmse_q = 1 / (2 * (1 / (2 * m.sigma2_q) + m.es / m.n0));
    const double kl = gaussian_kl({m.sigma2, m.sigma2_q}) + (m.ex + m.sigma2_q * m.es) / m.n0;
    CHECK(lpcb_bound(alpha, alpha * (1 - 1e-7), m).value ==
          doctest::Approx(alpha * mmse_q - kl).epsilon(1e-5));
    // beta -> 0 with Q = P-prior and E_s = 0: the first term tends to the prior-only optimum.
    const LpcbModels z{0.7, 0.7, 0.0, 0.0, 1.0, 0.0, 1.0};
    CHECK(lpcb_bound(alpha, 1e-9, z).value ==
          doctest::Approx(0.5 * std::log(1 / (1 - 2 * 0.7 * alpha))).epsilon(1e-6));
  }
  CHECK_THROWS_AS((void)lpcb_bound(0.5, 0.5, LpcbModels{}), DomainError);
  CHECK_THROWS_AS((void)lpcb_bound(0.5, 0.0, LpcbModels{}), DomainError);
}

TEST_CASE("Fig. 1 curve properties") {
  const std::vector<double> snrs{0.001, 0.01, 0.1};
  std::vector<std::vector<double>> curves;
  for (double snr : snrs) {
    const LpcbModels m{0.5, 0.5, 0.0, snr, 1.0, 0.0, 1.0};
    std::vector<double> c;
    for (int i = 1; i <= 99; ++i) c.push_back(lpcb_sup(m, i / 100.0).value);
    curves.push_back(c);
  }
  for (const auto& c : curves)
    for (std::size_t i = 1; i < c.size(); ++i) REQUIRE(c[i] >= c[i - 1] - 1e-12);
  for (std::size_t i = 0; i < curves[0].size(); ++i) {
    REQUIRE(curves[0][i] > curves[1][i]);
    REQUIRE(curves[1][i] > curves[2][i]);
  }
}

TEST_CASE("iterated chain") {
  const double n0 = 1.0, T = 1.0, alpha = 0.8;
  const GaussianAwgnModel P{0.9, NonlinearSignal{0.2, 0.1}};
  const GaussianAwgnModel Q{0.6, DcLinearSignal{0.3}};
  const auto renyi = awgn_renyi_evaluator({n0, T});
  const LpcbModels m{0.9, 0.6, 0.3, 0.2, n0, 0.1, T};

  SUBCASE("two steps with a vanishing second split reproduce the single bound") {
    for (double beta : {0.5, 0.7}) {
      const auto chain = iterated_lpcb({{beta, 1e-12}, {P, Q}}, alpha, n0, renyi);
      CHECK(chain.value == doctest::Approx(lpcb_bound(alpha, beta, m).value).epsilon(1e-6));
    }
  }
  SUBCASE("one step with a vanishing split is the exact linear optimum") {
    const auto chain = iterated_lpcb({{1e-12}, {Q}}, alpha, n0, renyi);
    CHECK(chain.value ==
          doctest::Approx(linear_gaussian_min_lambda({0.6, 0.3, n0}, alpha).value).epsilon(1e-9));
  }
  SUBCASE("three-step ladder versus the direct bound") {
    const double direct = lpcb_sup(m, alpha).value;
    double best3 = -kInf;
    for (int k = 0; k < 4000; ++k) {
      const double s2m = std::exp(oracle::uniform(std::log(0.1), std::log(3.0)));
      const double b1 = oracle::uniform(0.0, alpha), b2 = oracle::uniform(0.0, alpha - b1);
      const double b3 = oracle::uniform(0.0, alpha - b1 - b2);
      const GaussianAwgnModel M{s2m, NonlinearSignal{0.2, 0.1}};
      const auto v = iterated_lpcb({{b1, b2, b3}, {P, M, Q}}, alpha, n0, renyi);
      if (v.status == BoundStatus::kFinite) best3 = std::max(best3, v.value);
    }
    if (best3 > direct)
      MESSAGE("ladder improves the direct bound: " << best3 << " > " << direct);
    else
      MESSAGE("no improving ladder found; best " << best3 << " vs direct " << direct);
    CHECK(std::isfinite(best3));
  }
  CHECK_THROWS_AS((void)iterated_lpcb({{0.5, 0.4}, {P, Q}}, alpha, n0, renyi), DomainError);
}

TEST_CASE("every bound stays below the linear Gaussian optimum") {
  const double s2 = 0.9, es = 0.7, n0 = 1.2;
  const LinearGaussianModel lin{s2, es, n0};
  const GaussianAwgnModel P{s2, DcLinearSignal{es}};
  const auto renyi = awgn_renyi_evaluator({n0, 1.0});
  const auto prior = gaussian_log_density(s2);
  for (int k = 0; k < 300; ++k) {
    const double alpha = oracle::uniform(0.01, 0.99) * lin.alpha_c();
    const double exact = linear_gaussian_min_lambda(lin, alpha).value;
    // Jensen / Kullback-Leibler with a linear Gaussian reference.
    const double s2q = std::exp(oracle::uniform(-3, 3)), esq = oracle::uniform(0, 3);
    const LinearGaussianModel ref{s2q, esq, n0};
    const double kl = gaussian_kl({s2, s2q}) +
                      s2q * (std::sqrt(es) - std::sqrt(esq)) * (std::sqrt(es) - std::sqrt(esq)) / n0;
    REQUIRE(generic_bayes_bound(alpha, ref.mmse(), kl).value <= exact + 1e-9);
    // Renyi chain P -> Q.
    const double beta = oracle::uniform(0.0, alpha);
    const auto c = iterated_lpcb({{beta, 1e-12}, {P, GaussianAwgnModel{s2q, DcLinearSignal{esq}}}},
                                 alpha, n0, renyi);
    if (c.status != BoundStatus::kUseless) REQUIRE(c.value <= exact + 1e-9);
    // Tilted prior with the true signal.
    if (k % 10 == 0) {
      const double b = std::exp(oracle::uniform(-4, 2));
      REQUIRE(tilted_prior_bound(prior, alpha, b, es / n0, 0.0).value <= exact + 1e-6);
    }
  }
}

TEST_CASE("bounds are nondecreasing in alpha") {
  const auto prior = gaussian_log_density(1.0);
  double prev_ref = -kInf, prev_tilt = -kInf, prev_lpcb = -kInf;
  const LpcbModels m{0.5, 0.5, 0.0, 0.05, 1.0, 0.0, 1.0};
  for (double alpha = 0.02; alpha < 0.5; alpha += 0.02) {
    const double r = maximize_linear_reference_bound(phase_reference_inputs(alpha, 1.0, 0.5, 1.0)).value;
    const double t = tilted_prior_bound(prior, alpha, 0.7, 0.2, 0.05).value;
    const double l = lpcb_sup(m, alpha).value;
    REQUIRE(r >= prev_ref - 1e-9);
    REQUIRE(t >= prev_tilt);
    REQUIRE(l >= prev_lpcb - 1e-12);
    prev_ref = r;
    prev_tilt = t;
    prev_lpcb = l;
  }
}
