#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "riskbound/bayes_bounds.hpp"
#include "riskbound/delay_design.hpp"
#include "riskbound/nonbayes_bounds.hpp"
#include "riskbound/phase_transition.hpp"
#include "riskbound/verify.hpp"

namespace py = pybind11;
using namespace riskbound;

namespace {

LogDensity named_prior(const std::string& name, double sigma2, double lo, double hi) {
  if (name == "gaussian") return gaussian_log_density(sigma2);
  if (name == "uniform") return uniform_log_density(lo, hi);
  if (name == "raised-cosine") return raised_cosine_log_density(lo, hi);
  throw std::invalid_argument("unknown prior '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_riskbound, m) {
  m.doc() = "Lower bounds on exponential moments of the quadratic estimation error";

  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
  py::register_exception<ConditioningError>(m, "ConditioningError", PyExc_RuntimeError);
  py::register_exception<ResolutionError>(m, "ResolutionError", PyExc_RuntimeError);

  py::class_<BoundValue>(m, "BoundValue")
      .def_readonly("value", &BoundValue::value)
      .def_property_readonly("status", [](const BoundValue& b) { return std::string(to_string(b.status)); })
      .def_property_readonly("argmax",
                             [](const BoundValue& b) {
                               py::dict d;
                               for (const auto& [k, v] : b.argmax) d[py::str(k)] = v;
                               return d;
                             })
      .def_readonly("diagnostics", &BoundValue::diagnostics)
      .def("__float__", [](const BoundValue& b) { return b.value; })
      .def("__repr__", [](const BoundValue& b) {
        return "BoundValue(" + std::to_string(b.value) + ", " + std::string(to_string(b.status)) + ")";
      });

  // Bayesian bounds.
  m.def(
      "linear_gaussian_min_lambda",
      [](double alpha, double sigma2, double es, double n0) {
        return linear_gaussian_min_lambda({sigma2, es, n0}, alpha);
      },
      py::arg("alpha"), py::arg("sigma2") = 1.0, py::arg("es") = 0.0, py::arg("n0") = 1.0);
  m.def("generic_bayes_bound", &generic_bayes_bound, py::arg("alpha"), py::arg("mse_lb"),
        py::arg("divergence"));
  m.def(
      "phase_bound",
      [](double alpha, double sigma2, double ex, double n0) {
        return maximize_linear_reference_bound(phase_reference_inputs(alpha, sigma2, ex, n0));
      },
      py::arg("alpha"), py::arg("sigma2"), py::arg("ex"), py::arg("n0") = 1.0);
  m.def("phase_bound_large_sigma", &phase_bound_large_sigma, py::arg("alpha"), py::arg("sigma2"),
        py::arg("ex_over_n0"));
  m.def(
      "tilted_prior_bound",
      [](const std::string& prior, double alpha, double es_over_n0, double corr, double sigma2,
         double lo, double hi) {
        return maximize_tilted_prior_bound(named_prior(prior, sigma2, lo, hi), alpha, es_over_n0, corr);
      },
      py::arg("prior"), py::arg("alpha"), py::arg("es_over_n0") = 0.0, py::arg("corr") = 0.0,
      py::arg("sigma2") = 1.0, py::arg("lo") = 0.0, py::arg("hi") = 1.0);
  m.def(
      "alpha_c_upper",
      [](const std::string& prior, double sigma2, double lo, double hi) {
        const auto r = alpha_c_upper(named_prior(prior, sigma2, lo, hi));
        return py::dict(py::arg("value") = r.value, py::arg("beta0") = r.beta0,
                        py::arg("tolerance") = r.tolerance, py::arg("found_beta0") = r.found_beta0);
      },
      py::arg("prior"), py::arg("sigma2") = 1.0, py::arg("lo") = 0.0, py::arg("hi") = 1.0);
  m.def("ww_rect_delay_bound", &ww_rect_delay_bound, py::arg("alpha"), py::arg("gamma"),
        py::arg("tau"));
  m.def(
      "lpcb_bound",
      [](double alpha, double beta, double sigma2, double sigma2_q, double es, double ex, double n0,
         double q, double horizon) {
        return lpcb_bound(alpha, beta, {sigma2, sigma2_q, es, ex, n0, q, horizon});
      },
      py::arg("alpha"), py::arg("beta"), py::arg("sigma2") = 0.5, py::arg("sigma2_q") = 0.5,
      py::arg("es") = 0.0, py::arg("ex") = 0.0, py::arg("n0") = 1.0, py::arg("q") = 0.0,
      py::arg("horizon") = 1.0);
  m.def(
      "lpcb_sup",
      [](double alpha, double sigma2, double sigma2_q, double es, double ex, double n0, double q,
         double horizon) {
        return lpcb_sup({sigma2, sigma2_q, es, ex, n0, q, horizon}, alpha);
      },
      py::arg("alpha"), py::arg("sigma2") = 0.5, py::arg("sigma2_q") = 0.5, py::arg("es") = 0.0,
      py::arg("ex") = 0.0, py::arg("n0") = 1.0, py::arg("q") = 0.0, py::arg("horizon") = 1.0);

  // Delay design.
  m.def(
      "solve_reference_ode",
      [](const std::vector<double>& x, double t_end, double lam, double n0) {
        const UniformGrid g(0.0, t_end, x.size());
        return solve_reference_ode({GridFunction(g, x), lam, n0}).values;
      },
      py::arg("x"), py::arg("horizon"), py::arg("lam"), py::arg("n0") = 1.0);
  m.def(
      "delay_nu_bound",
      [](double alpha, double omega0, double ex, double n0, double lo, double hi) {
        return maximize_nu_bound(raised_cosine_log_density(lo, hi), alpha, omega0, ex, n0);
      },
      py::arg("alpha"), py::arg("omega0"), py::arg("ex"), py::arg("n0") = 1.0, py::arg("lo") = 0.25,
      py::arg("hi") = 0.75);

  // Non-Bayes bounds.
  m.def("scalar_linear_bound", &scalar_linear_bound, py::arg("alpha"), py::arg("es"), py::arg("n0"));
  m.def("scalar_ml_lambda", &scalar_ml_lambda, py::arg("alpha"), py::arg("es"), py::arg("n0"));
  m.def(
      "vector_linear_bound",
      [](const Eigen::MatrixXd& gamma, const Eigen::VectorXd& alpha, double es, double n0) {
        return vector_linear_bound({gamma, es, n0}, alpha);
      },
      py::arg("gamma"), py::arg("alpha"), py::arg("es") = 1.0, py::arg("n0") = 1.0);

  // Phase transition.
  m.def(
      "error_exponent",
      [](double a, std::size_t q_points, std::size_t t_points, std::size_t theta_points) {
        ExponentProblem p;
        p.a = a, p.q_points = q_points, p.t_points = t_points, p.theta_points = theta_points;
        const auto r = bernoulli_bayes_exponent(p);
        return py::dict(py::arg("exponent") = r.exponent, py::arg("q_star") = r.q_star,
                        py::arg("q") = r.q, py::arg("theta_hat") = r.theta_hat);
      },
      py::arg("a"), py::arg("q_points") = 201, py::arg("t_points") = 401,
      py::arg("theta_points") = 401);
  m.def(
      "magnetization_roots",
      [](double mu, double a) {
        const auto rs = magnetization_roots({mu, a});
        std::vector<double> ms;
        for (const auto& r : rs.roots) ms.push_back(r.m);
        return py::dict(py::arg("m") = ms, py::arg("dominant_m") = rs.dominant_m(),
                        py::arg("tie") = rs.dominant_tie);
      },
      py::arg("mu"), py::arg("a"));
  m.def(
      "classify_phase", [](double mu, double a) { return classify_phase(mu, a).text(); },
      py::arg("mu"), py::arg("a"));

  // Verification.
  m.def(
      "mc_lambda",
      [](const std::string& model, double alpha, std::size_t samples, std::uint64_t seed,
         double sigma2, double es, double n0) {
        MCRun run;
        if (model == "lin-gauss") {
          run.model = McModel::kLinearGaussian, run.estimator = McEstimator::kConditionalMean;
        } else if (model == "phase") {
          run.model = McModel::kPhaseTrivial, run.estimator = McEstimator::kZero;
        } else if (model == "nonbayes-linear") {
          run.model = McModel::kScalarMl, run.estimator = McEstimator::kMaximumLikelihood;
        } else {
          throw std::invalid_argument("unknown model '" + model + "'");
        }
        run.alpha = alpha, run.n_samples = samples, run.seed = seed;
        run.sigma2 = sigma2, run.es = es, run.n0 = n0;
        const auto r = mc_lambda(run);
        return py::dict(py::arg("lambda_hat") = r.lambda_hat, py::arg("se") = r.se,
                        py::arg("max_share") = r.max_share, py::arg("exact") = run.exact_lambda());
      },
      py::arg("model"), py::arg("alpha"), py::arg("samples") = 200000, py::arg("seed") = 1,
      py::arg("sigma2") = 1.0, py::arg("es") = 1.0, py::arg("n0") = 1.0);
  m.def(
      "bernoulli_exact_lambda",
      [](std::size_t n, double a, double theta) {
        return bernoulli_exact_lambda({n, a, theta, frequency_estimator});
      },
      py::arg("n"), py::arg("a"), py::arg("theta"));
  m.def(
      "certify",
      [](std::size_t samples, std::uint64_t seed) {
        py::list out;
        for (const auto& c : certify_default({samples, seed, 0}))
          out.append(py::dict(py::arg("name") = c.name, py::arg("alpha") = c.alpha,
                              py::arg("bound") = c.bound, py::arg("truth") = c.truth,
                              py::arg("se") = c.se, py::arg("passed") = c.passed));
        return out;
      },
      py::arg("samples") = 200000, py::arg("seed") = 1);
}
