#include "riskbound/nonbayes_bounds.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "riskbound/optimize.hpp"

namespace riskbound {

BoundValue scalar_linear_bound(double alpha, double es, double n0) {
  require(alpha > 0.0, "alpha must be positive");
  require(es > 0.0 && n0 > 0.0, "E_s and N0 must be positive");
  const double alpha_c = es / n0;
  auto b = BoundValue::from(alpha < alpha_c ? alpha * n0 / (2.0 * es) : kInf);
  b.with("theta_offset", 0.0).with("alpha_c", alpha_c);
  b.diagnostics = "assumes an unbiased estimator";
  return b;
}

double scalar_ml_lambda(double alpha, double es, double n0) {
  require(alpha >= 0.0, "alpha must be nonnegative");
  require(es > 0.0 && n0 > 0.0, "E_s and N0 must be positive");
  const double r = alpha * n0 / es;
  return r >= 1.0 ? kInf : -0.5 * std::log1p(-r);
}

// ---------------------------------------------------------------------------

void VectorLinearModel::validate() const {
  require(es > 0.0 && n0 > 0.0, "E_s and N0 must be positive");
  if (gamma.rows() == 0 || gamma.rows() != gamma.cols())
    throw MatrixError("Gamma must be a nonempty square matrix");
  for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
    if (std::abs(gamma(i, i) - 1.0) > 1e-9) throw MatrixError("Gamma must have unit diagonal");
    for (Eigen::Index j = 0; j < i; ++j)
      if (std::abs(gamma(i, j) - gamma(j, i)) > 1e-12) throw MatrixError("Gamma must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gamma);
  if (llt.info() != Eigen::Success) throw MatrixError("Gamma is not positive definite");
  const double cond = condition_number();
  if (!(cond <= 1e12))
    throw ConditioningError("Gamma condition number " + std::to_string(cond) + " exceeds 1e12");
}

double VectorLinearModel::condition_number() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gamma, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  if (ev.minCoeff() <= 0.0) return kInf;
  return ev.maxCoeff() / ev.minCoeff();
}

double VectorLinearModel::inverse_quad_form(const Eigen::VectorXd& alpha) const {
  if (alpha.size() != gamma.rows()) throw ShapeError("alpha dimension differs from Gamma");
  Eigen::LLT<Eigen::MatrixXd> llt(gamma);
  if (llt.info() != Eigen::Success) throw MatrixError("Gamma is not positive definite");
  return alpha.dot(llt.solve(alpha));
}

BoundValue vector_linear_bound(const VectorLinearModel& model, const Eigen::VectorXd& alpha) {
  model.validate();
  const double q = model.inverse_quad_form(alpha);
  const double edge = model.es / model.n0;
  auto b = BoundValue::from(q < edge ? model.n0 * q / (2.0 * model.es) : kInf);
  b.with("quad_form", q).with("condition", model.condition_number());
  b.diagnostics = "assumes an unbiased estimator";
  return b;
}

double critical_radius(const VectorLinearModel& model, const Eigen::VectorXd& direction) {
  model.validate();
  const double q = model.inverse_quad_form(direction);
  require(q > 0.0, "direction must be nonzero");
  return std::sqrt(model.es / (model.n0 * q));
}

double vector_ml_lambda(const VectorLinearModel& model, const Eigen::VectorXd& alpha) {
  model.validate();
  const double r = model.n0 / model.es * model.inverse_quad_form(alpha);
  return r >= 1.0 ? kInf : -0.5 * std::log1p(-r);
}

double vector_ml_lambda_det(const VectorLinearModel& model, const Eigen::VectorXd& alpha) {
  model.validate();
  if (alpha.size() != model.gamma.rows()) throw ShapeError("alpha dimension differs from Gamma");
  const Eigen::Index k = alpha.size();
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(k, k) -
                            model.n0 / model.es * alpha * alpha.transpose() * model.gamma.inverse();
  const double det = m.determinant();
  return det <= 0.0 ? kInf : -0.5 * std::log(det);
}

// ---------------------------------------------------------------------------

BoundValue nonlinear_bound(const CorrelationProfile& profile, double alpha, double theta,
                           const std::function<double(double)>& l_nb, double n0,
                           const NonlinearSearch& search) {
  require(alpha > 0.0 && n0 > 0.0 && profile.ex >= 0.0, "need alpha > 0, N0 > 0, E >= 0");
  require(static_cast<bool>(profile.rho) && static_cast<bool>(l_nb), "empty rho or L_NB");
  require(theta >= profile.lo && theta <= profile.hi, "theta outside the parameter range");
  require(search.grid_points >= 3 && search.probe_step > 0.0, "invalid search settings");

  auto value = [&](double tt) {
    return alpha * l_nb(tt) + alpha * (theta - tt) * (theta - tt) -
           2.0 * profile.ex * (1.0 - profile.rho(theta, tt)) / n0;
  };

  double lo = profile.lo, hi = profile.hi;
  std::ostringstream trace;
  if (profile.unbounded()) {
    double prev = value(theta);
    int stable = 0;
    double reach = search.probe_step;
    for (int j = 0; j <= search.max_doublings; ++j, reach *= 2.0) {
      double best = -kInf, best_t = theta;
      for (double sign : {-1.0, 1.0}) {
        const double tt = std::clamp(theta + sign * reach, profile.lo, profile.hi);
        const double v = value(tt);
        if (v > best) best = v, best_t = tt;
      }
      trace << (j ? " " : "probes:") << best_t << "=" << best;
      if (best > search.divergence_cap) {
        auto b = BoundValue::from(kInf);
        b.with("theta_tilde", best_t);
        b.diagnostics = trace.str() + "; exceeds divergence cap";
        return b;
      }
      stable = std::abs(best - prev) <= search.stable_tol * (1.0 + std::abs(best)) ? stable + 1 : 0;
      prev = best;
      if (stable >= 3) break;
    }
    lo = std::max(profile.lo, theta - reach);
    hi = std::min(profile.hi, theta + reach);
  }
  require(hi > lo, "parameter range is degenerate");

  auto sup_on = [&](std::size_t n) {
    auto p = opt::scan_then_golden_maximize(value, lo, hi, n, 1e-12 * (hi - lo));
    const double at_theta = value(theta);
    return at_theta > p.f ? opt::Point1D{theta, at_theta} : p;
  };
  const auto coarse = sup_on(search.grid_points);
  const auto fine = sup_on(2 * search.grid_points - 1);
  if (std::abs(coarse.f - fine.f) > search.stable_tol)
    throw ResolutionError("theta~ supremum did not stabilize under grid refinement");
  auto b = BoundValue::from(fine.f);
  b.with("theta_tilde", fine.x);
  b.diagnostics = trace.str().empty() ? "assumes an unbiased estimator" : trace.str();
  return b;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw ShapeError("matrix file: cannot parse '" + tok + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ShapeError("matrix file is empty");
  const std::size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw ShapeError("matrix file: ragged rows");
  Eigen::MatrixXd m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return m;
}

Eigen::MatrixXd read_matrix_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ShapeError("cannot open matrix file " + path);
  return read_matrix_csv(f);
}

}  // namespace riskbound
