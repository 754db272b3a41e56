#include "riskbound/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include "riskbound/bayes_bounds.hpp"
#include "riskbound/delay_design.hpp"
#include "riskbound/nonbayes_bounds.hpp"
#include "riskbound/parallel.hpp"
#include "riskbound/phase_transition.hpp"
#include "riskbound/verify.hpp"

namespace riskbound::cli {
namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct VerifyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw UsageError("cannot parse number '" + raw + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

}  // namespace

std::vector<double> parse_sweep(const std::string& spec, bool log) {
  if (trim(spec).empty()) throw UsageError("empty value");
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw UsageError("sweep must be start:stop:steps, got '" + spec + "'");
    const double lo = parse_number(parts[0]), hi = parse_number(parts[1]);
    const double steps_d = parse_number(parts[2]);
    if (!(steps_d >= 2.0) || steps_d != std::floor(steps_d))
      throw UsageError("sweep steps must be an integer >= 2");
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw UsageError("sweep ends must be finite");
    if (log && !(lo > 0.0 && hi > 0.0)) throw UsageError("log sweeps need positive ends");
    const auto steps = static_cast<std::size_t>(steps_d);
    std::vector<double> v(steps);
    for (std::size_t i = 0; i < steps; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(steps - 1);
      v[i] = log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo);
    }
    v.back() = hi;
    return v;
  }
  std::vector<double> v;
  for (const auto& p : split(spec, ',')) v.push_back(parse_number(p));
  return v;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    kv.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return kv;
}

namespace {

using Row = std::vector<std::string>;

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::size_t threads = 0;
};

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(Row r) { rows_.push_back(std::move(r)); }
  void add_all(std::vector<Row> rs) {
    for (auto& r : rs) rows_.push_back(std::move(r));
  }
  void write(std::ostream& out) const {
    auto line = [&](const Row& r) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
  }

 private:
  Row header_;
  std::vector<Row> rows_;
};

std::string num(double v) { return format_number(v); }

std::string arg_of(const BoundValue& b, std::string_view name) {
  const auto v = b.arg(name);
  return v ? num(*v) : "nan";
}

std::string value_of(const BoundValue& b) {
  return b.status == BoundStatus::kUseless ? "-inf" : num(b.value);
}

std::string status_of(const BoundValue& b) { return std::string(to_string(b.status)); }

// Options of one leaf subcommand, kept as raw strings until it runs.
class Command {
 public:
  Command(CLI::App* app, std::string columns) : app_(app) {
    app_->fallthrough();
    app_->footer("Columns: " + columns);
  }

  Command& number(const std::string& names, const std::string& key, std::string def,
                  const std::string& help) {
    values_[key] = std::move(def);
    app_->add_option(names, values_[key], help);
    return *this;
  }
  Command& text(const std::string& names, const std::string& key, std::string def,
                const std::string& help) {
    return number(names, key, std::move(def), help);
  }
  Command& flag(const std::string& names, const std::string& key, const std::string& help) {
    app_->add_flag(names, flags_[key], help);
    return *this;
  }

  [[nodiscard]] bool given(const std::string& key) const { return !values_.at(key).empty(); }
  [[nodiscard]] const std::string& raw(const std::string& key) const { return values_.at(key); }
  [[nodiscard]] bool is_set(const std::string& key) const { return flags_.at(key); }

  [[nodiscard]] std::vector<double> sweep(const std::string& key) const {
    if (!given(key)) throw UsageError("--" + key + " is required");
    const bool log = flags_.count("log") && flags_.at("log");
    return parse_sweep(values_.at(key), log);
  }
  [[nodiscard]] double scalar(const std::string& key) const {
    const auto v = sweep(key);
    if (v.size() != 1) throw UsageError("--" + key + " takes a single value");
    return v.front();
  }

  CLI::App* app() const { return app_; }
  std::function<void(Context&)> run;

 private:
  CLI::App* app_;
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> flags_;
};

std::vector<std::vector<double>> cartesian(const std::vector<std::vector<double>>& axes) {
  std::vector<std::vector<double>> out{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : out)
      for (double v : axis) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    out = std::move(next);
  }
  return out;
}

void sweep_table(Context& ctx, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& axes,
                 const std::function<Row(const std::vector<double>&)>& row) {
  const auto combos = cartesian(axes);
  Table t(header);
  t.add_all(parallel_map<Row>(combos.size(), ctx.threads,
                              [&](std::size_t i) { return row(combos[i]); }));
  t.write(ctx.out);
}

LogDensity make_prior(const Command& c) {
  const std::string kind = c.raw("prior");
  if (kind == "gaussian") return gaussian_log_density(c.scalar("sigma2"));
  if (kind == "uniform") return uniform_log_density(c.scalar("lo"), c.scalar("hi"));
  if (kind == "raised-cosine") return raised_cosine_log_density(c.scalar("lo"), c.scalar("hi"));
  throw UsageError("unknown prior '" + kind + "' (gaussian, uniform, raised-cosine)");
}

// ---------------------------------------------------------------------------
// bound

void add_bound_commands(CLI::App* bound, std::vector<std::unique_ptr<Command>>& cmds) {
  auto make = [&](const char* name, const char* help, const char* columns) -> Command& {
    cmds.push_back(std::make_unique<Command>(bound->add_subcommand(name, help), columns));
    cmds.back()->flag("--log", "log", "log-spaced start:stop:steps sweeps");
    return *cmds.back();
  };

  {
    auto& c = make("bayes-linear", "exact min Lambda_B for the linear Gaussian model",
                   "alpha,sigma2,es,n0,bound,alpha_c,gain,status");
    c.number("--alpha,--alpha-sweep", "alpha", "", "risk factor")
        .number("--sigma2", "sigma2", "1", "prior variance")
        .number("--es", "es", "1", "signal energy E_s")
        .number("--n0", "n0", "1", "noise density N0");
    c.run = [&c](Context& ctx) {
      sweep_table(ctx, {"alpha", "sigma2", "es", "n0", "bound", "alpha_c", "gain", "status"},
                  {c.sweep("alpha"), c.sweep("sigma2"), c.sweep("es"), c.sweep("n0")},
                  [](const std::vector<double>& p) {
                    const auto b = linear_gaussian_min_lambda({p[1], p[2], p[3]}, p[0]);
                    return Row{num(p[0]), num(p[1]), num(p[2]), num(p[3]), value_of(b),
                               arg_of(b, "alpha_c"), arg_of(b, "gain"), status_of(b)};
                  });
    };
  }
  {
    auto& c = make("bayes-phase", "phase modulation with a Gaussian linear reference model",
                   "alpha,sigma2,ex,n0,bound,sigma2_q,lambda,status");
    c.number("--alpha,--alpha-sweep", "alpha", "", "risk factor")
        .number("--sigma2", "sigma2", "1", "prior variance")
        .number("--ex", "ex", "1", "signal energy E_x")
        .number("--n0", "n0", "1", "noise density N0")
        .number("--sigma2q", "sigma2q", "", "reference prior variance (optimized if absent)")
        .number("--lambda", "lambda", "", "E_s / N0 of the reference (optimized if absent)")
        .text("--mode", "mode", "opt", "opt | auto | large-sigma");
    c.run = [&c](Context& ctx) {
      const std::string mode = c.raw("mode");
      if (mode != "opt" && mode != "auto" && mode != "large-sigma")
        throw UsageError("--mode must be opt, auto or large-sigma");
      const bool has_q = c.given("sigma2q"), has_l = c.given("lambda");
      if (mode != "opt" && has_l) throw UsageError("--lambda is only used with --mode opt");
      if (has_l && !has_q) throw UsageError("--lambda needs --sigma2q");
      const std::vector<double> s2q = has_q ? c.sweep("sigma2q") : std::vector<double>{0.0};
      const std::vector<double> lam = has_l ? c.sweep("lambda") : std::vector<double>{0.0};
      sweep_table(
          ctx, {"alpha", "sigma2", "ex", "n0", "bound", "sigma2_q", "lambda", "status"},
          {c.sweep("alpha"), c.sweep("sigma2"), c.sweep("ex"), c.sweep("n0"), s2q, lam},
          [&](const std::vector<double>& p) {
            const auto in = phase_reference_inputs(p[0], p[1], p[2], p[3]);
            BoundValue b;
            if (mode == "large-sigma")
              b = phase_bound_large_sigma(p[0], p[1], p[2] / p[3]);
            else if (mode == "auto")
              b = has_q ? linear_reference_bound_auto(in, p[4]) : maximize_auto_lambda_bound(in);
            else if (has_l)
              b = linear_reference_bound(in, p[4], p[5]);
            else if (has_q)
              b = maximize_lambda(in, p[4]);
            else
              b = maximize_linear_reference_bound(in);
            return Row{num(p[0]), num(p[1]), num(p[2]), num(p[3]), value_of(b),
                       arg_of(b, "sigma2_q"), arg_of(b, "lambda"), status_of(b)};
          });
    };
  }
  {
    auto& c = make("bayes-tilted", "tilted-prior Bayesian Cramer-Rao bound",
                   "alpha,beta,bound,fisher_info,kl,status | with --alpha-c: "
                   "alpha_c_upper,tolerance,found_beta0,diagnostics");
    c.number("--alpha,--alpha-sweep", "alpha", "", "risk factor")
        .number("--beta", "beta", "", "tilt exponent (optimized if absent)")
        .text("--prior", "prior", "gaussian", "gaussian | uniform | raised-cosine")
        .number("--sigma2", "sigma2", "1", "Gaussian prior variance")
        .number("--lo", "lo", "0", "support start (uniform, raised-cosine)")
        .number("--hi", "hi", "1", "support end (uniform, raised-cosine)")
        .number("--es-over-n0", "es_over_n0", "0", "reference E_s / N0")
        .number("--corr", "corr", "0", "path divergence term in nats")
        .flag("--alpha-c", "alpha_c", "report the alpha_c upper bound instead");
    c.run = [&c](Context& ctx) {
      const LogDensity prior = make_prior(c);
      if (c.is_set("alpha_c")) {
        const auto est = alpha_c_upper(prior);
        Table t({"alpha_c_upper", "tolerance", "found_beta0", "diagnostics"});
        std::string diag = est.diagnostics;
        for (char& ch : diag)
          if (ch == ',') ch = ';';
        t.add({num(est.value), num(est.tolerance), est.found_beta0 ? "1" : "0", diag});
        t.write(ctx.out);
        return;
      }
      const bool has_b = c.given("beta");
      sweep_table(ctx, {"alpha", "beta", "bound", "fisher_info", "kl", "status"},
                  {c.sweep("alpha"), has_b ? c.sweep("beta") : std::vector<double>{0.0},
                   c.sweep("es_over_n0"), c.sweep("corr")},
                  [&](const std::vector<double>& p) {
                    const auto b = has_b ? tilted_prior_bound(prior, p[0], p[1], p[2], p[3])
                                         : maximize_tilted_prior_bound(prior, p[0], p[2], p[3]);
                    return Row{num(p[0]), arg_of(b, "beta"), value_of(b),
                               arg_of(b, "fisher_info"), arg_of(b, "kl"), status_of(b)};
                  });
    };
  }
  {
    auto& c = make("bayes-delay", "delay estimation with the raised-cosine reference design",
                   "alpha,nu,beta,bound,status");
    c.number("--alpha,--alpha-sweep", "alpha", "", "risk factor")
        .number("--nu", "nu", "", "nu in [0, 1] (optimized if absent)")
        .number("--beta", "beta", "", "tilt exponent (optimized if absent)")
        .text("--prior", "prior", "raised-cosine", "gaussian | uniform | raised-cosine")
        .number("--sigma2", "sigma2", "0.01", "Gaussian prior variance")
        .number("--lo", "lo", "0.25", "delay window start")
        .number("--hi", "hi", "0.75", "delay window end")
        .number("--omega0", "omega0", std::to_string(2.0 * std::numbers::pi), "pulse frequency")
        .number("--ex", "ex", "1", "pulse energy E_x")
        .number("--n0", "n0", "1", "noise density N0");
    c.run = [&c](Context& ctx) {
      const LogDensity prior = make_prior(c);
      const bool has_nu = c.given("nu"), has_b = c.given("beta");
      if (has_b && !has_nu) throw UsageError("--beta needs --nu");
      sweep_table(ctx, {"alpha", "nu", "beta", "bound", "status"},
                  {c.sweep("alpha"), has_nu ? c.sweep("nu") : std::vector<double>{0.0},
                   has_b ? c.sweep("beta") : std::vector<double>{0.0}, c.sweep("omega0"),
                   c.sweep("ex"), c.sweep("n0")},
                  [&](const std::vector<double>& p) {
                    BoundValue b;
                    if (has_b)
                      b = nu_bound(prior, p[0], p[2], p[1], p[3], p[4], p[5]);
                    else if (has_nu && p[1] == 0.0)
                      b = nu_zero_bound(prior, p[0], p[4], p[5]);
                    else if (has_nu)
                      throw UsageError("--nu other than 0 needs --beta");
                    else
                      b = maximize_nu_bound(prior, p[0], p[3], p[4], p[5]);
                    return Row{num(p[0]), arg_of(b, "nu"), arg_of(b, "beta"), value_of(b),
                               status_of(b)};
                  });
    };
  }
  {
    auto& c = make("bayes-ww", "Weiss-Weinstein rectangular-pulse delay bound",
                   "alpha,gamma,tau,bound,tau_q,nontrivial,status");
    c.number("--alpha,--alpha-sweep", "alpha", "", "risk factor")
        .number("--gamma", "gamma", "", "E_x / N0")
        .number("--tau", "tau", "1", "pulse width");
    c.run = [&c](Context& ctx) {
      sweep_table(ctx, {"alpha", "gamma", "tau", "bound", "tau_q", "nontrivial", "status"},
                  {c.sweep("alpha"), c.sweep("gamma"), c.sweep("tau")},
                  [](const std::vector<double>& p) {
                    const auto b = ww_rect_delay_bound(p[0], p[1], p[2]);
                    return Row{num(p[0]), num(p[1]),  num(p[2]), value_of(b),
                               arg_of(b, "tau_q"), arg_of(b, "nontrivial"), status_of(b)};
                  });
    };
  }
  {
    auto& c = make("bayes-lpcb", "logarithmic probability comparison bound",
                   "alpha,snr,bound,beta,status");
    c.number("--alpha,--alpha-sweep", "alpha", "", "risk factor")
        .number("--snr", "snr", "", "E_x / N0 of the true model")
        .number("--sigma2", "sigma2", "0.5", "prior variance")
        .number("--sigma2q", "sigma2q", "", "reference prior variance (default: sigma2)")
        .number("--es", "es", "0", "reference DC energy E_s")
        .number("--n0", "n0", "1", "noise density N0")
        .number("--q", "q", "0", "DC content of x(t, theta)")
        .number("--horizon", "horizon", "1", "observation time T")
        .number("--beta", "beta", "", "split in (0, alpha) (optimized if absent)");
    c.run = [&c](Context& ctx) {
      const double s2 = c.scalar("sigma2");
      const double s2q = c.given("sigma2q") ? c.scalar("sigma2q") : s2;
      const double es = c.scalar("es"), n0 = c.scalar("n0");
      const double q = c.scalar("q"), horizon = c.scalar("horizon");
      const bool has_b = c.given("beta");
      sweep_table(ctx, {"alpha", "snr", "bound", "beta", "status"},
                  {c.sweep("snr"), c.sweep("alpha"),
                   has_b ? c.sweep("beta") : std::vector<double>{0.0}},
                  [&](const std::vector<double>& p) {
                    const LpcbModels m{s2, s2q, es, p[0] * n0, n0, q, horizon};
                    const auto b = has_b ? lpcb_bound(p[1], p[2], m) : lpcb_sup(m, p[1]);
                    return Row{num(p[1]), num(p[0]), value_of(b), arg_of(b, "beta"),
                               status_of(b)};
                  });
    };
  }
  {
    auto& c = make("nonbayes-linear", "scalar linear model, unbiased estimators",
                   "alpha,es,n0,bound,ml_lambda,alpha_c,status");
    c.number("--alpha,--alpha-sweep", "alpha", "", "risk factor")
        .number("--es", "es", "1", "signal energy E_s")
        .number("--n0", "n0", "1", "noise density N0");
    c.run = [&c](Context& ctx) {
      sweep_table(ctx, {"alpha", "es", "n0", "bound", "ml_lambda", "alpha_c", "status"},
                  {c.sweep("alpha"), c.sweep("es"), c.sweep("n0")},
                  [](const std::vector<double>& p) {
                    const auto b = scalar_linear_bound(p[0], p[1], p[2]);
                    return Row{num(p[0]), num(p[1]), num(p[2]), value_of(b),
                               num(scalar_ml_lambda(p[0], p[1], p[2])), arg_of(b, "alpha_c"),
                               status_of(b)};
                  });
    };
  }
  {
    auto& c = make("nonbayes-vector", "vector linear model with correlation matrix Gamma",
                   "scale,bound,ml_lambda,quad_form,critical_radius,status");
    c.text("--gamma", "gamma", "", "CSV file with the k x k matrix Gamma")
        .text("--alpha-vec", "alpha_vec", "", "direction, comma separated")
        .number("--scale", "scale", "1", "multiplier t of the direction")
        .number("--es", "es", "1", "common signal energy E_s")
        .number("--n0", "n0", "1", "noise density N0");
    c.run = [&c](Context& ctx) {
      if (!c.given("gamma") || !c.given("alpha_vec"))
        throw UsageError("--gamma and --alpha-vec are required");
      VectorLinearModel m{read_matrix_csv_file(c.raw("gamma")), c.scalar("es"), c.scalar("n0")};
      const auto dir = parse_sweep(c.raw("alpha_vec"));
      Eigen::VectorXd u(static_cast<Eigen::Index>(dir.size()));
      for (std::size_t i = 0; i < dir.size(); ++i) u(static_cast<Eigen::Index>(i)) = dir[i];
      const double radius = critical_radius(m, u);
      sweep_table(ctx, {"scale", "bound", "ml_lambda", "quad_form", "critical_radius", "status"},
                  {c.sweep("scale")}, [&](const std::vector<double>& p) {
                    const Eigen::VectorXd a = p[0] * u;
                    const auto b = vector_linear_bound(m, a);
                    return Row{num(p[0]), value_of(b), num(vector_ml_lambda(m, a)),
                               arg_of(b, "quad_form"), num(radius), status_of(b)};
                  });
    };
  }
  {
    auto& c = make("nonbayes-nonlinear", "nonlinear model through the correlation profile rho",
                   "alpha,theta,bound,theta_tilde,status");
    c.number("--alpha,--alpha-sweep", "alpha", "", "risk factor")
        .number("--theta", "theta", "0", "true parameter")
        .text("--profile", "profile", "gaussian",
              "gaussian: rho = exp(-c (d)^2) | phase: rho = cos(d), d = theta - theta~")
        .number("--c", "c", "1", "width constant of the gaussian profile")
        .number("--lo", "lo", "-inf", "parameter range start")
        .number("--hi", "hi", "inf", "parameter range end")
        .number("--lnb", "lnb", "0", "theta~-independent MSE lower bound L_NB")
        .number("--ex", "ex", "1", "signal energy E")
        .number("--n0", "n0", "1", "noise density N0");
    c.run = [&c](Context& ctx) {
      const std::string kind = c.raw("profile");
      const double width = c.scalar("c");
      CorrelationProfile prof;
      if (kind == "gaussian")
        prof.rho = [width](double t, double s) { return std::exp(-width * (t - s) * (t - s)); };
      else if (kind == "phase")
        prof.rho = [](double t, double s) { return std::cos(t - s); };
      else
        throw UsageError("--profile must be gaussian or phase");
      prof.ex = c.scalar("ex");
      prof.lo = c.scalar("lo");
      prof.hi = c.scalar("hi");
      const double lnb = c.scalar("lnb"), n0 = c.scalar("n0");
      sweep_table(ctx, {"alpha", "theta", "bound", "theta_tilde", "status"},
                  {c.sweep("alpha"), c.sweep("theta")}, [&](const std::vector<double>& p) {
                    const auto b = nonlinear_bound(
                        prof, p[0], p[1], [lnb](double) { return lnb; }, n0);
                    return Row{num(p[0]), num(p[1]), value_of(b), arg_of(b, "theta_tilde"),
                               status_of(b)};
                  });
    };
  }
}

// ---------------------------------------------------------------------------
// phase

ExponentProblem exponent_problem(const Command& c, double a, std::size_t threads) {
  ExponentProblem p;
  p.a = a;
  p.q_points = static_cast<std::size_t>(c.scalar("q_steps"));
  p.t_points = static_cast<std::size_t>(c.scalar("t_steps"));
  p.theta_points = static_cast<std::size_t>(c.scalar("theta_steps"));
  p.threads = threads;
  return p;
}

void add_phase_commands(CLI::App* phase, std::vector<std::unique_ptr<Command>>& cmds) {
  auto make = [&](const char* name, const char* help, const char* columns) -> Command& {
    cmds.push_back(std::make_unique<Command>(phase->add_subcommand(name, help), columns));
    cmds.back()->flag("--log", "log", "log-spaced start:stop:steps sweeps");
    return *cmds.back();
  };
  auto grids = [](Command& c) {
    c.number("--q-steps", "q_steps", "201", "q grid points")
        .number("--t-steps", "t_steps", "401", "t grid points")
        .number("--theta-steps", "theta_steps", "401", "theta grid points");
  };
  {
    auto& c = make("exponent", "Bernoulli error exponent E(a)", "a,E");
    c.number("--a,--a-sweep", "a", "", "normalized risk factor");
    grids(c);
    c.run = [&c](Context& ctx) {
      Table t({"a", "E"});
      for (double a : c.sweep("a"))
        t.add({num(a), num(error_exponent(exponent_problem(c, a, ctx.threads)))});
      t.write(ctx.out);
    };
  }
  {
    auto& c = make("estimator", "asymptotically optimal estimator curve", "q,theta_hat");
    c.number("--a", "a", "", "normalized risk factor");
    grids(c);
    c.run = [&c](Context& ctx) {
      const auto r = bernoulli_bayes_exponent(exponent_problem(c, c.scalar("a"), ctx.threads));
      Table t({"q", "theta_hat"});
      for (std::size_t i = 0; i < r.q.size(); ++i) t.add({num(r.q[i]), num(r.theta_hat[i])});
      t.write(ctx.out);
    };
  }
  {
    auto& c = make("roots", "Curie-Weiss magnetization roots", "mu,a,m,stable,dominant");
    c.number("--mu", "mu", "", "spin mean in (-1, 1)").number("--a", "a", "", "coupling scale");
    c.run = [&c](Context& ctx) {
      const auto combos = cartesian({c.sweep("mu"), c.sweep("a")});
      const auto sets = parallel_map<std::vector<Row>>(combos.size(), ctx.threads, [&](std::size_t i) {
        const double mu = combos[i][0], a = combos[i][1];
        const auto rs = magnetization_roots({mu, a});
        std::vector<Row> rows;
        for (std::size_t k = 0; k < rs.roots.size(); ++k)
          rows.push_back({num(mu), num(a), num(rs.roots[k].m), rs.roots[k].stable ? "1" : "0",
                          k == rs.dominant ? "1" : "0"});
        return rows;
      });
      Table t({"mu", "a", "m", "stable", "dominant"});
      for (const auto& s : sets) t.add_all(s);
      t.write(ctx.out);
    };
  }
  {
    auto& c = make("diagram", "Curie-Weiss phase diagram", "mu,a,label,dominant_m");
    c.number("--mu", "mu", "", "spin mean sweep").number("--a", "a", "", "coupling sweep");
    c.run = [&c](Context& ctx) {
      const auto rows = phase_diagram(c.sweep("mu"), c.sweep("a"), ctx.threads);
      Table t({"mu", "a", "label", "dominant_m"});
      for (const auto& r : rows)
        t.add({num(r.mu), num(r.a), r.label.text(), num(r.label.dominant_m)});
      t.write(ctx.out);
    };
  }
}

// ---------------------------------------------------------------------------
// verify

McModel parse_model(const std::string& s) {
  if (s == "lin-gauss") return McModel::kLinearGaussian;
  if (s == "phase") return McModel::kPhaseTrivial;
  if (s == "nonbayes-linear") return McModel::kScalarMl;
  throw UsageError("--model must be lin-gauss, phase or nonbayes-linear");
}

McEstimator parse_estimator(const std::string& s, McModel m) {
  if (s.empty())
    return m == McModel::kLinearGaussian ? McEstimator::kConditionalMean
           : m == McModel::kPhaseTrivial ? McEstimator::kZero
                                         : McEstimator::kMaximumLikelihood;
  if (s == "cond-mean") return McEstimator::kConditionalMean;
  if (s == "zero") return McEstimator::kZero;
  if (s == "ml") return McEstimator::kMaximumLikelihood;
  throw UsageError("--estimator must be cond-mean, zero or ml");
}

void add_verify_commands(CLI::App* verify, std::vector<std::unique_ptr<Command>>& cmds) {
  auto make = [&](const char* name, const char* help, const char* columns) -> Command& {
    cmds.push_back(std::make_unique<Command>(verify->add_subcommand(name, help), columns));
    cmds.back()->flag("--log", "log", "log-spaced start:stop:steps sweeps");
    return *cmds.back();
  };
  {
    auto& c = make("mc", "Monte Carlo exponential moment",
                   "model,estimator,alpha,n,seed,lambda_hat,se,max_share");
    c.text("--model", "model", "lin-gauss", "lin-gauss | phase | nonbayes-linear")
        .text("--estimator", "estimator", "", "cond-mean | zero | ml (model default)")
        .number("--alpha", "alpha", "", "risk factor")
        .number("--alpha-frac", "alpha_frac", "", "risk factor as a fraction of the threshold")
        .number("--samples", "samples", "1000000", "sample count")
        .number("--seed", "seed", "1", "master seed")
        .number("--batches", "batches", "20", "batch count for the standard error")
        .number("--sigma2", "sigma2", "1", "prior variance")
        .number("--es", "es", "1", "signal energy E_s")
        .number("--n0", "n0", "1", "noise density N0");
    c.run = [&c](Context& ctx) {
      if (c.given("alpha") == c.given("alpha_frac"))
        throw UsageError("give exactly one of --alpha and --alpha-frac");
      MCRun base;
      base.model = parse_model(c.raw("model"));
      base.estimator = parse_estimator(c.raw("estimator"), base.model);
      base.n_samples = static_cast<std::size_t>(c.scalar("samples"));
      base.batches = static_cast<std::size_t>(c.scalar("batches"));
      base.sigma2 = c.scalar("sigma2");
      base.es = c.scalar("es");
      base.n0 = c.scalar("n0");
      base.threads = ctx.threads;
      const bool frac = c.given("alpha_frac");
      Table t({"model", "estimator", "alpha", "n", "seed", "lambda_hat", "se", "max_share"});
      for (double seed : c.sweep("seed"))
        for (double a : c.sweep(frac ? "alpha_frac" : "alpha")) {
          MCRun run = base;
          run.seed = static_cast<std::uint64_t>(seed);
          run.alpha = frac ? a * run.threshold() : a;
          const auto r = mc_lambda(run);
          if (r.heavy_tail)
            ctx.err << "warning: max sample share " << num(r.max_share)
                    << " above 0.01; the standard error is not trustworthy\n";
          t.add({std::string(to_string(run.model)), std::string(to_string(run.estimator)),
                 num(run.alpha), std::to_string(run.n_samples), std::to_string(run.seed),
                 num(r.lambda_hat), num(r.se), num(r.max_share)});
        }
      t.write(ctx.out);
    };
  }
  {
    auto& c = make("bernoulli-exact", "exact finite-n Bernoulli exponential moment",
                   "n,a,theta,estimator,lambda,lambda_per_n,exponent");
    c.number("--n", "n", "", "sample size")
        .number("--a", "a", "", "normalized risk factor")
        .number("--theta", "theta", "", "true parameter")
        .text("--estimator", "estimator", "freq", "freq | asymptotic");
    c.run = [&c](Context& ctx) {
      const std::string kind = c.raw("estimator");
      if (kind != "freq" && kind != "asymptotic")
        throw UsageError("--estimator must be freq or asymptotic");
      Table t({"n", "a", "theta", "estimator", "lambda", "lambda_per_n", "exponent"});
      for (double nd : c.sweep("n"))
        for (double a : c.sweep("a"))
          for (double theta : c.sweep("theta")) {
            const auto n = static_cast<std::size_t>(nd);
            BernoulliExact spec{n, a, theta, frequency_estimator};
            double exponent = 0.0;
            if (kind == "freq") {
              exponent = nonbayes_ml_exponent(a, theta);
            } else {
              ExponentProblem p;
              p.a = a;
              p.threads = ctx.threads;
              std::vector<double> table(n + 1);
              parallel_for(n + 1, ctx.threads, [&](std::size_t k) {
                table[k] = asymptotic_estimator(static_cast<double>(k) / nd, p);
              });
              spec.estimator = [table](std::size_t k, std::size_t) { return table[k]; };
              const auto curve = bernoulli_bayes_exponent(p);
              exponent = estimator_exponent(a, theta, [&](double q) {
                const double pos = q * static_cast<double>(curve.q.size() - 1);
                const auto i = std::min(static_cast<std::size_t>(pos), curve.q.size() - 2);
                const double f = pos - static_cast<double>(i);
                return (1.0 - f) * curve.theta_hat[i] + f * curve.theta_hat[i + 1];
              });
            }
            const double lam = bernoulli_exact_lambda(spec);
            t.add({std::to_string(n), num(a), num(theta), kind, num(lam), num(lam / nd),
                   num(exponent)});
          }
      t.write(ctx.out);
    };
  }
  {
    auto& c = make("certify", "bound-versus-truth battery", "name,alpha,bound,truth,se,pass");
    c.text("--suite", "suite", "default", "battery name (default)")
        .number("--samples", "samples", "200000", "Monte Carlo samples per check")
        .number("--seed", "seed", "1", "master seed");
    c.run = [&c](Context& ctx) {
      if (c.raw("suite") != "default") throw UsageError("unknown suite '" + c.raw("suite") + "'");
      CertifyOptions opt;
      opt.samples = static_cast<std::size_t>(c.scalar("samples"));
      opt.seed = static_cast<std::uint64_t>(c.scalar("seed"));
      opt.threads = ctx.threads;
      const auto checks = certify_default(opt);
      Table t({"name", "alpha", "bound", "truth", "se", "pass"});
      std::size_t failed = 0;
      for (const auto& k : checks) {
        failed += k.passed ? 0 : 1;
        t.add({k.name, num(k.alpha), num(k.bound), num(k.truth), num(k.se), k.passed ? "1" : "0"});
      }
      t.write(ctx.out);
      ctx.err << "certify: " << checks.size() << " checks, " << failed << " violations\n";
      if (failed) throw VerifyFailure("bound violation in the certify battery");
    };
  }
}

int dispatch(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  // Config injection: keys not given on the command line become flags.
  std::vector<std::string> args;
  std::string config_path;
  for (std::size_t i = 0; i < args_in.size(); ++i) {
    const auto& a = args_in[i];
    if (a == "--config") {
      if (i + 1 >= args_in.size()) throw UsageError("--config needs a file");
      config_path = args_in[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      config_path = a.substr(9);
    } else {
      args.push_back(a);
    }
  }
  std::vector<std::pair<std::string, std::string>> config;
  if (!config_path.empty()) {
    std::set<std::string> given;
    for (const auto& a : args)
      if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));
    for (auto& [k, v] : read_config(config_path)) {
      if (given.count(k)) continue;
      args.push_back("--" + k + "=" + v);
      config.emplace_back(k, v);
    }
  }

  CLI::App app{"Lower bounds on exponential moments of the squared estimation error", "riskbound"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  std::string output;
  app.add_option("--threads", threads, "worker cap (default: RISKBOUND_THREADS or all cores)");
  app.add_option("-o,--output", output, "write the table (or script) to this file");
  app.set_config();  // disable CLI11's own config handling
  std::vector<std::unique_ptr<Command>> cmds;

  auto* bound = app.add_subcommand("bound", "evaluate or optimize a bound");
  bound->require_subcommand(1)->fallthrough();
  add_bound_commands(bound, cmds);
  auto* phase = app.add_subcommand("phase", "Bernoulli exponent and Curie-Weiss analysis");
  phase->require_subcommand(1)->fallthrough();
  add_phase_commands(phase, cmds);
  auto* verify = app.add_subcommand("verify", "Monte Carlo and exact verification");
  verify->require_subcommand(1)->fallthrough();
  add_verify_commands(verify, cmds);

  std::string plot_csv;
  double ceiling = 10.0;
  auto* plot = app.add_subcommand("emit-plot", "write a gnuplot script for a CSV from this tool");
  plot->fallthrough();
  plot->add_option("--csv", plot_csv, "input CSV")->required();
  plot->add_option("--ceiling", ceiling, "clip infinite or large values at this level");
  plot->footer("Schemas: bayes-lpcb, phase exponent, phase estimator, phase diagram, and the "
               "other bound tables (first column versus bound).");

  std::vector<const char*> argv{"riskbound"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::ofstream file;
  if (!output.empty()) {
    file.open(output);
    if (!file) throw UsageError("cannot write " + output);
  }
  std::ostream& sink = output.empty() ? out : file;
  Context ctx{sink, err, resolve_threads(threads)};

  if (plot->parsed()) {
    sink << plot_script(plot_csv, ceiling);
    return kExitOk;
  }
  for (auto& c : cmds) {
    if (!c->app()->parsed()) continue;
    if (!config.empty()) {
      sink << "# config:";
      for (const auto* o : c->app()->get_options())
        if (o->count() > 0 && !o->get_lnames().empty()) {
          std::string joined;
          for (const auto& r : o->results()) joined += (joined.empty() ? "" : ";") + r;
          sink << ' ' << o->get_lnames().front() << '=' << joined;
        }
      if (threads) sink << " threads=" << threads;
      sink << '\n';
    }
    c->run(ctx);
    return kExitOk;
  }
  throw UsageError("no command selected");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const VerifyFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    return kExitVerify;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace riskbound::cli
