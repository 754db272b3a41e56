// Shared value types for the risk-sensitive bound library: extended-real
// bound outcomes, uniform grids and the error hierarchy.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace riskbound {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error hierarchy. Divergent bounds are NOT errors; they are returned as +inf.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MatrixError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

enum class BoundStatus {
  kFinite,       // finite value in nats
  kInfinite,     // the bound certifies divergence (+inf)
  kUseless,      // divergence term is +inf, bound degenerates to -inf
  kOutOfWindow,  // closed form outside its stated applicability window
};

[[nodiscard]] std::string_view to_string(BoundStatus s);

// Outcome of a lower-bound evaluation or maximization. `argmax` keeps the free
// parameters in insertion order so they can be written as CSV columns.
struct BoundValue {
  double value = 0.0;
  BoundStatus status = BoundStatus::kFinite;
  std::vector<std::pair<std::string, double>> argmax;
  std::string diagnostics;

  [[nodiscard]] static BoundValue from(double v);
  [[nodiscard]] static BoundValue useless(std::string why = {});

  BoundValue& with(std::string name, double v) {
    argmax.emplace_back(std::move(name), v);
    return *this;
  }

  [[nodiscard]] std::optional<double> arg(std::string_view name) const;
  [[nodiscard]] bool infinite() const { return status == BoundStatus::kInfinite; }
  [[nodiscard]] bool finite() const { return status == BoundStatus::kFinite; }
};

// Larger of two bound outcomes, treating useless as -inf.
[[nodiscard]] const BoundValue& better(const BoundValue& a, const BoundValue& b);

struct UniformGrid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  UniformGrid() = default;
  UniformGrid(double lo_, double hi_, std::size_t n_);

  [[nodiscard]] double step() const { return (hi - lo) / static_cast<double>(n - 1); }
  [[nodiscard]] double at(std::size_t i) const {
    return i + 1 == n ? hi : lo + step() * static_cast<double>(i);
  }
  [[nodiscard]] std::vector<double> points() const;
  [[nodiscard]] double length() const { return hi - lo; }

  friend bool operator==(const UniformGrid&, const UniformGrid&) = default;
};

// A function sampled on a uniform grid (waveforms, densities).
struct GridFunction {
  UniformGrid grid;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(UniformGrid g, std::vector<double> v);

  template <class F>
  [[nodiscard]] static GridFunction sample(const UniformGrid& g, F&& f) {
    std::vector<double> v(g.n);
    for (std::size_t i = 0; i < g.n; ++i) v[i] = f(g.at(i));
    return {g, std::move(v)};
  }

  [[nodiscard]] std::size_t size() const { return values.size(); }
};

// Composite trapezoid rule with uniform spacing.
[[nodiscard]] double trapezoid(std::span<const double> values, double step);
[[nodiscard]] double integrate(const GridFunction& f);
[[nodiscard]] double energy(const GridFunction& f);  // integral of f^2

// Trapezoid weights for a grid (step/2 at the ends).
[[nodiscard]] std::vector<double> trapezoid_weights(const UniformGrid& g);

// Numerically stable ln(sum exp(x_i)).
[[nodiscard]] double log_sum_exp(std::span<const double> xs);

// x*ln(x) with the 0*ln(0) = 0 convention.
[[nodiscard]] inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace riskbound
