#include "riskbound/core.hpp"

#include <algorithm>

namespace riskbound {

std::string_view to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::kFinite:
      return "finite";
    case BoundStatus::kInfinite:
      return "infinite";
    case BoundStatus::kUseless:
      return "useless";
    case BoundStatus::kOutOfWindow:
      return "out_of_window";
  }
  return "unknown";
}

BoundValue BoundValue::from(double v) {
  BoundValue b;
  b.value = v;
  if (std::isnan(v)) {
    b.status = BoundStatus::kUseless;
    b.value = -kInf;
  } else if (v == kInf) {
    b.status = BoundStatus::kInfinite;
  } else if (v == -kInf) {
    b.status = BoundStatus::kUseless;
  }
  return b;
}

BoundValue BoundValue::useless(std::string why) {
  BoundValue b;
  b.value = -kInf;
  b.status = BoundStatus::kUseless;
  b.diagnostics = std::move(why);
  return b;
}

std::optional<double> BoundValue::arg(std::string_view name) const {
  for (const auto& [k, v] : argmax)
    if (k == name) return v;
  return std::nullopt;
}

const BoundValue& better(const BoundValue& a, const BoundValue& b) {
  auto key = [](const BoundValue& x) {
    return x.status == BoundStatus::kUseless || x.status == BoundStatus::kOutOfWindow ? -kInf
                                                                                      : x.value;
  };
  return key(b) > key(a) ? b : a;
}

UniformGrid::UniformGrid(double lo_, double hi_, std::size_t n_) : lo(lo_), hi(hi_), n(n_) {
  if (n < 2) throw ShapeError("grid needs at least two points");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw ShapeError("grid interval must be finite with hi > lo");
}

std::vector<double> UniformGrid::points() const {
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = at(i);
  return p;
}

GridFunction::GridFunction(UniformGrid g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.n) throw ShapeError("grid function size does not match its grid");
}

double trapezoid(std::span<const double> values, double step) {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * step;
}

double integrate(const GridFunction& f) { return trapezoid(f.values, f.grid.step()); }

double energy(const GridFunction& f) {
  std::vector<double> sq(f.values.size());
  std::transform(f.values.begin(), f.values.end(), sq.begin(), [](double v) { return v * v; });
  return trapezoid(sq, f.grid.step());
}

std::vector<double> trapezoid_weights(const UniformGrid& g) {
  std::vector<double> w(g.n, g.step());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return -kInf;
  const double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace riskbound
