#include "riskbound/optimize.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace riskbound::opt {
namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

double sanitize(double v) { return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v; }

}  // namespace

Point1D golden_maximize(const Objective1D& f, double lo, double hi, double xtol, int max_iter) {
  if (hi < lo) std::swap(lo, hi);
  Point1D best{lo, sanitize(f(lo))};
  auto consider = [&](double x, double v) {
    if (v > best.f) best = {x, v};
  };
  consider(hi, sanitize(f(hi)));
  if (best.f == std::numeric_limits<double>::infinity()) return best;

  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = sanitize(f(c)), fd = sanitize(f(d));
  consider(c, fc);
  consider(d, fd);
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = sanitize(f(c));
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = sanitize(f(d));
      consider(d, fd);
    }
    if (best.f == std::numeric_limits<double>::infinity()) break;
  }
  return best;
}

Point1D scan_then_golden_maximize(const Objective1D& f, double lo, double hi, std::size_t n,
                                  double xtol) {
  n = std::max<std::size_t>(n, 3);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  std::size_t arg = 0;
  double fbest = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i + 1 == n ? hi : lo + h * static_cast<double>(i);
    const double v = sanitize(f(x));
    if (v > fbest) {
      fbest = v;
      arg = i;
    }
    if (v == std::numeric_limits<double>::infinity()) return {x, v};
  }
  const double a = lo + h * static_cast<double>(arg == 0 ? 0 : arg - 1);
  const double b = std::min(hi, lo + h * static_cast<double>(arg + 1));
  Point1D grid_best{arg + 1 == n ? hi : lo + h * static_cast<double>(arg), fbest};
  Point1D refined = golden_maximize(f, a, b, xtol);
  return refined.f > grid_best.f ? refined : grid_best;
}

Point1D log_scan_then_golden_maximize(const Objective1D& f, double lo, double hi, std::size_t n,
                                      double rel_tol) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log scan needs 0 < lo < hi");
  auto g = [&](double u) { return f(std::exp(u)); };
  Point1D r = scan_then_golden_maximize(g, std::log(lo), std::log(hi), n, rel_tol);
  return {std::exp(r.x), r.f};
}

double bisect_root(const Objective1D& f, double lo, double hi, double xtol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) throw std::invalid_argument("bisect_root: no sign change");
  for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi,
                        double xtol) {
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

Point2D coordinate_ascent(const std::function<double(double, double)>& f, const Box2D& box,
                          int restarts, int sweeps, std::size_t scan_points) {
  auto to_u = [](double v, bool lg) { return lg ? std::log(v) : v; };
  auto from_u = [](double u, bool lg) { return lg ? std::exp(u) : u; };
  const double xl = to_u(box.x_lo, box.log_x), xh = to_u(box.x_hi, box.log_x);
  const double yl = to_u(box.y_lo, box.log_y), yh = to_u(box.y_hi, box.log_y);

  Point2D best{from_u(xl, box.log_x), from_u(yl, box.log_y),
               -std::numeric_limits<double>::infinity()};
  restarts = std::max(restarts, 1);
  for (int r = 0; r < restarts; ++r) {
    double uy = yl + (yh - yl) * (r + 1.0) / (restarts + 1.0);
    double ux = xl;
    double fcur = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < sweeps; ++s) {
      const double y = from_u(uy, box.log_y);
      auto px = scan_then_golden_maximize([&](double u) { return f(from_u(u, box.log_x), y); },
                                          xl, xh, s == 0 ? scan_points : 9, 1e-11);
      if (s > 0) {
        // Keep the line search local after the first sweep.
        const double w = 0.25 * (xh - xl) / (1.0 + s);
        auto local = scan_then_golden_maximize(
            [&](double u) { return f(from_u(u, box.log_x), y); }, std::max(xl, ux - w),
            std::min(xh, ux + w), 9, 1e-12);
        if (local.f > px.f) px = local;
      }
      ux = px.x;
      const double x = from_u(ux, box.log_x);
      auto py = scan_then_golden_maximize([&](double u) { return f(x, from_u(u, box.log_y)); },
                                          yl, yh, s == 0 ? scan_points : 9, 1e-11);
      {
        const double w = 0.25 * (yh - yl) / (1.0 + s);
        auto local = scan_then_golden_maximize(
            [&](double u) { return f(x, from_u(u, box.log_y)); }, std::max(yl, uy - w),
            std::min(yh, uy + w), 9, 1e-12);
        if (local.f > py.f) py = local;
      }
      uy = py.x;
      const double improvement = py.f - fcur;
      fcur = py.f;
      if (fcur == std::numeric_limits<double>::infinity()) break;
      if (s > 0 && std::abs(improvement) <= 1e-13 * (1.0 + std::abs(fcur))) break;
    }
    if (fcur > best.f) best = {from_u(ux, box.log_x), from_u(uy, box.log_y), fcur};
  }
  return best;
}

}  // namespace riskbound::opt
