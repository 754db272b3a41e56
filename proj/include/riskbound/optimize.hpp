// Scalar search utilities used by the bound optimizers.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace riskbound::opt {

struct Point1D {
  double x = 0.0;
  double f = 0.0;
};

using Objective1D = std::function<double(double)>;

// Golden-section maximization of a unimodal f on [lo, hi]. Returns the best
// point seen (including the bracket ends).
Point1D golden_maximize(const Objective1D& f, double lo, double hi, double xtol = 1e-10,
                        int max_iter = 200);

inline Point1D golden_minimize(const Objective1D& f, double lo, double hi, double xtol = 1e-10,
                               int max_iter = 200) {
  auto r = golden_maximize([&](double x) { return -f(x); }, lo, hi, xtol, max_iter);
  return {r.x, -r.f};
}

// Scan f on n uniform points of [lo, hi], then golden-refine inside the cell
// pair around the best sample. Ties on the scan resolve to the smallest x.
Point1D scan_then_golden_maximize(const Objective1D& f, double lo, double hi, std::size_t n,
                                  double xtol = 1e-10);

// Same, with the scan performed on a logarithmic grid of [lo, hi] (lo > 0) and
// refinement in log coordinates.
Point1D log_scan_then_golden_maximize(const Objective1D& f, double lo, double hi, std::size_t n,
                                      double rel_tol = 1e-10);

// Bisection for a sign change of f on [lo, hi]; requires f(lo)*f(hi) <= 0.
double bisect_root(const Objective1D& f, double lo, double hi, double xtol = 1e-12,
                   int max_iter = 200);

// Bisection on a predicate that is false at lo and true at hi (monotone
// switch), returning the switching point within xtol.
double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi,
                        double xtol);

struct Box2D {
  double x_lo, x_hi, y_lo, y_hi;
  bool log_x = false;
  bool log_y = false;
};

struct Point2D {
  double x = 0.0;
  double y = 0.0;
  double f = 0.0;
};

// Coordinate ascent with golden-section line searches, started from a grid of
// `restarts` deterministic points; returns the best end point.
Point2D coordinate_ascent(const std::function<double(double, double)>& f, const Box2D& box,
                          int restarts = 3, int sweeps = 40, std::size_t scan_points = 64);

}  // namespace riskbound::opt
