#include "qpe/moo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qpe {

namespace {

void check_axis(const AxisSpec& a, const char* name) {
  if (a.count < 1) {
    throw InvalidArgument(std::string(name) + ": count must be >= 1");
  }
  if (a.lo > a.hi) {
    throw InvalidArgument(std::string(name) + ": lo > hi");
  }
  if (a.lo < 0.0 || a.hi >= 1.0) {
    throw InvalidArgument(std::string(name) + ": range must lie in [0, 1)");
  }
}

double axis_value(const AxisSpec& a, int i) {
  if (a.count == 1) return a.lo;
  return a.lo + (a.hi - a.lo) * i / (a.count - 1);
}

SystemConfig point_config(double u1, double u2, double alpha2, double gamma) {
  SystemConfig config;
  config.alpha = std::sqrt(alpha2);
  config.gamma = gamma;
  config.u1 = u1;
  config.u2 = u2;
  config.dim = 2;
  return config;
}

// Stationarity of the closed-form QFI in tau:
//   (2 - tau)(1 + 4 T^2) + 16 tau a2 u2 T,  T = u1 + u2 + 2 tau a2 u2.
double stationarity(double tau, double u1, double u2, double a2) {
  const double t = u1 + u2 + 2.0 * tau * a2 * u2;
  return (2.0 - tau) * (1.0 + 4.0 * t * t) + 16.0 * tau * a2 * u2 * t;
}

double stationarity_deriv(double tau, double u1, double u2, double a2) {
  const double t = u1 + u2 + 2.0 * tau * a2 * u2;
  const double dt = 2.0 * a2 * u2;
  return -(1.0 + 4.0 * t * t) + (2.0 - tau) * 8.0 * t * dt +
         16.0 * a2 * u2 * (t + tau * dt);
}

double cubic(double tau, double u2, double a2) {
  const double c = 16.0 * u2 * u2 * a2 * a2;
  return -c * tau * tau * tau + 4.0 * c * tau * tau - tau + 2.0;
}

// True when a dominates b under (maximize i_star, minimize d).
bool dominates(const ParetoPoint& a, const ParetoPoint& b) {
  return a.i_star >= b.i_star && a.d <= b.d &&
         (a.i_star > b.i_star || a.d < b.d);
}

}  // namespace

void GridSpec::validate() const {
  check_axis(u1_range, "u1_range");
  check_axis(u2_range, "u2_range");
  check_axis(alpha2_range, "alpha2_range");
}

double qfi_star(double u1, double u2, double alpha2, double gamma) {
  return qfi_approx_closed(2.0, point_config(u1, u2, alpha2, gamma)).value;
}

TauStar solve_tau_star(double u1, double u2, double alpha2) {
  if (u1 < 0.0 || u1 >= 1.0 || u2 < 0.0 || u2 >= 1.0 || alpha2 < 0.0 ||
      alpha2 >= 1.0) {
    throw InvalidArgument("controls and alpha2 must lie in [0, 1)");
  }
  if (u2 == 0.0 || alpha2 == 0.0) {
    // (2 - tau)(1 + 4T^2) = 0 with constant T: the root is exactly 2.
    return {2.0, stationarity(2.0, u1, u2, alpha2), cubic(2.0, u2, alpha2)};
  }

  double lo = 1.0, hi = 6.0;
  double flo = stationarity(lo, u1, u2, alpha2);
  double fhi = stationarity(hi, u1, u2, alpha2);
  while (flo * fhi > 0.0 && hi < 48.0) {
    hi *= 2.0;
    fhi = stationarity(hi, u1, u2, alpha2);
  }
  if (flo * fhi > 0.0) {
    throw BracketError("no sign change of the stationarity equation for u1=" +
                       std::to_string(u1) + ", u2=" + std::to_string(u2) +
                       ", alpha2=" + std::to_string(alpha2));
  }

  double tau = 2.0;
  if (tau < lo || tau > hi) tau = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = stationarity(tau, u1, u2, alpha2);
    if (std::abs(f) <= 1e-13) break;
    if (f * flo > 0.0) {
      lo = tau;
      flo = f;
    } else {
      hi = tau;
    }
    const double df = stationarity_deriv(tau, u1, u2, alpha2);
    double next = df != 0.0 ? tau - f / df : 0.5 * (lo + hi);
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
    tau = next;
  }
  return {tau, stationarity(tau, u1, u2, alpha2), cubic(tau, u2, alpha2)};
}

std::vector<ParetoPoint> evaluate_grid(const GridSpec& spec, double gamma) {
  spec.validate();
  if (!(gamma > 0.0)) {
    throw InvalidArgument("gamma must be > 0");
  }
  std::vector<ParetoPoint> points;
  points.reserve(static_cast<size_t>(spec.u1_range.count) *
                 spec.u2_range.count * spec.alpha2_range.count);
  for (int i = 0; i < spec.u1_range.count; ++i) {
    const double u1 = axis_value(spec.u1_range, i);
    for (int j = 0; j < spec.u2_range.count; ++j) {
      const double u2 = axis_value(spec.u2_range, j);
      for (int k = 0; k < spec.alpha2_range.count; ++k) {
        const double a2 = axis_value(spec.alpha2_range, k);
        ParetoPoint p;
        p.u1 = u1;
        p.u2 = u2;
        p.alpha2 = a2;
        p.i_star = qfi_star(u1, u2, a2, gamma);
        p.d = deformation(point_config(u1, u2, a2, gamma));
        points.push_back(p);
      }
    }
  }
  return points;
}

ConstrainedOptimum epsilon_constrained_optimize(const GridSpec& spec,
                                                double gamma, double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1.0) {
    throw InvalidArgument("epsilon must lie in (0, 1]");
  }
  const std::vector<ParetoPoint> points = evaluate_grid(spec, gamma);
  const ParetoPoint* best = nullptr;
  long feasible = 0;
  double min_d = 1.0;
  for (const ParetoPoint& p : points) {
    min_d = std::min(min_d, p.d);
    if (p.d > epsilon) continue;
    ++feasible;
    if (best == nullptr) {
      best = &p;
      continue;
    }
    if (p.i_star > best->i_star) {
      best = &p;
    } else if (p.i_star == best->i_star) {
      const auto key = [](const ParetoPoint& x) {
        return std::tuple(x.d, x.u1, x.u2, x.alpha2);
      };
      if (key(p) < key(*best)) best = &p;
    }
  }
  if (best == nullptr) {
    throw InfeasibleError("no grid point satisfies D <= " +
                              std::to_string(epsilon) +
                              "; smallest deformation found is " +
                              std::to_string(min_d),
                          min_d);
  }
  return {*best, epsilon, feasible, epsilon - best->d};
}

std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points) {
  std::vector<size_t> order(points.size());
  std::iota(order.begin(), order.end(), size_t{0});
  // d ascending, i_star descending; stable keeps input order for exact
  // duplicates in objective space.
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (points[a].d != points[b].d) return points[a].d < points[b].d;
    return points[a].i_star > points[b].i_star;
  });
  std::vector<ParetoPoint> front;
  double best_i = -1.0;
  double best_i_d = 0.0;
  for (size_t idx : order) {
    const ParetoPoint& p = points[idx];
    if (front.empty() || p.i_star > best_i ||
        (p.i_star == best_i && p.d == best_i_d)) {
      front.push_back(p);
      if (p.i_star > best_i || front.size() == 1) {
        best_i = p.i_star;
        best_i_d = p.d;
      }
    }
  }
  return front;
}

}  // namespace qpe
