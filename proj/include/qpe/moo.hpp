#ifndef QPE_MOO_HPP
#define QPE_MOO_HPP

#include <vector>

#include "qpe/metrology.hpp"

namespace qpe {

/// One evaluated control setting on the (u1, u2, |alpha|^2) box.
struct ParetoPoint {
  double u1 = 0.0;
  double u2 = 0.0;
  double alpha2 = 0.0;
  double i_star = 0.0;  // peak QFI at tau* = 2
  double d = 0.0;       // deformation
};

struct AxisSpec {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;  // count = 1 pins the axis at lo
};

struct GridSpec {
  AxisSpec u1_range;
  AxisSpec u2_range;
  AxisSpec alpha2_range;

  void validate() const;
};

struct ConstrainedOptimum {
  ParetoPoint best;
  double epsilon = 0.0;
  long feasible_count = 0;
  double boundary_distance = 0.0;  // epsilon - d at the optimum
};

/// Peak QFI as a function of the controls; shares the closed-form
/// expression with qfi_approx_closed at tau = 2.
double qfi_star(double u1, double u2, double alpha2, double gamma);

struct TauStar {
  double tau = 2.0;
  double residual = 0.0;        // defining stationarity equation at the root
  double cubic_residual = 0.0;  // reduced cubic at the root, diagnostic
};

/// Extremum time of the closed-form QFI: root of the stationarity
/// condition (2 - tau)(1 + 4T^2) + 16 tau |alpha|^2 u2 T = 0 with
/// T = u1 + u2 + 2 tau |alpha|^2 u2, found by safeguarded Newton.
/// Reduces to exactly 2 when u2 = 0 or alpha2 = 0.
TauStar solve_tau_star(double u1, double u2, double alpha2);

/// One ParetoPoint per cell, deterministic row-major order
/// (u1 outermost, then u2, then alpha2).
std::vector<ParetoPoint> evaluate_grid(const GridSpec& spec, double gamma);

/// Feasible grid point with maximal i_star under d <= epsilon; ties are
/// broken by smaller d, then lexicographically by (u1, u2, alpha2).
ConstrainedOptimum epsilon_constrained_optimize(const GridSpec& spec,
                                                double gamma, double epsilon);

/// Non-dominated subset under (maximize i_star, minimize d), sorted
/// ascending by d, stable among incomparable points.
std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points);

}  // namespace qpe

#endif
