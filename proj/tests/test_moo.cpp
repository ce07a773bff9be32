#include <cmath>
#include <random>

#include "doctest.h"
#include "qpe/moo.hpp"

using namespace qpe;

namespace {

double scan_argmax(double u1, double u2, double alpha2, double lo, double hi,
                   double step) {
  SystemConfig config;
  config.alpha = std::sqrt(alpha2);
  config.u1 = u1;
  config.u2 = u2;
  config.dim = 2;
  double best_tau = lo;
  double best = -1.0;
  for (double tau = lo; tau <= hi + 0.5 * step; tau += step) {
    const double v = qfi_approx_closed(tau, config).value;
    if (v > best) {
      best = v;
      best_tau = tau;
    }
  }
  return best_tau;
}

double bisect_stationarity(double u1, double u2, double a2, double lo,
                           double hi) {
  auto f = [&](double tau) {
    const double t = u1 + u2 + 2.0 * tau * a2 * u2;
    return (2.0 - tau) * (1.0 + 4.0 * t * t) + 16.0 * tau * a2 * u2 * t;
  };
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm * flo <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<ParetoPoint> brute_force_front(
    const std::vector<ParetoPoint>& points) {
  auto dominates = [](const ParetoPoint& a, const ParetoPoint& b) {
    return a.i_star >= b.i_star && a.d <= b.d &&
           (a.i_star > b.i_star || a.d < b.d);
  };
  std::vector<ParetoPoint> keep;
  for (const ParetoPoint& p : points) {
    bool dominated = false;
    for (const ParetoPoint& q : points) {
      if (dominates(q, p)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) keep.push_back(p);
  }
  std::stable_sort(keep.begin(), keep.end(),
                   [](const ParetoPoint& a, const ParetoPoint& b) {
                     if (a.d != b.d) return a.d < b.d;
                     return a.i_star > b.i_star;
                   });
  return keep;
}

bool same_points(const std::vector<ParetoPoint>& a,
                 const std::vector<ParetoPoint>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].u1 != b[i].u1 || a[i].u2 != b[i].u2 ||
        a[i].alpha2 != b[i].alpha2 || a[i].i_star != b[i].i_star ||
        a[i].d != b[i].d) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("qfi_star spot value and closed-form identity") {
  CHECK(qfi_star(0.0, 0.0, 0.2, 1.0) ==
        doctest::Approx(0.10826822658929015).epsilon(1e-12));

  for (double u1 : {0.0, 0.3, 0.8}) {
    for (double u2 : {0.0, 0.2, 0.6}) {
      SystemConfig config;
      config.alpha = std::sqrt(0.45);
      config.u1 = u1;
      config.u2 = u2;
      config.dim = 2;
      CHECK(qfi_star(u1, u2, 0.45, 1.0) ==
            qfi_approx_closed(2.0, config).value);
    }
  }

  // 1/gamma^2 scaling.
  CHECK(qfi_star(0.1, 0.2, 0.5, 2.0) ==
        doctest::Approx(qfi_star(0.1, 0.2, 0.5, 1.0) / 4.0).epsilon(1e-15));

  // No field, no information and no deformation.
  CHECK(qfi_star(0.5, 0.3, 0.0, 1.0) == 0.0);
  SystemConfig dark;
  dark.alpha = 0.0;
  dark.u1 = 0.5;
  dark.u2 = 0.3;
  dark.dim = 2;
  CHECK(deformation(dark) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("qfi_star monotone in each argument") {
  const int n = 21;
  auto axis = [&](int i) { return 0.99 * i / n; };
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j < n; j += 5) {
      for (int k = 0; k < n; k += 5) {
        CHECK(qfi_star(axis(i + 1), axis(j), axis(k), 1.0) >=
              qfi_star(axis(i), axis(j), axis(k), 1.0));
        CHECK(qfi_star(axis(j), axis(i + 1), axis(k), 1.0) >=
              qfi_star(axis(j), axis(i), axis(k), 1.0));
        CHECK(qfi_star(axis(j), axis(k), axis(i + 1), 1.0) >=
              qfi_star(axis(j), axis(k), axis(i), 1.0));
      }
    }
  }
}

TEST_CASE("solve_tau_star") {
  // u2 = 0 or alpha2 = 0: exactly 2.
  CHECK(solve_tau_star(0.0, 0.0, 0.5).tau == 2.0);
  CHECK(solve_tau_star(0.3, 0.0, 0.5).tau == 2.0);
  CHECK(solve_tau_star(0.3, 0.2, 0.0).tau == 2.0);

  TauStar big = solve_tau_star(0.0, 0.05, 1.0 - 1e-12);
  CHECK(std::abs(big.residual) <= 1e-12);

  for (auto [u1, u2, a2] : std::vector<std::array<double, 3>>{
           {0.0, 0.05, 0.999999999999}, {0.05, 0.05, 0.999999999999},
           {0.1, 0.1, 0.999999999999}, {0.0, 0.05, 0.2},
           {0.05, 0.02, 0.6}}) {
    TauStar root = solve_tau_star(u1, u2, a2);
    CHECK(std::abs(root.residual) <= 1e-12);
    // Bisection oracle on the same stationarity equation.
    CHECK(root.tau ==
          doctest::Approx(bisect_stationarity(u1, u2, a2, 1.0, 6.0))
              .epsilon(1e-10));
    // The root maximizes the closed form within one scan step.
    CHECK(std::abs(root.tau - scan_argmax(u1, u2, a2, 1.0, 4.5, 1e-3)) <=
          1e-3 + 1e-9);
  }

  // Frozen roots at nbar just below 1 and nbar = 0.2.
  CHECK(solve_tau_star(0.0, 0.05, 0.999999999999).tau ==
        doctest::Approx(2.4220433).epsilon(1e-6));
  CHECK(solve_tau_star(0.0, 0.05, 0.2).tau ==
        doctest::Approx(2.0284607).epsilon(1e-6));

  CHECK_THROWS_AS(solve_tau_star(-0.1, 0.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(solve_tau_star(0.0, 1.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(solve_tau_star(0.0, 0.5, 1.0), InvalidArgument);
}

TEST_CASE("evaluate_grid") {
  GridSpec single{{0.1, 0.1, 1}, {0.2, 0.2, 1}, {0.3, 0.3, 1}};
  std::vector<ParetoPoint> one = evaluate_grid(single, 1.0);
  REQUIRE(one.size() == 1);
  CHECK(one[0].i_star == qfi_star(0.1, 0.2, 0.3, 1.0));
  SystemConfig direct;
  direct.alpha = std::sqrt(0.3);
  direct.u1 = 0.1;
  direct.u2 = 0.2;
  direct.dim = 2;
  CHECK(one[0].d == deformation(direct));

  // Row-major ordering: u1 outermost, alpha2 innermost.
  GridSpec cube{{0.0, 0.4, 2}, {0.0, 0.6, 2}, {0.1, 0.3, 2}};
  std::vector<ParetoPoint> pts = evaluate_grid(cube, 1.0);
  REQUIRE(pts.size() == 8);
  CHECK(pts[0].u1 == 0.0);
  CHECK(pts[0].u2 == 0.0);
  CHECK(pts[0].alpha2 == 0.1);
  CHECK(pts[1].alpha2 == 0.3);
  CHECK(pts[2].u2 == 0.6);
  CHECK(pts[4].u1 == 0.4);
  CHECK(pts[7].alpha2 == 0.3);

  // Monotone i_star along each control axis at fixed alpha2.
  GridSpec flat{{0.0, 0.9, 3}, {0.0, 0.9, 3}, {0.2, 0.2, 1}};
  std::vector<ParetoPoint> grid = evaluate_grid(flat, 1.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j + 1 < 3; ++j) {
      CHECK(grid[i * 3 + j + 1].i_star >= grid[i * 3 + j].i_star);
      CHECK(grid[(j + 1) * 3 + i].i_star >= grid[j * 3 + i].i_star);
    }
  }

  // Deformation stays a probability defect on a denser grid.
  GridSpec dense{{0.0, 0.99, 31}, {0.0, 0.99, 31}, {0.2, 0.2, 1}};
  for (const ParetoPoint& p : evaluate_grid(dense, 1.0)) {
    CHECK(p.d >= 0.0);
    CHECK(p.d <= 1.0);
  }

  GridSpec bad{{0.0, 1.0, 5}, {0.0, 0.5, 5}, {0.2, 0.2, 1}};
  CHECK_THROWS_AS(evaluate_grid(bad, 1.0), InvalidArgument);
  CHECK_THROWS_AS(evaluate_grid(dense, 0.0), InvalidArgument);
}

TEST_CASE("epsilon-constrained optimization") {
  GridSpec grid{{0.0, 0.99, 41}, {0.0, 0.99, 41}, {0.2, 0.2, 1}};
  const std::vector<ParetoPoint> points = evaluate_grid(grid, 1.0);

  // Inactive constraint: monotone objective peaks at the top corner.
  ConstrainedOptimum loose = epsilon_constrained_optimize(grid, 1.0, 1.0);
  CHECK(loose.best.u1 == 0.99);
  CHECK(loose.best.u2 == 0.99);
  CHECK(loose.feasible_count == 41 * 41);
  double gmax = 0.0;
  for (const ParetoPoint& p : points) gmax = std::max(gmax, p.i_star);
  CHECK(loose.best.i_star == gmax);

  // Brute force equivalence at an active constraint.
  for (double epsilon : {0.10, 0.15}) {
    ConstrainedOptimum opt = epsilon_constrained_optimize(grid, 1.0, epsilon);
    const ParetoPoint* best = nullptr;
    long feasible = 0;
    for (const ParetoPoint& p : points) {
      if (p.d > epsilon) continue;
      ++feasible;
      if (best == nullptr || p.i_star > best->i_star) best = &p;
    }
    REQUIRE(best != nullptr);
    CHECK(opt.feasible_count == feasible);
    CHECK(opt.best.i_star == best->i_star);
    CHECK(opt.boundary_distance == epsilon - opt.best.d);
    CHECK(opt.best.d <= epsilon);
  }

  CHECK(epsilon_constrained_optimize(grid, 1.0, 0.15).best.i_star >=
        epsilon_constrained_optimize(grid, 1.0, 0.10).best.i_star);

  // Every deformation on this grid exceeds a tiny epsilon.
  try {
    epsilon_constrained_optimize(grid, 1.0, 1e-6);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.min_d == doctest::Approx(0.08155843857644938).epsilon(1e-9));
  }

  CHECK_THROWS_AS(epsilon_constrained_optimize(grid, 1.0, 0.0),
                  InvalidArgument);
  CHECK_THROWS_AS(epsilon_constrained_optimize(grid, 1.0, 1.5),
                  InvalidArgument);
}

TEST_CASE("pareto front") {
  ParetoPoint a{0.1, 0.1, 0.2, 1.0, 0.1};
  ParetoPoint b{0.2, 0.2, 0.2, 0.5, 0.2};
  CHECK(same_points(pareto_front({a}), {a}));
  CHECK(same_points(pareto_front({a, b}), {a}));
  CHECK(same_points(pareto_front({b, a}), {a}));

  // Exact duplicates in objective space are all retained.
  ParetoPoint a2 = a;
  a2.u1 = 0.9;
  std::vector<ParetoPoint> dup = pareto_front({a, b, a2});
  REQUIRE(dup.size() == 2);
  CHECK(dup[0].u1 == 0.1);
  CHECK(dup[1].u1 == 0.9);

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ParetoPoint> cloud(2000);
  for (ParetoPoint& p : cloud) {
    p.u1 = u(rng);
    p.u2 = u(rng);
    p.alpha2 = u(rng);
    p.i_star = u(rng);
    p.d = u(rng);
  }
  std::vector<ParetoPoint> front = pareto_front(cloud);
  CHECK(same_points(front, brute_force_front(cloud)));
  CHECK(same_points(pareto_front(front), front));

  // Sorted ascending by d; along a front, i_star rises with d.
  for (size_t i = 0; i + 1 < front.size(); ++i) {
    CHECK(front[i].d <= front[i + 1].d);
    CHECK(front[i].i_star <= front[i + 1].i_star);
  }

  // Consistency with the epsilon-constrained solver: each front member is
  // optimal for epsilon equal to its own deformation.
  GridSpec grid{{0.0, 0.9, 7}, {0.0, 0.9, 7}, {0.2, 0.2, 1}};
  std::vector<ParetoPoint> gpts = evaluate_grid(grid, 1.0);
  for (const ParetoPoint& p : pareto_front(gpts)) {
    ConstrainedOptimum opt = epsilon_constrained_optimize(grid, 1.0, p.d);
    CHECK(opt.best.i_star == p.i_star);
  }
}
