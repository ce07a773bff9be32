#include <cmath>
#include <numeric>

#include "doctest.h"
#include "qpe/dynamics.hpp"
#include "qpe/sme.hpp"

using namespace qpe;

namespace {

SystemConfig make_config(Complex alpha, double u1, double u2, int dim) {
  SystemConfig config;
  config.alpha = alpha;
  config.gamma = 1.0;
  config.u1 = u1;
  config.u2 = u2;
  config.dim = dim;
  return config;
}

double sample_mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

}  // namespace

TEST_CASE("candidate generation") {
  CandidateSet a = generate_candidates(1.0, 0.4, 5, 7);
  CandidateSet b = generate_candidates(1.0, 0.4, 5, 7);
  REQUIRE(a.rates.size() == 5);
  CHECK(a.rates == b.rates);
  CHECK(a.prior == b.prior);
  for (double r : a.rates) {
    CHECK(r >= 0.6);
    CHECK(r <= 1.4);
  }
  for (double p : a.prior) CHECK(p == doctest::Approx(0.2).epsilon(1e-15));

  CandidateSet different = generate_candidates(1.0, 0.4, 5, 8);
  CHECK(a.rates != different.rates);

  CandidateSet one = generate_candidates(2.0, 0.0, 1, 1);
  REQUIRE(one.rates.size() == 1);
  CHECK(one.rates[0] == 2.0);
  CHECK(one.prior[0] == 1.0);

  CandidateSet flat = generate_candidates(0.7, 0.0, 4, 3);
  for (double r : flat.rates) CHECK(r == 0.7);

  CHECK_THROWS_AS(generate_candidates(0.0, 0.4, 5, 1), InvalidArgument);
  CHECK_THROWS_AS(generate_candidates(1.0, -0.1, 5, 1), InvalidArgument);
  CHECK_THROWS_AS(generate_candidates(1.0, 0.4, 0, 1), InvalidArgument);
}

TEST_CASE("candidate set validation") {
  CandidateSet ok{{0.5, 1.5}, {0.25, 0.75}};
  CHECK_NOTHROW(ok.validate());
  CandidateSet bad_len{{0.5, 1.5}, {1.0}};
  CHECK_THROWS_AS(bad_len.validate(), InvalidArgument);
  CandidateSet bad_rate{{0.5, 0.0}, {0.5, 0.5}};
  CHECK_THROWS_AS(bad_rate.validate(), InvalidArgument);
  CandidateSet bad_sum{{0.5, 1.5}, {0.5, 0.6}};
  CHECK_THROWS_AS(bad_sum.validate(), InvalidArgument);
}

TEST_CASE("trajectory simulation basics") {
  SystemConfig config = make_config(1.0, 0.05, 0.05, 12);

  MeasurementRecord r1 = simulate_trajectory(1.0, config, 1.0, 1e-3, 1.0, 5);
  MeasurementRecord r2 = simulate_trajectory(1.0, config, 1.0, 1e-3, 1.0, 5);
  REQUIRE(r1.samples.size() == 1000);
  CHECK(r1.samples == r2.samples);
  CHECK(r1.duration() == doctest::Approx(1.0).epsilon(1e-12));

  // efficiency = 0: the record is pure Wiener noise.
  MeasurementRecord dark = simulate_trajectory(1.0, config, 2.0, 1e-3, 0.0, 9);
  const double n = double(dark.samples.size());
  CHECK(std::abs(sample_mean(dark.samples)) <= 3.0 * std::sqrt(1e-3 / n));

  // Vacuum input: <a + a^dag> stays zero, so the same bound holds at eta=1.
  SystemConfig vac = make_config(0.0, 0.05, 0.05, 6);
  MeasurementRecord dark2 = simulate_trajectory(1.3, vac, 2.0, 5e-4, 1.0, 11);
  const double n2 = double(dark2.samples.size());
  CHECK(std::abs(sample_mean(dark2.samples)) <= 3.0 * std::sqrt(5e-4 / n2));

  CHECK_THROWS_AS(simulate_trajectory(1.0, config, 1.0, 2e-3, 1.0, 1),
                  InvalidArgument);
  CHECK_THROWS_AS(simulate_trajectory(2.0, config, 1.0, 1e-3, 1.0, 1),
                  InvalidArgument);  // dt * gamma above the cap
  CHECK_THROWS_AS(simulate_trajectory(1.0, config, 1.0, 1e-3, 1.1, 1),
                  InvalidArgument);
  CHECK_THROWS_AS(simulate_trajectory(1.0, config, 0.0, 1e-3, 1.0, 1),
                  InvalidArgument);
}

TEST_CASE("small trajectory ensemble averages to the master equation") {
  SystemConfig config = make_config(1.0, 0.05, 0.05, 10);
  const double tau = 1.0;
  Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(10, 10);
  const int runs = 60;
  for (int s = 0; s < runs; ++s) {
    mean += simulate_trajectory_with_state(1.0, config, tau, 1e-3, 1.0,
                                           1000 + s)
                .final_state;
  }
  mean /= double(runs);
  EvolutionResult ode = evolve_ode(config, tau, 1e-4);
  CHECK((mean - ode.state.matrix().mat()).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("posterior updates") {
  SystemConfig config = make_config(1.0, 0.0, 0.05, 12);
  MeasurementRecord record = simulate_trajectory(1.0, config, 2.0, 1e-3, 1.0, 3);

  CandidateSet one{{0.8}, {1.0}};
  PosteriorState single = update_posteriors(record, one, config);
  REQUIRE(single.times.size() == record.samples.size());
  for (const auto& w : single.weights_over_time) {
    REQUIRE(w.size() == 1);
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-14));
  }
  for (double g : single.estimate_over_time) {
    CHECK(g == doctest::Approx(0.8).epsilon(1e-14));
  }

  CandidateSet five{{0.6, 0.8, 1.0, 1.2, 1.4}, {0.2, 0.2, 0.2, 0.2, 0.2}};
  PosteriorState post = update_posteriors(record, five, config);
  for (size_t k = 0; k < post.times.size(); ++k) {
    const double sum = std::accumulate(post.weights_over_time[k].begin(),
                                       post.weights_over_time[k].end(), 0.0);
    CHECK(std::abs(sum - 1.0) <= 1e-10);
    CHECK(post.estimate_over_time[k] >= 0.6);
    CHECK(post.estimate_over_time[k] <= 1.4);
  }

  // An uninformative record leaves the prior untouched.
  MeasurementRecord blind = simulate_trajectory(1.0, config, 1.0, 1e-3, 0.0, 3);
  CandidateSet skewed{{0.6, 0.8, 1.0, 1.2, 1.4}, {0.1, 0.15, 0.25, 0.2, 0.3}};
  PosteriorState flat = update_posteriors(blind, skewed, config);
  for (const auto& w : flat.weights_over_time) {
    for (size_t i = 0; i < w.size(); ++i) {
      CHECK(std::abs(w[i] - skewed.prior[i]) <= 1e-10);
    }
  }

  MeasurementRecord empty;
  empty.dt = 1e-3;
  CHECK_THROWS_AS(update_posteriors(empty, five, config), InvalidArgument);
}

TEST_CASE("estimate_gamma") {
  PosteriorState uniform;
  uniform.candidates = {{1.0, 2.0, 3.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  uniform.times = {0.1};
  uniform.weights_over_time = {{1.0 / 3, 1.0 / 3, 1.0 / 3}};
  uniform.estimate_over_time = {1.0 / 3 * (1.0 + 2.0 + 3.0)};
  CHECK(estimate_gamma(uniform) == doctest::Approx(2.0).epsilon(1e-14));

  PosteriorState peaked = uniform;
  peaked.weights_over_time = {{0.0, 1.0, 0.0}};
  peaked.estimate_over_time = {2.0};
  CHECK(estimate_gamma(peaked) == 2.0);

  PosteriorState empty;
  CHECK_THROWS_AS(estimate_gamma(empty), InvalidArgument);
}
