#include "qpe/sme.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace qpe {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr Complex kI{0.0, 1.0};

double mean_quadrature(const MatrixXcd& rho) {
  // <a + a^dag> = 2 Re sum_p sqrt(p+1) rho[p+1, p]
  const int dim = static_cast<int>(rho.rows());
  double s = 0.0;
  for (int p = 0; p + 1 < dim; ++p) {
    s += std::sqrt(p + 1.0) * rho(p + 1, p).real();
  }
  return 2.0 * s;
}

// One conditional-state propagator for a fixed model rate gamma.
// The step is the Kraus-form Euler scheme
//   rho' ~ M rho M^dag + (1 - eta) gamma dt a rho a^dag,
//   M = I + (-iH - gamma/2 a^dag a) dt + sqrt(eta gamma) dy a,
// which keeps rho positive by construction and averages to the master
// equation as dt -> 0.
class Filter {
 public:
  Filter(double gamma, const SystemConfig& config, double dt,
         double efficiency)
      : gamma_(gamma), dt_(dt), eta_(efficiency) {
    const int dim = config.dim;
    CoherentState cs = coherent_state(config.alpha, dim);
    rho_ = cs.vec.amplitudes * cs.vec.amplitudes.adjoint();
    drift_.resize(dim);
    sq_.resize(dim);
    for (int n = 0; n < dim; ++n) {
      const double h = gamma * (config.u1 * n + config.u2 * double(n) * n);
      drift_(n) = 1.0 + (-kI * h - 0.5 * gamma * n) * dt;
      sq_(n) = std::sqrt(n + 1.0);
    }
    b_.resize(dim, dim);
    meas_gain_ = std::sqrt(eta_ * gamma_);
  }

  double expected_signal() const { return meas_gain_ * mean_quadrature(rho_); }

  void step(double dy) {
    const int dim = static_cast<int>(rho_.rows());
    if (eta_ < 1.0) {
      rho_kraus_cache_ = rho_.block(1, 1, dim - 1, dim - 1);
    }
    const Complex c = meas_gain_ * dy;
    for (int p = 0; p < dim; ++p) {
      b_.row(p) = drift_(p) * rho_.row(p);
      if (p + 1 < dim) b_.row(p) += c * sq_(p) * rho_.row(p + 1);
    }
    for (int q = dim - 1; q >= 0; --q) {
      rho_.col(q) = std::conj(drift_(q)) * b_.col(q);
      if (q + 1 < dim) rho_.col(q) += std::conj(c) * sq_(q) * b_.col(q + 1);
    }
    if (eta_ < 1.0) {
      const double w = (1.0 - eta_) * gamma_ * dt_;
      for (int p = 0; p + 1 < dim; ++p) {
        for (int q = 0; q + 1 < dim; ++q) {
          rho_(p, q) += w * sq_(p) * sq_(q) * rho_kraus_cache_(p, q);
        }
      }
    }
    const double tr = rho_.trace().real();
    if (!(tr > 0.0) || !std::isfinite(tr)) {
      throw IntegrationError("trajectory trace degenerated to " +
                             std::to_string(tr));
    }
    rho_ /= tr;
  }

  void check_invariants(long step_index) const {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho_,
                                                Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-6) {
      throw IntegrationError("conditional state lost positivity (" +
                             std::to_string(es.eigenvalues()(0)) +
                             ") at step " + std::to_string(step_index));
    }
  }

  const MatrixXcd& rho() const { return rho_; }

 private:
  double gamma_;
  double dt_;
  double eta_;
  double meas_gain_;
  MatrixXcd rho_;
  MatrixXcd b_;
  MatrixXcd rho_kraus_cache_;
  VectorXcd drift_;
  VectorXd sq_;
};

void check_sme_args(const SystemConfig& config, double gamma, double duration,
                    double dt, double efficiency) {
  config.validate();
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be > 0");
  if (!(duration > 0.0)) throw InvalidArgument("duration must be > 0");
  if (!(dt > 0.0) || dt * gamma > 1e-3) {
    throw InvalidArgument("SME step must satisfy 0 < dt <= 1e-3 / gamma");
  }
  if (efficiency < 0.0 || efficiency > 1.0) {
    throw InvalidArgument("efficiency must lie in [0, 1]");
  }
}

TrajectoryWithState run_trajectory(double gamma_true,
                                   const SystemConfig& config, double duration,
                                   double dt, double efficiency,
                                   std::uint64_t seed) {
  check_sme_args(config, gamma_true, duration, dt, efficiency);
  const long steps = std::lround(duration / dt);
  Filter state(gamma_true, config, dt, efficiency);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> wiener(0.0, std::sqrt(dt));

  MeasurementRecord record;
  record.dt = dt;
  record.seed = seed;
  record.efficiency = efficiency;
  record.samples.reserve(steps);
  for (long k = 0; k < steps; ++k) {
    const double dy = state.expected_signal() * dt + wiener(rng);
    state.step(dy);
    record.samples.push_back(dy);
    if (k % 100 == 0) state.check_invariants(k);
  }
  return {std::move(record), state.rho()};
}

}  // namespace

void CandidateSet::validate() const {
  if (rates.empty() || rates.size() != prior.size()) {
    throw InvalidArgument("candidate rates and prior must be non-empty and "
                          "the same length");
  }
  double sum = 0.0;
  for (size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] > 0.0)) throw InvalidArgument("candidate rates must be > 0");
    if (prior[i] < 0.0) throw InvalidArgument("prior weights must be >= 0");
    sum += prior[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InvalidArgument("prior weights must sum to 1, got " +
                          std::to_string(sum));
  }
}

CandidateSet generate_candidates(double center, double spread, int n,
                                 std::uint64_t seed) {
  if (!(center > 0.0) || spread < 0.0 || n < 1) {
    throw InvalidArgument("need center > 0, spread >= 0, n >= 1");
  }
  const double hi = center + spread;
  if (!(hi > 0.0)) {
    throw DegenerateCandidatesError("candidate interval lies entirely at or "
                                    "below zero");
  }
  const double lo = center - spread;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> draw(lo, hi);
  CandidateSet set;
  set.rates.reserve(n);
  for (int i = 0; i < n; ++i) {
    double r = spread == 0.0 ? center : draw(rng);
    if (r <= 0.0) r = 1e-12;  // clip above zero
    set.rates.push_back(r);
  }
  set.prior.assign(n, 1.0 / n);
  set.validate();
  return set;
}

MeasurementRecord simulate_trajectory(double gamma_true,
                                      const SystemConfig& config,
                                      double duration, double dt,
                                      double efficiency, std::uint64_t seed) {
  return run_trajectory(gamma_true, config, duration, dt, efficiency, seed)
      .record;
}

TrajectoryWithState simulate_trajectory_with_state(double gamma_true,
                                                   const SystemConfig& config,
                                                   double duration, double dt,
                                                   double efficiency,
                                                   std::uint64_t seed) {
  return run_trajectory(gamma_true, config, duration, dt, efficiency, seed);
}

PosteriorState update_posteriors(const MeasurementRecord& record,
                                 const CandidateSet& candidates,
                                 const SystemConfig& config) {
  candidates.validate();
  config.validate();
  if (record.samples.empty() || !(record.dt > 0.0)) {
    throw InvalidArgument("empty measurement record");
  }
  const size_t n = candidates.rates.size();
  const double dt = record.dt;

  std::vector<Filter> filters;
  filters.reserve(n);
  std::vector<double> logw(n);
  for (size_t i = 0; i < n; ++i) {
    filters.emplace_back(candidates.rates[i], config, dt, record.efficiency);
    logw[i] = std::log(std::max(candidates.prior[i], 1e-300));
  }

  PosteriorState posterior;
  posterior.candidates = candidates;
  posterior.times.reserve(record.samples.size());
  posterior.weights_over_time.reserve(record.samples.size());
  posterior.estimate_over_time.reserve(record.samples.size());

  long k = 0;
  for (double dy : record.samples) {
    double max_logw = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
      const double mu = filters[i].expected_signal();
      const double innovation = dy - mu * dt;
      logw[i] += -innovation * innovation / (2.0 * dt);
      filters[i].step(dy);
      max_logw = std::max(max_logw, logw[i]);
    }
    if (!std::isfinite(max_logw)) {
      throw RenormalizationError("all candidate likelihoods degenerated at t=" +
                                 std::to_string((k + 1) * dt));
    }
    double norm = 0.0;
    std::vector<double> weights(n);
    for (size_t i = 0; i < n; ++i) {
      logw[i] -= max_logw;  // keep the running log-weights bounded
      weights[i] = std::exp(logw[i]);
      norm += weights[i];
    }
    double estimate = 0.0;
    for (size_t i = 0; i < n; ++i) {
      weights[i] /= norm;
      estimate += weights[i] * candidates.rates[i];
    }
    posterior.times.push_back((k + 1) * dt);
    posterior.weights_over_time.push_back(std::move(weights));
    posterior.estimate_over_time.push_back(estimate);
    if (k % 100 == 0) {
      for (const Filter& f : filters) f.check_invariants(k);
    }
    ++k;
  }
  return posterior;
}

double estimate_gamma(const PosteriorState& posterior) {
  if (posterior.estimate_over_time.empty()) {
    throw InvalidArgument("empty posterior");
  }
  return posterior.estimate_over_time.back();
}

}  // namespace qpe
