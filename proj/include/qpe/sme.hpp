#ifndef QPE_SME_HPP
#define QPE_SME_HPP

#include <cstdint>
#include <vector>

#include "qpe/fock.hpp"

namespace qpe {

/// Candidate dissipation rates with a normalized prior.
struct CandidateSet {
  std::vector<double> rates;
  std::vector<double> prior;

  void validate() const;
};

/// Homodyne-current increments dy sampled at fixed dt.
struct MeasurementRecord {
  double dt = 0.0;
  std::vector<double> samples;
  std::uint64_t seed = 0;
  double efficiency = 1.0;

  double duration() const { return dt * static_cast<double>(samples.size()); }
};

/// Per-step candidate weights P_i(t) and the running weighted estimate.
struct PosteriorState {
  CandidateSet candidates;
  std::vector<double> times;
  std::vector<std::vector<double>> weights_over_time;
  std::vector<double> estimate_over_time;
};

/// n rates drawn uniformly from [center-spread, center+spread], clipped
/// above zero, with a uniform prior; reproducible from the seed.
CandidateSet generate_candidates(double center, double spread, int n,
                                 std::uint64_t seed);

/// Diffusive homodyne unraveling of the damping channel under the
/// controlled Hamiltonian, integrated with a positivity-preserving
/// Kraus-form Euler step; returns the record dy_k.
MeasurementRecord simulate_trajectory(double gamma_true,
                                      const SystemConfig& config,
                                      double duration, double dt,
                                      double efficiency, std::uint64_t seed);

/// Same trajectory, also returning the conditional state at the end.
struct TrajectoryWithState {
  MeasurementRecord record;
  Eigen::MatrixXcd final_state;
};
TrajectoryWithState simulate_trajectory_with_state(double gamma_true,
                                                   const SystemConfig& config,
                                                   double duration, double dt,
                                                   double efficiency,
                                                   std::uint64_t seed);

/// Per-candidate filters with Gaussian innovation likelihoods, weights
/// normalized in log space at every step.
PosteriorState update_posteriors(const MeasurementRecord& record,
                                 const CandidateSet& candidates,
                                 const SystemConfig& config);

/// Final-time weighted mean, gamma_hat = sum_i gamma_i P_i.
double estimate_gamma(const PosteriorState& posterior);

}  // namespace qpe

#endif
