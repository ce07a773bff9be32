#ifndef QPE_DYNAMICS_HPP
#define QPE_DYNAMICS_HPP

#include "qpe/fock.hpp"

namespace qpe {

enum class EvolveMethod { analytic, ode };

struct EvolutionResult {
  double tau = 0.0;  // rescaled time gamma*t
  DensityMatrix state;
  EvolveMethod method;
  double trace_drift = 0.0;  // |trace - 1| before any renormalization
};

/// Two-level approximation of the damped controlled state, kept
/// unnormalized exactly as the closed form reads.
struct ApproxPureState {
  double tau = 0.0;
  StateVector vector;       // dim 2, unnormalized
  double prefactor = 1.0;   // exp(-|alpha|^2 e^{-tau} / 2)
};

/// Closed-form matrix element of the controlled damped mode at rescaled
/// time tau, with Delta = 1 + 2i*u2*(p-q).
Complex rho_element_analytic(int p, int q, double tau,
                             const SystemConfig& config);

/// Assemble the closed-form solution over p,q < dim.  Hermiticity holds
/// by construction; the trace deficit is reported, not repaired, unless
/// renormalize is set.
EvolutionResult evolve_analytic(const SystemConfig& config, double tau,
                                bool renormalize = false);

/// Fixed-step 4th-order integration of the controlled master equation in
/// rescaled time, from rho(0) = |alpha><alpha|.  The independent oracle
/// for evolve_analytic.
EvolutionResult evolve_ode(const SystemConfig& config, double tau,
                           double dt = 1e-4);

ApproxPureState pure_state_approx(double tau, const SystemConfig& config);

/// Derivative of the approximate pure state with respect to gamma at
/// fixed (t, u1, u2); gamma enters only through tau = gamma*t.
StateVector pure_state_gamma_derivative(double t, const SystemConfig& config);

}  // namespace qpe

#endif
