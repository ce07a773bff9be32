#ifndef QPE_METROLOGY_HPP
#define QPE_METROLOGY_HPP

#include <optional>

#include "qpe/dynamics.hpp"
#include "qpe/fock.hpp"

namespace qpe {

enum class QfiMethod { exact_eig, pure_state, closed_form };

struct QfiResult {
  double tau = 0.0;
  double gamma = 1.0;
  double value = 0.0;  // units of time^2
  QfiMethod method = QfiMethod::exact_eig;
  std::optional<long> n_measurements;
};

enum class FidelityMethod { uhlmann, pure_closed_form };

struct FidelityResult {
  double tau = 0.0;
  double value = 0.0;
  FidelityMethod method = FidelityMethod::uhlmann;
};

/// Central finite difference of the analytic state over gamma at fixed
/// (u1, u2, t); equals t * d rho / d tau.
ComplexMatrix drho_dgamma(const SystemConfig& config, double t,
                          double h_rel = 1e-5);

/// Eigenbasis QFI sum; pairs with p_m + p_n <= floor are skipped.
QfiResult qfi_exact(const DensityMatrix& rho, const ComplexMatrix& drho,
                    double floor = 1e-12, double tau = 0.0,
                    double gamma = 1.0);

/// Convenience wrapper: full exact QFI of the analytic state at time t.
QfiResult qfi_exact_at(const SystemConfig& config, double t,
                       double h_rel = 1e-5, double floor = 1e-12);

/// Pure-state QFI 4(<dpsi|dpsi> - |<psi|dpsi>|^2).  With normalize set
/// (the default) an unnormalized input pair is projected onto the
/// normalized path first; the literal mode evaluates the inputs verbatim.
QfiResult qfi_pure(const StateVector& psi, const StateVector& dpsi,
                   bool normalize = true, double tau = 0.0,
                   double gamma = 1.0);

/// Closed-form approximate QFI
///   (tau^2/gamma^2) |alpha|^2 e^{-tau} (1 + 4(u1 + u2 + 2 tau |alpha|^2 u2)^2).
QfiResult qfi_approx_closed(double tau, const SystemConfig& config);

/// 1 / (N * I).  Zero information raises UnboundedVarianceError.
double cramer_rao_bound(const QfiResult& qfi, long n_measurements);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) rho0 sqrt(rho)))^2, with a
/// shortcut to <phi|rho|phi> when rho0 is pure.
FidelityResult fidelity_uhlmann(const DensityMatrix& rho0,
                                const DensityMatrix& rho, double tau = 0.0);

/// Closed-form fidelity of the unnormalized two-level approximation
/// against the initial coherent state; literal, no renormalization.
FidelityResult fidelity_approx(double tau, const SystemConfig& config);

/// 1 - fidelity_approx at the extremum time tau* = 2.
double deformation(const SystemConfig& config);

}  // namespace qpe

#endif
