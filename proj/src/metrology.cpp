#include "qpe/metrology.hpp"

#include <cmath>
#include <string>

namespace qpe {

namespace {
constexpr Complex kI{0.0, 1.0};
}

ComplexMatrix drho_dgamma(const SystemConfig& config, double t, double h_rel) {
  config.validate();
  if (h_rel < 1e-8 || h_rel > 1e-3) {
    throw InvalidArgument("h_rel must lie in [1e-8, 1e-3]");
  }
  if (t == 0.0) {
    return ComplexMatrix(config.dim);
  }
  const double tau_plus = config.gamma * (1.0 + h_rel) * t;
  const double tau_minus = config.gamma * (1.0 - h_rel) * t;
  EvolutionResult plus = evolve_analytic(config, tau_plus);
  EvolutionResult minus = evolve_analytic(config, tau_minus);
  Eigen::MatrixXcd d = (plus.state.matrix().mat() -
                        minus.state.matrix().mat()) /
                       (2.0 * h_rel * config.gamma);
  return ComplexMatrix(std::move(d));
}

QfiResult qfi_exact(const DensityMatrix& rho, const ComplexMatrix& drho,
                    double floor, double tau, double gamma) {
  if (floor < 0.0) {
    throw InvalidArgument("eigenvalue-sum floor must be >= 0");
  }
  if (drho.hermiticity_defect() > 1e-8) {
    throw NotHermitianError("drho/dgamma has Hermiticity defect " +
                            std::to_string(drho.hermiticity_defect()));
  }
  if (drho.dim() != rho.dim()) {
    throw InvalidArgument("rho and drho dimensions differ");
  }
  EigResult eig = hermitian_eigendecomposition(rho.matrix());
  // Matrix elements <psi_m| drho |psi_n> in the eigenbasis.
  Eigen::MatrixXcd m =
      eig.eigenvectors.adjoint() * drho.mat() * eig.eigenvectors;
  const int dim = rho.dim();
  double sum = 0.0;
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      const double denom = eig.eigenvalues(a) + eig.eigenvalues(b);
      if (denom > floor) {
        sum += std::norm(m(a, b)) / denom;
      }
    }
  }
  return {tau, gamma, 2.0 * sum, QfiMethod::exact_eig, std::nullopt};
}

QfiResult qfi_exact_at(const SystemConfig& config, double t, double h_rel,
                       double floor) {
  const double tau = config.gamma * t;
  EvolutionResult evo = evolve_analytic(config, tau);
  ComplexMatrix drho = drho_dgamma(config, t, h_rel);
  return qfi_exact(evo.state, drho, floor, tau, config.gamma);
}

QfiResult qfi_pure(const StateVector& psi, const StateVector& dpsi,
                   bool normalize, double tau, double gamma) {
  if (psi.dim() != dpsi.dim()) {
    throw InvalidArgument("psi and dpsi dimensions differ");
  }
  Eigen::VectorXcd v = psi.amplitudes;
  Eigen::VectorXcd dv = dpsi.amplitudes;
  if (normalize) {
    const double n = v.norm();
    if (n == 0.0) {
      throw InvalidArgument("cannot normalize the zero state");
    }
    // d(v/n) = dv/n - v d(n)/n^2 with d(n) = Re<v|dv>/n.
    const double dn = (v.dot(dv)).real() / n;
    dv = dv / n - v * (dn / (n * n));
    v /= n;
  }
  const Complex overlap = v.dot(dv);  // <psi|dpsi>
  double value = 4.0 * (dv.squaredNorm() - std::norm(overlap));
  if (value < 0.0 && value > -1e-12) value = 0.0;  // Cauchy-Schwarz noise
  return {tau, gamma, value, QfiMethod::pure_state, std::nullopt};
}

QfiResult qfi_approx_closed(double tau, const SystemConfig& config) {
  config.validate();
  if (tau < 0.0) {
    throw InvalidArgument("tau must be >= 0");
  }
  const double nbar = config.nbar();
  const double control = config.u1 + config.u2 + 2.0 * tau * nbar * config.u2;
  const double value = tau * tau / (config.gamma * config.gamma) * nbar *
                       std::exp(-tau) * (1.0 + 4.0 * control * control);
  return {tau, config.gamma, value, QfiMethod::closed_form, std::nullopt};
}

double cramer_rao_bound(const QfiResult& qfi, long n_measurements) {
  if (n_measurements < 1) {
    throw InvalidArgument("number of measurements must be >= 1");
  }
  if (!(qfi.value > 0.0)) {
    throw UnboundedVarianceError(
        "zero Fisher information: the variance bound is not finite");
  }
  return 1.0 / (static_cast<double>(n_measurements) * qfi.value);
}

FidelityResult fidelity_uhlmann(const DensityMatrix& rho0,
                                const DensityMatrix& rho, double tau) {
  if (rho0.dim() != rho.dim()) {
    throw InvalidArgument("density matrix dimensions differ");
  }
  double value = 0.0;
  if (rho0.purity() > 1.0 - 1e-8) {
    // rho0 = |phi><phi|: F = <phi|rho|phi>.
    EigResult eig = hermitian_eigendecomposition(rho0.matrix());
    const Eigen::VectorXcd phi = eig.eigenvectors.col(rho0.dim() - 1);
    value = (phi.adjoint() * rho.matrix().mat() * phi)(0, 0).real();
  } else {
    ComplexMatrix root = matrix_sqrt_psd(rho.matrix());
    Eigen::MatrixXcd inner = root.mat() * rho0.matrix().mat() * root.mat();
    inner = 0.5 * (inner + inner.adjoint()).eval();
    EigResult eig = hermitian_eigendecomposition(ComplexMatrix(inner));
    double tr = 0.0;
    for (int i = 0; i < eig.eigenvalues.size(); ++i) {
      tr += std::sqrt(std::max(0.0, eig.eigenvalues(i)));
    }
    value = tr * tr;
  }
  if (value < 0.0 && value > -1e-9) value = 0.0;
  if (value < 0.0 || value > 1.0 + 1e-9) {
    throw CorruptStateError("fidelity " + std::to_string(value) +
                            " outside [0, 1]");
  }
  return {tau, value, FidelityMethod::uhlmann};
}

FidelityResult fidelity_approx(double tau, const SystemConfig& config) {
  config.validate();
  if (tau < 0.0) {
    throw InvalidArgument("tau must be >= 0");
  }
  const double nbar = config.nbar();
  const Complex inner =
      1.0 + nbar * std::exp(Complex{-0.5 * tau,
                                    (config.u1 + config.u2) * tau +
                                        config.u2 * tau * tau * nbar});
  const double value =
      std::norm(std::exp(-0.5 * nbar - 0.5 * nbar * std::exp(-tau)) * inner);
  return {tau, value, FidelityMethod::pure_closed_form};
}

double deformation(const SystemConfig& config) {
  return 1.0 - fidelity_approx(2.0, config).value;
}

}  // namespace qpe
