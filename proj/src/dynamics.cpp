#include "qpe/dynamics.hpp"

#include <cmath>
#include <string>

namespace qpe {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXd;

constexpr Complex kI{0.0, 1.0};

// Right-hand side of the rescaled master equation, written elementwise so
// the banded structure of a is not lost:
//   out[p][q] = -i(h_p - h_q) rho[p][q]
//             + sqrt((p+1)(q+1)) rho[p+1][q+1] - (p+q)/2 rho[p][q]
void master_rhs(const MatrixXcd& rho, const VectorXd& h, MatrixXcd& out) {
  const int dim = static_cast<int>(rho.rows());
  for (int p = 0; p < dim; ++p) {
    for (int q = 0; q < dim; ++q) {
      Complex v = (-kI * (h(p) - h(q)) - 0.5 * (p + q)) * rho(p, q);
      if (p + 1 < dim && q + 1 < dim) {
        v += std::sqrt(static_cast<double>(p + 1) * (q + 1)) *
             rho(p + 1, q + 1);
      }
      out(p, q) = v;
    }
  }
}

}  // namespace

Complex rho_element_analytic(int p, int q, double tau,
                             const SystemConfig& config) {
  config.validate();
  if (p < 0 || q < 0) {
    throw InvalidArgument("Fock indices must be >= 0");
  }
  if (tau < 0.0) {
    throw InvalidArgument("tau must be >= 0");
  }

  const double nbar = config.nbar();
  const Complex delta{1.0, 2.0 * config.u2 * (p - q)};
  Complex exponent = -0.5 * delta * tau * static_cast<double>(p + q) -
                     kI * config.u1 * tau * static_cast<double>(p - q) -
                     nbar * (1.0 - (1.0 - std::exp(-delta * tau)) / delta);

  if (config.alpha == Complex{0.0, 0.0}) {
    return (p == 0 && q == 0) ? std::exp(exponent) : Complex{0.0, 0.0};
  }

  // lambda = alpha^p conj(alpha)^q / sqrt(p! q!), folded into the exponent
  // through its log magnitude so large p,q do not overflow.
  const double log_mag = (p + q) * std::log(std::abs(config.alpha)) -
                         0.5 * (std::lgamma(p + 1.0) + std::lgamma(q + 1.0));
  const double phase = (p - q) * std::arg(config.alpha);
  const Complex value = std::exp(exponent + log_mag + kI * phase);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw IntegrationError("non-finite matrix element at p=" +
                           std::to_string(p) + ", q=" + std::to_string(q));
  }
  return value;
}

EvolutionResult evolve_analytic(const SystemConfig& config, double tau,
                                bool renormalize) {
  config.validate();
  if (tau < 0.0) {
    throw InvalidArgument("tau must be >= 0");
  }
  const double tail = coherent_state(config.alpha, config.dim).tail;

  MatrixXcd rho(config.dim, config.dim);
  for (int p = 0; p < config.dim; ++p) {
    for (int q = p; q < config.dim; ++q) {
      const Complex v = rho_element_analytic(p, q, tau, config);
      rho(p, q) = v;
      if (q != p) rho(q, p) = std::conj(v);
    }
  }
  const double drift = std::abs(rho.trace().real() - 1.0);
  if (renormalize) {
    rho /= rho.trace().real();
  }
  return {tau, DensityMatrix(ComplexMatrix(std::move(rho)), tail),
          EvolveMethod::analytic, drift};
}

EvolutionResult evolve_ode(const SystemConfig& config, double tau, double dt) {
  config.validate();
  if (tau < 0.0) {
    throw InvalidArgument("tau must be >= 0");
  }
  if (!(dt > 0.0) || dt > 1e-3) {
    throw InvalidArgument("ODE step must satisfy 0 < dt <= 1e-3");
  }

  CoherentState cs = coherent_state(config.alpha, config.dim);
  MatrixXcd rho = cs.vec.amplitudes * cs.vec.amplitudes.adjoint();

  VectorXd h(config.dim);
  for (int n = 0; n < config.dim; ++n) {
    h(n) = config.u1 * n + config.u2 * static_cast<double>(n) * n;
  }

  const int dim = config.dim;
  MatrixXcd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim),
      tmp(dim, dim);
  double remaining = tau;
  long step = 0;
  while (remaining > 0.0) {
    const double step_dt = std::min(dt, remaining);
    master_rhs(rho, h, k1);
    tmp = rho + 0.5 * step_dt * k1;
    master_rhs(tmp, h, k2);
    tmp = rho + 0.5 * step_dt * k2;
    master_rhs(tmp, h, k3);
    tmp = rho + step_dt * k3;
    master_rhs(tmp, h, k4);
    rho += (step_dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    remaining -= step_dt;
    if (++step % 1000 == 0 && !rho.allFinite()) {
      throw IntegrationError("non-finite state at tau = " +
                             std::to_string(tau - remaining));
    }
  }
  if (!rho.allFinite()) {
    throw IntegrationError("non-finite state at tau = " + std::to_string(tau));
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double drift = std::abs(rho.trace().real() - 1.0);
  return {tau, DensityMatrix(ComplexMatrix(std::move(rho)), cs.tail),
          EvolveMethod::ode, drift};
}

ApproxPureState pure_state_approx(double tau, const SystemConfig& config) {
  config.validate();
  if (tau < 0.0) {
    throw InvalidArgument("tau must be >= 0");
  }
  const double nbar = config.nbar();
  const double prefactor = std::exp(-0.5 * nbar * std::exp(-tau));
  Eigen::VectorXcd amps(2);
  amps(0) = prefactor;
  amps(1) = prefactor * config.alpha *
            std::exp(Complex{-0.5 * tau,
                             -(config.u1 + config.u2) * tau -
                                 config.u2 * tau * tau * nbar});
  return {tau, StateVector(std::move(amps), false), prefactor};
}

StateVector pure_state_gamma_derivative(double t, const SystemConfig& config) {
  config.validate();
  if (t < 0.0) {
    throw InvalidArgument("t must be >= 0");
  }
  const double tau = config.gamma * t;
  const double nbar = config.nbar();
  const double half_ne = 0.5 * nbar * std::exp(-tau);
  const double prefactor = t * std::exp(-half_ne);
  const Complex big_n{-0.5 * tau,
                      -(config.u1 + config.u2) * tau -
                          config.u2 * nbar * tau * tau};
  Eigen::VectorXcd amps(2);
  amps(0) = prefactor * half_ne;
  amps(1) = prefactor * config.alpha *
            (half_ne - 0.5 -
             kI * (config.u1 + config.u2 + 2.0 * config.u2 * nbar * tau)) *
            std::exp(big_n);
  return StateVector(std::move(amps), false);
}

}  // namespace qpe
