#include "qpe/fock.hpp"

#include <cmath>
#include <string>

namespace qpe {

namespace {

void check_dim(int dim) {
  if (dim < 2) {
    throw InvalidArgument("Fock truncation must be >= 2, got " +
                          std::to_string(dim));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(int dim) {
  check_dim(dim);
  m_ = Eigen::MatrixXcd::Zero(dim, dim);
}

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw InvalidArgument("ComplexMatrix requires a square matrix");
  }
  check_dim(static_cast<int>(m_.rows()));
}

Complex ComplexMatrix::at(int p, int q) const {
  if (p < 0 || q < 0 || p >= dim() || q >= dim()) {
    throw InvalidArgument("matrix index (" + std::to_string(p) + "," +
                          std::to_string(q) + ") out of range for dim " +
                          std::to_string(dim()));
  }
  return m_(p, q);
}

void ComplexMatrix::set(int p, int q, Complex value) {
  if (p < 0 || q < 0 || p >= dim() || q >= dim()) {
    throw InvalidArgument("matrix index (" + std::to_string(p) + "," +
                          std::to_string(q) + ") out of range for dim " +
                          std::to_string(dim()));
  }
  m_(p, q) = value;
}

double ComplexMatrix::hermiticity_defect() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

StateVector::StateVector(Eigen::VectorXcd a, bool is_normalized)
    : amplitudes(std::move(a)), normalized(is_normalized) {
  if (normalized) {
    const double n2 = amplitudes.squaredNorm();
    if (std::abs(n2 - 1.0) > 1e-10) {
      throw InvalidArgument("state flagged normalized has |psi|^2 = " +
                            std::to_string(n2));
    }
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, double truncation_tail)
    : matrix_(std::move(matrix)), tail_(truncation_tail) {
  if (tail_ < 0.0) {
    throw InvalidArgument("truncation_tail must be >= 0");
  }
  if (matrix_.hermiticity_defect() > 1e-12) {
    throw CorruptStateError("density matrix not Hermitian, defect " +
                            std::to_string(matrix_.hermiticity_defect()));
  }
  const double tr = matrix_.trace().real();
  const double lo = 1.0 - std::max(1e-8, tail_);
  if (tr < lo || tr > 1.0 + 1e-8) {
    throw CorruptStateError("density matrix trace " + std::to_string(tr) +
                            " outside [" + std::to_string(lo) + ", 1+1e-8]");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_.mat(),
                                                     Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-8) {
    throw CorruptStateError("density matrix has eigenvalue " +
                            std::to_string(es.eigenvalues()(0)));
  }
}

double DensityMatrix::purity() const {
  return (matrix_.mat() * matrix_.mat()).trace().real();
}

void SystemConfig::validate() const {
  check_dim(dim);
  if (!(gamma > 0.0)) {
    throw InvalidArgument("gamma must be > 0");
  }
  if (u1 < 0.0 || u1 >= 1.0 || u2 < 0.0 || u2 >= 1.0) {
    throw InvalidArgument("controls u1, u2 must lie in [0, 1)");
  }
}

ComplexMatrix annihilation_matrix(int dim) {
  ComplexMatrix a(dim);
  for (int q = 1; q < dim; ++q) {
    a.mat()(q - 1, q) = std::sqrt(static_cast<double>(q));
  }
  return a;
}

ComplexMatrix control_hamiltonian(const SystemConfig& config) {
  config.validate();
  ComplexMatrix h(config.dim);
  for (int n = 0; n < config.dim; ++n) {
    h.mat()(n, n) = config.u1 * n + config.u2 * static_cast<double>(n) * n;
  }
  return h;
}

CoherentState coherent_state(Complex alpha, int dim) {
  check_dim(dim);
  Eigen::VectorXcd c(dim);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) {
    c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  }
  double tail = 1.0 - c.squaredNorm();
  if (tail < 0.0) tail = 0.0;
  if (tail > 0.01) {
    throw TruncationError("coherent state |alpha|^2 = " +
                          std::to_string(std::norm(alpha)) +
                          " leaves tail " + std::to_string(tail) +
                          " at dim " + std::to_string(dim));
  }
  return {StateVector(std::move(c), false), tail};
}

DensityMatrix coherent_density(Complex alpha, int dim) {
  CoherentState cs = coherent_state(alpha, dim);
  Eigen::MatrixXcd rho =
      cs.vec.amplitudes * cs.vec.amplitudes.adjoint();
  return DensityMatrix(ComplexMatrix(std::move(rho)), cs.tail);
}

EigResult hermitian_eigendecomposition(const ComplexMatrix& m) {
  if (m.hermiticity_defect() > 1e-10) {
    throw NotHermitianError("eigendecomposition input has Hermiticity defect " +
                            std::to_string(m.hermiticity_defect()));
  }
  const Eigen::MatrixXcd sym = 0.5 * (m.mat() + m.mat().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym);
  return {es.eigenvalues(), es.eigenvectors()};
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m) {
  EigResult eig = hermitian_eigendecomposition(m);
  Eigen::VectorXd lam = eig.eigenvalues;
  if (lam(0) < -1e-6) {
    throw NotPsdError("matrix eigenvalue " + std::to_string(lam(0)) +
                      " below the PSD floor");
  }
  for (int i = 0; i < lam.size(); ++i) {
    lam(i) = lam(i) > 0.0 ? std::sqrt(lam(i)) : 0.0;
  }
  Eigen::MatrixXcd root = eig.eigenvectors * lam.asDiagonal() *
                          eig.eigenvectors.adjoint();
  return ComplexMatrix(std::move(root));
}

}  // namespace qpe
