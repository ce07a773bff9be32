#ifndef QPE_FOCK_HPP
#define QPE_FOCK_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qpe/errors.hpp"

namespace qpe {

using Complex = std::complex<double>;

/// Dense complex square matrix over a truncated Fock basis.
/// Row p / column q are Fock occupation numbers, indexed from 0.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(int dim);
  explicit ComplexMatrix(Eigen::MatrixXcd m);

  int dim() const { return static_cast<int>(m_.rows()); }

  Complex at(int p, int q) const;
  void set(int p, int q, Complex value);

  const Eigen::MatrixXcd& mat() const { return m_; }
  Eigen::MatrixXcd& mat() { return m_; }

  Complex trace() const { return m_.trace(); }
  double hermiticity_defect() const;

 private:
  Eigen::MatrixXcd m_;
};

/// Amplitudes c_n over the truncated Fock basis.  The `normalized` flag,
/// when set, asserts unit norm within 1e-10; the two-level approximate
/// state carries it unset.
struct StateVector {
  Eigen::VectorXcd amplitudes;
  bool normalized = false;

  StateVector() = default;
  StateVector(Eigen::VectorXcd a, bool is_normalized);

  int dim() const { return static_cast<int>(amplitudes.size()); }
  double norm() const { return amplitudes.norm(); }
};

/// Hermitian, unit-trace, positive-semidefinite state.  Invariants are
/// checked at construction; truncation_tail is the estimated probability
/// mass beyond the truncation and loosens the trace tolerance.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix matrix, double truncation_tail);

  const ComplexMatrix& matrix() const { return matrix_; }
  double truncation_tail() const { return tail_; }
  int dim() const { return matrix_.dim(); }
  double trace_real() const { return matrix_.trace().real(); }
  double purity() const;

 private:
  ComplexMatrix matrix_;
  double tail_;
};

/// Physical scenario: coherent amplitude, dissipation rate and the
/// rescaled controls u1 = k1/gamma, u2 = k2/gamma.
struct SystemConfig {
  Complex alpha;
  double gamma = 1.0;
  double u1 = 0.0;
  double u2 = 0.0;
  int dim = 20;

  void validate() const;
  double nbar() const { return std::norm(alpha); }
  double k1() const { return u1 * gamma; }
  double k2() const { return u2 * gamma; }
};

struct CoherentState {
  StateVector vec;
  double tail;  // 1 - sum |c_n|^2
};

struct EigResult {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors; // orthonormal columns
};

/// a[p,q] = sqrt(q) if p = q-1.
ComplexMatrix annihilation_matrix(int dim);

/// diag(u1*n + u2*n^2).
ComplexMatrix control_hamiltonian(const SystemConfig& config);

/// c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!).  Errors if the reported
/// tail exceeds 0.01 at the given truncation.
CoherentState coherent_state(Complex alpha, int dim);

/// |alpha><alpha| truncated, tail recorded.
DensityMatrix coherent_density(Complex alpha, int dim);

EigResult hermitian_eigendecomposition(const ComplexMatrix& m);

/// Hermitian PSD square root; eigenvalues in [-1e-6, 0) are clamped to
/// zero, anything below -1e-6 is treated as a corrupt state.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m);

}  // namespace qpe

#endif
