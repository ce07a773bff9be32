#ifndef QPE_ERRORS_HPP
#define QPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qpe {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Construction-time violations: bad dimensions, bad parameter ranges.
struct InvalidArgument : Error {
  using Error::Error;
};

// Fock truncation too small for the requested coherent amplitude.
struct TruncationError : Error {
  using Error::Error;
};

// A matrix failed a Hermiticity / positivity precondition.
struct NotHermitianError : Error {
  using Error::Error;
};
struct NotPsdError : Error {
  using Error::Error;
};

// A propagated state broke its invariants beyond tolerance.
struct CorruptStateError : Error {
  using Error::Error;
};

// Time stepping produced non-finite entries.
struct IntegrationError : Error {
  using Error::Error;
};

// Root bracketing failed for the extremum-time equation.
struct BracketError : Error {
  using Error::Error;
};

// No grid point satisfies the deformation constraint.
struct InfeasibleError : Error {
  InfeasibleError(const std::string& what, double min_d_found)
      : Error(what), min_d(min_d_found) {}
  double min_d;
};

// Zero Fisher information: the variance bound is not finite.
struct UnboundedVarianceError : Error {
  using Error::Error;
};

// Candidate generation could not produce positive rates.
struct DegenerateCandidatesError : Error {
  using Error::Error;
};

// Posterior weights degenerated even in log space.
struct RenormalizationError : Error {
  using Error::Error;
};

// CLI-facing error classes, mapped to exit codes by the driver.
struct ConfigError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace qpe

#endif
