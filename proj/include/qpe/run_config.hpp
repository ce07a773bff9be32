#ifndef QPE_RUN_CONFIG_HPP
#define QPE_RUN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qpe/fock.hpp"
#include "qpe/moo.hpp"

namespace qpe {

struct TauGrid {
  double start = 0.0;
  double stop = 6.0;
  int count = 121;
};

struct CandidateSpec {
  double center = 0.0;  // 0 means "use gamma"
  double spread = -1.0; // < 0 means "use 0.4 * center"
  int n = 5;
};

/// One configuration document for every CLI command; defaults mirror the
/// reference figure parameters (nbar = 1, u1 = u2 = 0.05, gamma = 1).
struct RunConfig {
  std::string scenario;
  double alpha_re = 1.0;
  double alpha_im = 0.0;
  double gamma = 1.0;
  double u1 = 0.05;
  double u2 = 0.05;
  int dim = 10;
  TauGrid tau_grid;
  GridSpec grid{{0.0, 0.99, 201}, {0.0, 0.99, 201}, {0.2, 0.2, 1}};
  std::vector<double> epsilons{0.10, 0.15};
  std::uint64_t seed = 1;
  double efficiency = 1.0;
  double duration = 10.0;
  double dt = 1e-3;
  CandidateSpec candidates;
  std::string out_dir = "out";
  std::string format = "csv";

  Complex alpha() const { return {alpha_re, alpha_im}; }
  SystemConfig system() const;

  /// Parse a JSON document; unknown keys are rejected by name.
  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_file(const std::string& path);
};

}  // namespace qpe

#endif
