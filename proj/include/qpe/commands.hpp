#ifndef QPE_COMMANDS_HPP
#define QPE_COMMANDS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "qpe/run_config.hpp"

namespace qpe {

/// Figure-1 data: exact and closed-form QFI curves for the four control
/// settings (none, linear, kerr, both).
std::vector<std::filesystem::path> cmd_qfi_curve(const RunConfig& rc);

/// Figure-2 data: Uhlmann and closed-form fidelity curves.
std::vector<std::filesystem::path> cmd_fidelity_curve(const RunConfig& rc);

/// Epsilon-constrained optimization report plus the (u1, u2) surface.
std::vector<std::filesystem::path> cmd_optimize(const RunConfig& rc);

/// Figure-4 data: i_star and deformation over (u2, |alpha|^2) at u1 = 0.
std::vector<std::filesystem::path> cmd_scan_alpha(const RunConfig& rc);

/// One seeded estimation experiment: record, posterior weights, summary.
std::vector<std::filesystem::path> cmd_estimate(const RunConfig& rc);

/// Density-matrix elements of the analytic solution over the tau grid.
std::vector<std::filesystem::path> cmd_evolve(const RunConfig& rc);

/// Dispatch by scenario name ("qfi-curve", "fidelity-curve", "optimize",
/// "scan-alpha", "estimate", "evolve").
std::vector<std::filesystem::path> run_scenario(const RunConfig& rc);

/// 17-significant-digit decimal rendering, round-trip exact.
std::string format_double(double v);

/// Write-temp-then-rename; creates parent directories.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace qpe

#endif
