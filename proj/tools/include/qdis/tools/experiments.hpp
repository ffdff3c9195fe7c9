#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qdis/tools/report_writer.hpp"

namespace qdis::tools {

enum ExitCode : int { kSuccess = 0, kInconclusive = 1, kInvalidConfig = 2, kInternalError = 3 };

enum class OutputFormat { kJson, kCsv };

struct PeriodConfig {
  std::uint64_t N = 15;
  std::uint64_t b = 7;
  std::optional<unsigned> k;
  std::size_t samples = 32;
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::kJson;
};

struct QecConfig {
  std::string code = "five-qubit";
  /// pauli:<op><idx> | superposed | mixed | environment | all-paulis | phase-error
  std::string channel = "all-paulis";
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t env_dim = 4;
};

struct Report {
  Json body;
  int exit_code = kSuccess;
};

/// Exact distributions from all three paths, their pairwise deviations, the
/// samples drawn and the inferred period. Exit code 1 when no period could
/// be inferred.
Report run_period_experiment(const PeriodConfig& config);

/// One row per outcome r: r,measured,reduced_rho,full_psi
std::string period_csv(const Report& report);

/// Per-trial fidelity, product test and syndrome distribution. The syndrome
/// is recorded, never used for correction.
Report run_qec_experiment(const QecConfig& config);

/// Scalar-product report for every qubit of the named code.
Report verify_code(const std::string& code_name);

/// Tolerances used by the report checks.
inline constexpr double kEquivalenceTol = 1e-10;
inline constexpr double kFidelityTol = 1e-10;
inline constexpr double kProductTol = 1e-10;
inline constexpr double kScalarProductTol = 1e-12;

}  // namespace qdis::tools
