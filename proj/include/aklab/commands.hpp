#pragma once

#include <ostream>
#include <string>

#include "aklab/config.hpp"
#include "aklab/report.hpp"

namespace aklab {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

std::string artifact_version();

/// The verification suite: structure invariants, identity battery, adjointness, first variation, explicit
/// Lichnerowicz, Salamon and L_K identities, Hessian probes and symbol checks. Deterministic in (config, seed).
VerificationReport run_verify(const RunConfig& config, std::ostream* log = nullptr);

VerificationReport run_geodesic(const RunConfig& config, std::ostream* log = nullptr);
VerificationReport run_hessian(const RunConfig& config, std::ostream* log = nullptr);
VerificationReport run_symbol(const RunConfig& config, std::ostream* log = nullptr);

/// Each command writes its artifacts under config.out_dir and returns an exit code.
int cmd_verify(const RunConfig& config, std::ostream& log);
int cmd_flow(const RunConfig& config, std::ostream& log);
int cmd_geodesic(const RunConfig& config, std::ostream& log);
int cmd_hessian(const RunConfig& config, std::ostream& log);
int cmd_symbol(const RunConfig& config, std::ostream& log);

}  // namespace aklab
