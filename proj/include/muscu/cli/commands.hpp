#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "muscu/cli/config.hpp"
#include "muscu/stability.hpp"

namespace muscu::cli {

/// Process exit codes. Verdict codes are the machine contract of `check`.
enum ExitCode : int {
  kExitCertified = 0,
  kExitNotCertified = 1,
  kExitUnknown = 2,
  kExitInvalidConfig = 3,
  kExitRuntimeFailure = 4,
};

int exit_code(Verdict v);

/// Human-facing rendering; the layout is not a stable interface.
std::string render_report(const ScenarioConfig& cfg, const StabilityReport& report);

StabilityReport certify(const ScenarioConfig& cfg);

int cmd_check(const ScenarioConfig& cfg, bool run_verify, std::ostream& out, std::ostream& err);

/// Writes the trajectory CSV (every `stride`-th sample plus the last) and a
/// one-line summary to `summary`.
int cmd_simulate(const ScenarioConfig& cfg, std::ostream& csv, std::ostream& summary, std::size_t stride = 1);

/// n samples of P over [theta_min, theta_max], endpoints included.
int cmd_potential(const ScenarioConfig& cfg, std::size_t n, std::ostream& csv);

struct SweepAxis {
  std::string param;
  double lo = 0;
  double hi = 0;
  std::size_t n = 0;

  double value(std::size_t i) const;
};

/// Parses "LO:HI:N".
SweepAxis parse_range(const std::string& param, const std::string& range);

/// Rows follow input order. Several axes advance in lockstep and must have
/// the same n. `threads` == 0 uses MUSCU_THREADS or the hardware count.
int cmd_sweep(const ScenarioConfig& cfg, const std::vector<SweepAxis>& axes, std::ostream& csv,
              std::size_t threads = 0);

/// Full command line (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace muscu::cli
