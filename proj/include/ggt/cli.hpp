#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace ggt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInvariantViolation = 2;

/// Runs one invocation; `args` excludes the program name. The report goes to
/// `out`, diagnostics to `err`. Returns 0 on success, 1 on input errors
/// (including usage errors), 2 on internal invariant violations.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The invariant suite behind `selftest`: one entry per named check.
struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};
std::vector<SelftestCheck> run_selftest(std::uint64_t seed);

}  // namespace ggt
