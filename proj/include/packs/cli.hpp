#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace packs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNoConvergence = 1;
inline constexpr int kExitConfigError = 2;

/// Runs one subcommand: constant, spectrum, evolve, steady, sweep, cover or
/// identity. `args` excludes the program name. Returns the process exit code.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Replaces (or adds) `section.key = value` assignments in config text.
std::string apply_overrides(const std::string& text, const std::vector<std::string>& assignments);

}  // namespace packs::cli
