#pragma once
// Command-line front end. Exit codes: 0 success, 1 validation or usage
// error, 2 I/O error.

#include <ostream>
#include <string>
#include <vector>

namespace biasdyn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Long flag names ("--seed", ...) accepted by a subcommand, or by the top
// level when `subcommand` is empty.
std::vector<std::string> accepted_flags(const std::string& subcommand);

std::vector<std::string> subcommands();

}  // namespace biasdyn::cli
