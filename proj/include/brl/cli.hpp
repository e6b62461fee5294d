#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace brl::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kInputError = 2;
inline constexpr int kNumericalFailure = 3;

// args excludes the program name. Reports go to out, usage text to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace brl::cli
