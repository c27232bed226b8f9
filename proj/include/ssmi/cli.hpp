#pragma once

#include <string>
#include <vector>

namespace ssmi::cli {

/// Exit codes: 0 success, 1 validation errors (or warnings under --strict),
/// 2 verification failure, 3 I/O or usage error.
enum ExitStatus : int {
    kOk = 0,
    kValidationError = 1,
    kVerificationFailed = 2,
    kUsageError = 3,
};

int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without the program name

}  // namespace ssmi::cli
