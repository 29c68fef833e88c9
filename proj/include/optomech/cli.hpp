#pragma once

#include <iosfwd>

namespace optomech::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kNumericError = 3,
};

/// Entry point for the `epr-optomech` tool. Data goes to --out (stdout for
/// "-"); failures print one `error: <kind>: <message>` line to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace optomech::cli
