#pragma once

#include <iosfwd>
#include <string>

#include "kickbound/profile.hpp"

namespace kickbound::cli {

enum ExitCode : int { kOk = 0, kInconclusive = 1, kInvalidInput = 2 };

/// Runs one command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Two-column CSV (r, b) with a header line, interpolated by a monotone
/// spline and held constant beyond the last row.
CurvatureProfile load_csv_profile(const std::string& path);

}  // namespace kickbound::cli
