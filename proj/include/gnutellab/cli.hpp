#pragma once

#include <ostream>
#include <string>

#include "gnutellab/analysis.hpp"

namespace gnutellab::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kInputError = 2, kInvariant = 3 };

// Entry point of the `gnutellab` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "1.02 Gbps / 330 TB/month"
std::string format_traffic(const TrafficEstimate& estimate);

}  // namespace gnutellab::cli
