#pragma once

namespace kppca::cli {

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kNumeric = 4 };

// Parses argv, runs one subcommand, reports failures on stderr.
int run(int argc, char** argv);

}  // namespace kppca::cli
