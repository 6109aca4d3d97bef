#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace msamp::cli {

enum ExitCode : int {
  kOk = 0,
  kIoFailure = 1,
  kConstraintViolation = 2,
  kSingular = 3,
};

/// Runs one command line (without the program name), e.g.
/// {"synth", "--N", "1", "--M", "1", "--epsilon", "0.1", "--out", "s.json"}.
/// Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace msamp::cli
