#pragma once

#include <iosfwd>

#include "entangle/cli/check.hpp"

namespace entangle::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInput = 2,
  kExitPropertyFailure = 3,
};

/// Parses argv and runs one command. Reports go to `out` (or the --out file),
/// diagnostics to `err`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err, const CheckHooks& hooks = {});

}  // namespace entangle::cli
