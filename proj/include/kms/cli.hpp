#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kms::cli {

// Command-line entry point behind main(). `args` excludes the program name.
// Results go to `out`, diagnostics to `err`. Returns 0 on success, 2 on
// usage or input-parse errors, 1 on runtime failures (including a verify
// suite with failing checks).
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace kms::cli
