#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace diffusion {

// Entry point behind the `diffusion` binary; takes argv-style arguments
// (without the program name) so tests can drive it with captured streams.
// Returns the process exit code.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace diffusion
