#pragma once

#include <string>
#include <vector>

namespace tude {

// Command-line front end. Subcommands: denoise, add-noise, evaluate,
// benchmark, synth. Exit codes: 0 success, 1 usage, 2 I/O or parse failure,
// 3 pipeline failure.
int run_cli(int argc, const char* const* argv);

// Same, for callers holding the arguments as strings (no program name).
int run_cli(const std::vector<std::string>& args);

} // namespace tude
