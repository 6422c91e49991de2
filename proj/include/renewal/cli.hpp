#pragma once

#include <string>
#include <vector>

namespace renewal {

// Runs one subcommand of {tilt, oracle, simulate, predict, compare, srtc,
// calibrate}.  args excludes the program name.  Returns the process exit
// code: 0 success, 2 config error, 3 numeric-certification failure,
// 4 regime-dispatch error.  The CSV report is written to --out (or the
// output.path config key) only on success; with neither, it goes to stdout.
int run(const std::vector<std::string>& args);

}  // namespace renewal
