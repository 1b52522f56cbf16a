#pragma once

namespace rtg {

// Exit codes: 0 success, 2 configuration error, 3 solver error, 4 verification failure.
int run_cli(int argc, char** argv);

}  // namespace rtg
