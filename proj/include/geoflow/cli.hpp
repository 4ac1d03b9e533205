#pragma once

// Command-line surface. Exit codes: 0 success, 1 usage/input error,
// 2 numeric failure, 3 verification failure.

namespace geoflow {

int run_cli(int argc, const char* const* argv);

}  // namespace geoflow
