#pragma once

#include <cstdint>
#include <string>

#include "noisewarp/core.hpp"

namespace noisewarp::cli {

// Exit codes: 0 success, 1 bad arguments or malformed input, 2 internal
// invariant violation.
int cli_main(int argc, char** argv);

// Parses "8x8" or "16x16x16". Throws std::invalid_argument.
Shape parse_shape(const std::string& text);

// The smooth 2D flow used by `converge` when no --flow is given.
FlowField default_convergence_flow(const Shape& shape);

// Applies NOISEWARP_THREADS if set (0 = all cores). Throws on a malformed value.
void apply_thread_env();

}  // namespace noisewarp::cli
