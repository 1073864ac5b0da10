#pragma once

#include <ostream>

namespace covercomm::cli {

/// Exit statuses of `covercomm`.
enum Status : int { Ok = 0, Negative = 1, Inconclusive = 2, BadInput = 3 };

/// `covercomm <module> <verb> [files] [options]`. Results go to `out` (as a
/// certificate where one applies), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const char* version();

} // namespace covercomm::cli
