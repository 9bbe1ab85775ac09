#pragma once

#include <ostream>

namespace kptau::cli {

/// Runs the kptau command line. JSON lines go to `out`, the human summary and
/// error messages to `err`. Returns 0 iff every reported `pass` is true.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kptau::cli
