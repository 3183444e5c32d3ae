#pragma once

#include <ostream>

namespace mklock {

// Exit status: 0 success, 1 validation or equivalence failure (JSON
// diagnostic on err), 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mklock
