#pragma once

#include <iosfwd>

namespace tergm {

/// Entry point of the `tergm` tool. Returns the process exit code:
/// 0 success, 1 usage error, 2 data error, 3 numerical failure.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tergm
