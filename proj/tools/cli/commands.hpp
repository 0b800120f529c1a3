#pragma once

#include <string>
#include <vector>

namespace herdsig::cli {

// Exit codes: 0 success, 2 malformed input or usage, 1 internal error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitMalformed = 2;

int run(int argc, const char* const* argv);
// Same as run(), with args excluding the program name.
int run(const std::vector<std::string>& args);

}  // namespace herdsig::cli
