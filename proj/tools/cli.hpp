#pragma once

#include <iosfwd>

namespace urwbpc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

// Entry point of the urwbpc tool; results go to `out` unless --out is given.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace urwbpc
