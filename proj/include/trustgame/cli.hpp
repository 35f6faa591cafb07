#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trustgame::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitInternal = 1;

/// Entry point behind the `trustgame` binary: subcommands oracle, simulate, sweep.
/// Results go to `out` (or files given by --out); diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Values from a comma-separated list whose items are numbers or inclusive
/// `start:stop:step` ranges. Range points are snapped to 1e-12 so 0:1:0.1
/// yields the same doubles as the literals 0, 0.1, ..., 1.
std::vector<double> parse_value_list(const std::string& text, const std::string& field);

}  // namespace trustgame::cli
