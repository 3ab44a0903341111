#pragma once

// Argument plumbing shared by the rodd command-line tool: numeric grids,
// dB conversion and flat config files.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rodd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCheckFailed = 3;

/// `start:stop:step` (inclusive, step > 0) or a comma list `a,b,c`.
/// Throws ParseError on malformed or empty input.
std::vector<double> parse_grid(std::string_view text);

/// Same syntax restricted to positive integers.
std::vector<std::size_t> parse_count_list(std::string_view text);

/// 10^(db/10); non-finite input throws ParameterError.
double db_to_linear(double db);

/// Reads `key = value` lines ('#' starts a comment) and returns them as
/// `--key value` argument pairs in file order.
std::vector<std::string> read_config_args(std::istream& in);

/// Rewrites argv so that arguments from `--config FILE` come right after
/// the subcommand name and before the explicit flags, which therefore win.
std::vector<std::string> expand_config(std::vector<std::string> args);

}  // namespace rodd::cli
