#include "cli_support.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "rodd/error.hpp"

namespace rodd::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text) {
  const std::string_view t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(value))
    throw ParseError("not a finite number: '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  if (trim(text).empty()) throw ParseError("empty grid");
  const auto range = split(text, ':');
  if (range.size() == 3) {
    const double start = parse_number(range[0]);
    const double stop = parse_number(range[1]);
    const double step = parse_number(range[2]);
    if (!(step > 0.0)) throw ParseError("grid step must be > 0");
    if (stop < start) throw ParseError("grid stop lies below its start");
    const double span = (stop - start) / step;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    if (count > 10'000'000) throw ParseError("grid has too many points");
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
    return grid;
  }
  if (range.size() != 1) throw ParseError("grid must be start:stop:step or a comma list");
  std::vector<double> grid;
  for (std::string_view item : split(text, ',')) grid.push_back(parse_number(item));
  return grid;
}

std::vector<std::size_t> parse_count_list(std::string_view text) {
  std::vector<std::size_t> out;
  for (double v : parse_grid(text)) {
    if (v < 1.0 || v != std::floor(v) || v > 1e12)
      throw ParseError("expected positive integers, got " + std::to_string(v));
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

double db_to_linear(double db) {
  if (!std::isfinite(db)) throw ParameterError("SNR in dB must be finite");
  return std::pow(10.0, db / 10.0);
}

std::vector<std::string> read_config_args(std::istream& in) {
  std::vector<std::string> args;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string_view key = trim(s.substr(0, eq));
    const std::string_view value = trim(s.substr(eq + 1));
    if (key.empty()) throw ParseError("config line " + std::to_string(lineno) + ": empty key");
    args.push_back("--" + std::string(key));
    args.emplace_back(value);
  }
  return args;
}

std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  bool found = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ParseError("--config needs a file name");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      found = true;
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      found = true;
      break;
    }
  }
  if (!found) return args;
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  const std::vector<std::string> extra = read_config_args(in);
  // args[0] is the program, args[1] the subcommand.
  const std::size_t at = std::min<std::size_t>(2, args.size());
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
  return args;
}

}  // namespace rodd::cli
