#include "rodd/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rodd/error.hpp"
#include "rodd/format.hpp"
#include "rodd/rng.hpp"

namespace rodd {

namespace {

constexpr std::uint64_t kPlacementTag = 0x706c6163;  // "plac"
constexpr std::uint64_t kFadingTag = 0x66616465;     // "fade"

}  // namespace

const char* to_string(Fading f) {
  switch (f) {
    case Fading::none:
      return "none";
    case Fading::rayleigh:
      return "rayleigh";
  }
  return "none";
}

Fading fading_from_string(std::string_view s) {
  if (s == "none") return Fading::none;
  if (s == "rayleigh") return Fading::rayleigh;
  throw ParameterError("unknown fading model '" + std::string(s) + "'");
}

double Topology::unit_snr(std::size_t j) const {
  return unit_snr_override.empty() ? params.unit_snr : unit_snr_override[j];
}

double Topology::distance(std::size_t k, std::size_t j) const {
  double dx = std::abs(positions[k].x - positions[j].x);
  double dy = std::abs(positions[k].y - positions[j].y);
  if (params.torus) {
    dx = std::min(dx, area_side - dx);
    dy = std::min(dy, area_side - dy);
  }
  return std::hypot(dx, dy);
}

void Topology::validate() const {
  if (!(params.alpha >= 2.0)) throw ParameterError("path-loss exponent must be >= 2");
  if (!(params.unit_snr > 0.0)) throw ParameterError("unit SNR must be > 0");
  if (!(params.neighbor_threshold > 0.0)) throw ParameterError("neighbor threshold must be > 0");
  if (!unit_snr_override.empty()) {
    if (unit_snr_override.size() != positions.size())
      throw ParameterError("per-node unit SNR override has wrong length");
    for (double g : unit_snr_override)
      if (!(g > 0.0)) throw ParameterError("unit SNR must be > 0");
  }
  if (params.torus && !(area_side > 0.0)) throw ParameterError("torus needs a positive area side");
}

LinkGains::LinkGains(std::size_t count) : count_(count), gamma_(count * count, 0.0) {}

LinkGains::LinkGains(std::size_t count, std::vector<double> row_major)
    : count_(count), gamma_(std::move(row_major)) {
  if (gamma_.size() != count_ * count_) throw LengthMismatchError("gain matrix is not K x K");
  for (std::size_t k = 0; k < count_; ++k) {
    gamma_[k * count_ + k] = 0.0;
    for (std::size_t j = 0; j < count_; ++j)
      if (!(gamma_[k * count_ + j] >= 0.0)) throw ParameterError("link gains must be >= 0");
  }
}

void LinkGains::set(std::size_t k, std::size_t j, double value) {
  if (!(value >= 0.0)) throw ParameterError("link gains must be >= 0");
  if (k != j) gamma_[k * count_ + j] = value;
}

GainModel::GainModel(const Topology& topology, std::uint64_t seed)
    : topology_(&topology), seed_(seed) {
  topology.validate();
}

double GainModel::gain(std::size_t k, std::size_t j) const {
  if (k == j) return 0.0;
  const Topology& t = *topology_;
  const double d = t.distance(k, j);
  if (d == 0.0) {
    throw SingularPathLossError("nodes " + std::to_string(k) + " and " + std::to_string(j) +
                                " are coincident");
  }
  double g = t.unit_snr(j) * std::pow(d, -t.params.alpha);
  if (t.params.fading == Fading::rayleigh) {
    // |h|^2 ~ Exp(1), independent per ordered pair.
    const std::uint64_t key = rng::combine(rng::combine(seed_, kFadingTag), k);
    g *= -std::log(1.0 - rng::to_unit(rng::word(key, j)));
  }
  return g;
}

void GainModel::row(std::size_t k, std::span<double> out) const {
  if (out.size() != size()) throw LengthMismatchError("gain row buffer has wrong length");
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = gain(k, j);
}

bool NeighborSet::contains(std::size_t j) const {
  return std::binary_search(members.begin(), members.end(), j);
}

Topology generate_poisson_network(double area_side, double density, std::uint64_t seed,
                                  const LinkParams& params) {
  if (!(area_side > 0.0)) throw ParameterError("area side must be > 0");
  if (!(density >= 0.0) || !std::isfinite(density)) throw ParameterError("density must be >= 0");
  if (density == 0.0) throw EmptyNetworkError("density is zero; the network is empty");

  // Count unit-rate exponential arrivals falling in [0, mean].
  rng::Stream stream(rng::combine(seed, kPlacementTag));
  const double mean = density * area_side * area_side;
  std::size_t count = 0;
  for (double t = stream.exponential(); t <= mean; t += stream.exponential()) ++count;
  if (count == 0) throw EmptyNetworkError("Poisson draw produced zero nodes");

  Topology topo;
  topo.area_side = area_side;
  topo.params = params;
  topo.positions.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = stream.uniform() * area_side;
    const double y = stream.uniform() * area_side;
    topo.positions.push_back({x, y});
  }
  topo.validate();
  return topo;
}

LinkGains link_gains(const Topology& topology, std::uint64_t seed) {
  const std::size_t n = topology.size();
  if (n < 2) throw ParameterError("link gains need at least 2 nodes");
  GainModel model(topology, seed);
  LinkGains gains(n);
  std::vector<double> row(n);
  for (std::size_t k = 0; k < n; ++k) {
    model.row(k, row);
    for (std::size_t j = 0; j < n; ++j) gains.set(k, j, row[j]);
  }
  return gains;
}

NeighborSet neighbors(std::span<const double> gain_row, std::size_t k, double threshold) {
  if (k >= gain_row.size()) throw ParameterError("node index out of range");
  NeighborSet set;
  for (std::size_t j = 0; j < gain_row.size(); ++j)
    if (j != k && gain_row[j] >= threshold) set.members.push_back(j);
  return set;
}

NeighborSet neighbors(const LinkGains& gains, std::size_t k, double threshold) {
  if (k >= gains.size()) throw ParameterError("node index out of range");
  return neighbors(gains.row(k), k, threshold);
}

void write_topology(std::ostream& os, const Topology& t) {
  os << "rodd-topology count=" << t.size() << " alpha=" << format_g(t.params.alpha, 17)
     << " unit_snr=" << format_g(t.params.unit_snr, 17) << " fading=" << to_string(t.params.fading)
     << " threshold=" << format_g(t.params.neighbor_threshold, 17)
     << " torus=" << (t.params.torus ? 1 : 0) << " side=" << format_g(t.area_side, 17) << '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << i << ' ' << format_g(t.positions[i].x, 17) << ' ' << format_g(t.positions[i].y, 17);
    if (!t.unit_snr_override.empty()) os << ' ' << format_g(t.unit_snr_override[i], 17);
    os << '\n';
  }
}

Topology read_topology(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("topology: missing header");
  std::istringstream header(line);
  std::string token;
  header >> token;
  if (token != "rodd-topology") throw ParseError("topology: bad magic '" + token + "'");

  Topology t;
  std::size_t count = 0;
  bool have_count = false;
  while (header >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ParseError("topology: malformed header field '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      if (key == "count") {
        count = std::stoull(value);
        have_count = true;
      } else if (key == "alpha") {
        t.params.alpha = std::stod(value);
      } else if (key == "unit_snr") {
        t.params.unit_snr = std::stod(value);
      } else if (key == "fading") {
        t.params.fading = fading_from_string(value);
      } else if (key == "threshold") {
        t.params.neighbor_threshold = std::stod(value);
      } else if (key == "torus") {
        t.params.torus = value == "1";
      } else if (key == "side") {
        t.area_side = std::stod(value);
      } else {
        throw ParseError("topology: unknown header field '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw ParseError("topology: bad value for '" + key + "'");
    }
  }
  if (!have_count) throw ParseError("topology: header lacks count");

  t.positions.resize(count);
  std::vector<double> overrides;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(is, line)) throw ParseError("topology: truncated node list");
    std::istringstream row(line);
    std::size_t index = 0;
    Point p;
    if (!(row >> index >> p.x >> p.y) || index != i)
      throw ParseError("topology: bad node line " + std::to_string(i));
    t.positions[i] = p;
    double snr = 0.0;
    if (row >> snr) {
      if (overrides.size() != i) throw ParseError("topology: unit SNR override on some lines only");
      overrides.push_back(snr);
    }
  }
  if (!overrides.empty() && overrides.size() != count)
    throw ParseError("topology: unit SNR override on some lines only");
  t.unit_snr_override = std::move(overrides);
  t.validate();
  return t;
}

void write_gains(std::ostream& os, const LinkGains& gains) {
  os << gains.size() << '\n';
  for (std::size_t k = 0; k < gains.size(); ++k) {
    for (std::size_t j = 0; j < gains.size(); ++j) {
      if (j) os << ' ';
      os << format_g(gains.at(k, j), 17);
    }
    os << '\n';
  }
}

LinkGains read_gains(std::istream& is) {
  std::size_t n = 0;
  if (!(is >> n) || n == 0) throw ParseError("gains: missing or zero node count");
  std::vector<double> values(n * n);
  for (double& v : values)
    if (!(is >> v)) throw ParseError("gains: expected " + std::to_string(n * n) + " values");
  return LinkGains(n, std::move(values));
}

}  // namespace rodd
