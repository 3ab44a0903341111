#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace rodd {

/// Network interface address; the seed of a node's signatures.
struct Nia {
  std::uint64_t value = 0;
  friend constexpr auto operator<=>(const Nia&, const Nia&) = default;
};

enum class Fading { none, rayleigh };

const char* to_string(Fading f);
Fading fading_from_string(std::string_view s);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Link-budget parameters shared by every node of a topology.
struct LinkParams {
  double alpha = 4.0;               // path-loss exponent, >= 2
  double unit_snr = 100.0;          // linear SNR at unit distance, no fading
  Fading fading = Fading::none;
  double neighbor_threshold = 1.0;  // linear SNR
  bool torus = false;               // wrap distances around the square
};

struct Topology {
  std::vector<Point> positions;
  /// Square side in meters; only used for torus distances and serialization.
  double area_side = 0.0;
  LinkParams params;
  /// Per-node unit SNR override. Empty means params.unit_snr for every node.
  std::vector<double> unit_snr_override;

  std::size_t size() const noexcept { return positions.size(); }
  double unit_snr(std::size_t j) const;
  double distance(std::size_t k, std::size_t j) const;
  void validate() const;
};

/// Dense K x K matrix, gamma[k][j] = SNR at receiver k from transmitter j.
/// The diagonal is stored as zero and ignored by every consumer.
class LinkGains {
 public:
  LinkGains() = default;
  explicit LinkGains(std::size_t count);
  LinkGains(std::size_t count, std::vector<double> row_major);

  std::size_t size() const noexcept { return count_; }
  double at(std::size_t k, std::size_t j) const { return gamma_[k * count_ + j]; }
  void set(std::size_t k, std::size_t j, double value);
  std::span<const double> row(std::size_t k) const {
    return {gamma_.data() + k * count_, count_};
  }

 private:
  std::size_t count_ = 0;
  std::vector<double> gamma_;
};

/// Lazily evaluated gain field. Each entry, including its fading draw, is a
/// pure function of (seed, k, j), so rows can be computed on demand for
/// networks too large to hold a dense K x K matrix.
class GainModel {
 public:
  GainModel(const Topology& topology, std::uint64_t seed);

  std::size_t size() const noexcept { return topology_->size(); }
  double gain(std::size_t k, std::size_t j) const;
  /// Fills out[j] = gain(k, j); out[k] = 0.
  void row(std::size_t k, std::span<double> out) const;
  const Topology& topology() const noexcept { return *topology_; }

 private:
  const Topology* topology_;
  std::uint64_t seed_;
};

struct NeighborSet {
  std::vector<std::size_t> members;  // sorted ascending

  std::size_t size() const noexcept { return members.size(); }
  bool empty() const noexcept { return members.empty(); }
  bool contains(std::size_t j) const;
  friend bool operator==(const NeighborSet&, const NeighborSet&) = default;
};

/// Poisson point process on [0, area_side)^2. Throws EmptyNetworkError when
/// no node is drawn (or density is zero).
Topology generate_poisson_network(double area_side, double density, std::uint64_t seed,
                                  const LinkParams& params = {});

LinkGains link_gains(const Topology& topology, std::uint64_t seed);

NeighborSet neighbors(const LinkGains& gains, std::size_t k, double threshold);
NeighborSet neighbors(std::span<const double> gain_row, std::size_t k, double threshold);

void write_topology(std::ostream& os, const Topology& topology);
Topology read_topology(std::istream& is);

/// Plain-text gain matrix: first line K, then K lines of K values.
void write_gains(std::ostream& os, const LinkGains& gains);
LinkGains read_gains(std::istream& is);

}  // namespace rodd
