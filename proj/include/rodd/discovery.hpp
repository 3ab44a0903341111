#pragma once

// Compressed neighbor discovery: every node sends its on-off signature at
// once and listens through its off-slots. A candidate whose signature is on
// in an off-slot that carried no energy cannot be a neighbor; survivors of
// that elimination are declared neighbors.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rodd/bits.hpp"
#include "rodd/model.hpp"
#include "rodd/signatures.hpp"

namespace rodd {

enum class ObservationMode { or_noiseless, energy };

struct DiscoveryMode {
  ObservationMode kind = ObservationMode::or_noiseless;
  double noise_var = 1.0;  // energy mode only

  static DiscoveryMode noiseless() { return {}; }
  static DiscoveryMode energy(double noise_var) { return {ObservationMode::energy, noise_var}; }
};

/// Measurements at the receiver's off-slots only. values[i] belongs to slot
/// off_slots[i]; it is 0/1 in noiseless mode and an energy in energy mode.
struct DiscoveryObservation {
  std::size_t slots = 0;
  ObservationMode mode = ObservationMode::or_noiseless;
  std::vector<std::uint32_t> off_slots;
  std::vector<double> values;

  /// Off-slots judged empty: value < threshold (energy) or value == 0 (noiseless).
  Bits silent(double threshold) const;
};

struct DiscoveryResult {
  NeighborSet estimated;  // node indices into the book
  std::size_t eliminated_count = 0;
  std::size_t slots_used = 0;
};

/// book[j] is node j's discovery signature. `peers` is the receiver's true
/// neighborhood; only those nodes contribute energy. Energy mode reads
/// |sum_{j in peers, s_jm = 1} sqrt(gain_row[j]) + w|^2, w ~ N(0, noise_var),
/// with noise a pure function of (seed, receiver, slot).
DiscoveryObservation observe_discovery(std::size_t receiver, std::span<const double> gain_row,
                                       const NeighborSet& peers, const SignatureBook& book,
                                       const DiscoveryMode& mode, std::uint64_t seed);
DiscoveryObservation observe_discovery(std::size_t receiver, const LinkGains& gains,
                                       double neighbor_threshold, const SignatureBook& book,
                                       const DiscoveryMode& mode, std::uint64_t seed);

/// Eliminates every candidate (all book entries but the receiver, or the
/// given restriction list) with an on-bit in a silent off-slot.
DiscoveryResult eliminate(const DiscoveryObservation& observation, std::size_t receiver,
                          const SignatureBook& book, double threshold,
                          std::optional<std::span<const std::size_t>> candidates = std::nullopt);
/// Same rule against a precomputed silent-slot set.
DiscoveryResult eliminate_silent(const Bits& silent, std::size_t receiver, const SignatureBook& book,
                                 std::optional<std::span<const std::size_t>> candidates = std::nullopt);

struct DiscoveryMetrics {
  std::size_t misses = 0;
  std::size_t false_alarms = 0;
  double miss_rate = 0.0;
  double false_alarm_rate = 0.0;
  double accuracy = 0.0;  // 1 - miss_rate - false_alarm_rate, floored at 0
};

/// Throws MetricsUndefinedError when the true set is empty.
DiscoveryMetrics discovery_metrics(const NeighborSet& truth, const DiscoveryResult& estimate);

struct RandomAccessResult {
  std::size_t frames = 0;
  std::size_t slots_used = 0;
};

/// Slotted random-access discovery under the collision model. in_neighbors[k]
/// is the neighborhood of node k. Each frame, every node that some other node
/// can hear transmits its address with probability tx_prob; a listening node k
/// hears j iff j is the only member of in_neighbors[k] transmitting. Runs
/// until every node has heard at least target_accuracy of its neighbors and
/// returns frames * frame_bits. Throws ConvergenceError past max_frames.
RandomAccessResult random_access_baseline(std::span<const NeighborSet> in_neighbors,
                                          std::size_t frame_bits, double tx_prob,
                                          double target_accuracy, std::uint64_t seed,
                                          std::size_t max_frames = 1'000'000);

struct DiscoveryExperimentConfig {
  double expected_nodes = 10'000.0;
  double mean_neighbors = 50.0;
  std::size_t slots = 2500;
  /// Link SNR (dB) at the neighbor boundary; the neighbor threshold.
  double snr_db = 20.0;
  /// Signature on-probability; 0 selects 1 / (mean_neighbors + 1).
  double q = 0.0;
  double alpha = 4.0;
  Fading fading = Fading::none;
  bool torus = true;
  ObservationMode mode = ObservationMode::or_noiseless;
  double noise_var = 1.0;
  /// Energy thresholds to try, as fractions of the neighbor threshold SNR.
  std::vector<double> threshold_fractions = {0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7};
  /// Evaluate only the first n receivers (0 = all).
  std::size_t max_receivers = 0;
  std::uint64_t seed = 1;
};

struct ReceiverReport {
  std::size_t receiver = 0;
  std::size_t true_count = 0;
  std::size_t est_count = 0;
  std::size_t misses = 0;
  std::size_t false_alarms = 0;
  std::optional<double> accuracy;  // unset when the receiver has no neighbors
};

struct ThresholdPoint {
  double threshold = 0.0;
  double mean_accuracy = 0.0;
  std::size_t misses = 0;
  std::size_t false_alarms = 0;
};

struct DiscoveryExperimentResult {
  std::size_t nodes = 0;
  double q = 0.0;
  double neighbor_threshold = 0.0;
  double mean_neighbors_observed = 0.0;
  /// Energy threshold used for the per-receiver rows (0 in noiseless mode).
  double threshold = 0.0;
  std::vector<ReceiverReport> rows;
  double mean_accuracy = 0.0;
  std::size_t total_misses = 0;
  std::size_t total_false_alarms = 0;
  std::vector<ThresholdPoint> curve;  // energy mode only
};

/// The network an experiment runs on: topology, threshold, q and every
/// node's true neighborhood.
struct DiscoveryNetwork {
  Topology topology;
  std::uint64_t gain_seed = 0;
  double neighbor_threshold = 0.0;
  double q = 0.0;
  std::vector<NeighborSet> neighborhoods;  // filled only when requested
};

DiscoveryNetwork make_discovery_network(const DiscoveryExperimentConfig& config,
                                        bool with_neighborhoods = false);

DiscoveryExperimentResult run_discovery_experiment(const DiscoveryExperimentConfig& config);

/// `receiver,true_count,est_count,misses,false_alarms,accuracy` rows and a
/// final aggregate row whose receiver field is `all`.
void write_discovery_csv(std::ostream& os, const DiscoveryExperimentResult& result);

}  // namespace rodd
