#include "rodd/discovery.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "rodd/error.hpp"
#include "rodd/format.hpp"
#include "rodd/parallel.hpp"
#include "rodd/rng.hpp"

namespace rodd {

namespace {

constexpr std::uint64_t kDiscoveryNoiseTag = 0x646e6f69;  // "dnoi"
constexpr std::uint64_t kContentionTag = 0x636f6e74;      // "cont"

}  // namespace

Bits DiscoveryObservation::silent(double threshold) const {
  Bits out(slots);
  if (mode == ObservationMode::or_noiseless) {
    for (std::size_t i = 0; i < off_slots.size(); ++i)
      if (values[i] == 0.0) out.set(off_slots[i]);
  } else {
    for (std::size_t i = 0; i < off_slots.size(); ++i)
      if (values[i] < threshold) out.set(off_slots[i]);
  }
  return out;
}

DiscoveryObservation observe_discovery(std::size_t receiver, std::span<const double> gain_row,
                                       const NeighborSet& peers, const SignatureBook& book,
                                       const DiscoveryMode& mode, std::uint64_t seed) {
  if (receiver >= book.size()) throw ParameterError("receiver not covered by the signature book");
  if (gain_row.size() != book.size()) throw LengthMismatchError("gain row and book differ in size");
  if (mode.kind == ObservationMode::energy && !(mode.noise_var >= 0.0))
    throw ParameterError("noise variance must be >= 0");
  const std::size_t slots = book.slots();
  for (std::size_t j : peers.members) {
    if (j >= book.size()) throw ParameterError("peer not covered by the signature book");
    if (book[j].length() != slots) throw LengthMismatchError("signature length mismatch");
  }
  const DuplexMask& own = book[receiver];

  DiscoveryObservation obs;
  obs.slots = slots;
  obs.mode = mode.kind;
  obs.off_slots.reserve(slots);
  obs.values.reserve(slots);

  if (mode.kind == ObservationMode::or_noiseless) {
    Bits energy(slots);
    for (std::size_t j : peers.members) energy |= book[j].bits;
    for (std::size_t m = 0; m < slots; ++m) {
      if (own.on(m)) continue;
      obs.off_slots.push_back(static_cast<std::uint32_t>(m));
      obs.values.push_back(energy.test(m) ? 1.0 : 0.0);
    }
    return obs;
  }

  std::vector<double> amplitude(slots, 0.0);
  for (std::size_t j : peers.members) {
    const double a = std::sqrt(gain_row[j]);
    const auto words = book[j].bits.words();
    for (std::size_t w = 0; w < words.size(); ++w)
      for (std::uint64_t bits = words[w]; bits != 0; bits &= bits - 1)
        amplitude[w * 64 + static_cast<std::size_t>(std::countr_zero(bits))] += a;
  }
  const double sigma = std::sqrt(mode.noise_var);
  const std::uint64_t key = rng::combine(rng::combine(seed, kDiscoveryNoiseTag), receiver);
  for (std::size_t m = 0; m < slots; ++m) {
    if (own.on(m)) continue;
    double y = amplitude[m];
    if (sigma > 0.0) {
      rng::Stream noise(key, 2 * m);
      y += sigma * noise.normal();
    }
    obs.off_slots.push_back(static_cast<std::uint32_t>(m));
    obs.values.push_back(y * y);
  }
  return obs;
}

DiscoveryObservation observe_discovery(std::size_t receiver, const LinkGains& gains,
                                       double neighbor_threshold, const SignatureBook& book,
                                       const DiscoveryMode& mode, std::uint64_t seed) {
  if (receiver >= gains.size()) throw ParameterError("receiver index out of range");
  return observe_discovery(receiver, gains.row(receiver),
                           neighbors(gains, receiver, neighbor_threshold), book, mode, seed);
}

DiscoveryResult eliminate_silent(const Bits& silent, std::size_t receiver, const SignatureBook& book,
                                 std::optional<std::span<const std::size_t>> candidates) {
  if (silent.size() != book.slots()) throw LengthMismatchError("observation and book differ in M");
  DiscoveryResult result;
  result.slots_used = silent.size();
  const auto silent_words = silent.words();
  auto check = [&](std::size_t j) {
    if (j == receiver) return;
    if (any_common(book[j].bits.words(), silent_words))
      ++result.eliminated_count;
    else
      result.estimated.members.push_back(j);
  };
  if (candidates) {
    for (std::size_t j : *candidates) {
      if (j >= book.size()) throw ParameterError("candidate not in the signature book");
      check(j);
    }
    std::sort(result.estimated.members.begin(), result.estimated.members.end());
    result.estimated.members.erase(
        std::unique(result.estimated.members.begin(), result.estimated.members.end()),
        result.estimated.members.end());
  } else {
    for (std::size_t j = 0; j < book.size(); ++j) check(j);
  }
  return result;
}

DiscoveryResult eliminate(const DiscoveryObservation& observation, std::size_t receiver,
                          const SignatureBook& book, double threshold,
                          std::optional<std::span<const std::size_t>> candidates) {
  if (!(threshold >= 0.0)) throw ParameterError("energy threshold must be >= 0");
  return eliminate_silent(observation.silent(threshold), receiver, book, candidates);
}

DiscoveryMetrics discovery_metrics(const NeighborSet& truth, const DiscoveryResult& estimate) {
  if (truth.empty()) throw MetricsUndefinedError("discovery metrics need a nonempty true neighbor set");
  DiscoveryMetrics m;
  const auto& est = estimate.estimated.members;
  for (std::size_t j : truth.members)
    if (!std::binary_search(est.begin(), est.end(), j)) ++m.misses;
  for (std::size_t j : est)
    if (!truth.contains(j)) ++m.false_alarms;
  const double n = static_cast<double>(truth.size());
  m.miss_rate = static_cast<double>(m.misses) / n;
  m.false_alarm_rate = static_cast<double>(m.false_alarms) / n;
  m.accuracy = std::max(0.0, 1.0 - m.miss_rate - m.false_alarm_rate);
  return m;
}

RandomAccessResult random_access_baseline(std::span<const NeighborSet> in_neighbors,
                                          std::size_t frame_bits, double tx_prob,
                                          double target_accuracy, std::uint64_t seed,
                                          std::size_t max_frames) {
  if (!(tx_prob >= 0.0 && tx_prob <= 1.0)) throw ParameterError("transmit probability must lie in [0, 1]");
  if (!(target_accuracy > 0.0 && target_accuracy <= 1.0))
    throw ParameterError("target accuracy must lie in (0, 1]");
  if (frame_bits == 0) throw ParameterError("frame length must be >= 1");
  const std::size_t n = in_neighbors.size();

  // listeners[j] = nodes that count j as a neighbor.
  std::vector<std::vector<std::size_t>> listeners(n);
  std::vector<std::size_t> needed(n, 0);
  std::size_t pending = 0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j : in_neighbors[k].members) {
      if (j >= n || j == k) throw ParameterError("neighbor index out of range");
      listeners[j].push_back(k);
    }
    const double want = std::ceil(target_accuracy * static_cast<double>(in_neighbors[k].size()) - 1e-9);
    needed[k] = static_cast<std::size_t>(std::max(0.0, want));
    if (needed[k] > 0) ++pending;
  }
  if (pending == 0) return {};
  if (tx_prob == 0.0)
    throw ConvergenceError("random access cannot converge with transmit probability 0 (" +
                           std::to_string(pending) + " nodes still need neighbors)");

  std::vector<std::size_t> contenders;
  for (std::size_t j = 0; j < n; ++j)
    if (!listeners[j].empty()) contenders.push_back(j);

  std::vector<std::vector<char>> heard(n);
  for (std::size_t k = 0; k < n; ++k) heard[k].assign(in_neighbors[k].size(), 0);
  std::vector<std::size_t> heard_count(n, 0);
  std::vector<std::size_t> incoming(n, 0), last_sender(n, 0);
  std::vector<char> transmitting(n, 0);
  std::vector<std::size_t> touched, senders;
  const std::uint64_t base = rng::combine(seed, kContentionTag);

  for (std::size_t frame = 1; frame <= max_frames; ++frame) {
    const std::uint64_t key = rng::combine(base, frame);
    senders.clear();
    for (std::size_t j : contenders)
      if (rng::to_unit(rng::word(key, j)) < tx_prob) {
        senders.push_back(j);
        transmitting[j] = 1;
      }
    touched.clear();
    for (std::size_t j : senders)
      for (std::size_t k : listeners[j]) {
        if (incoming[k]++ == 0) touched.push_back(k);
        last_sender[k] = j;
      }
    for (std::size_t k : touched) {
      if (incoming[k] == 1 && !transmitting[k]) {
        const auto& members = in_neighbors[k].members;
        const auto pos = static_cast<std::size_t>(
            std::lower_bound(members.begin(), members.end(), last_sender[k]) - members.begin());
        if (!heard[k][pos]) {
          heard[k][pos] = 1;
          if (++heard_count[k] == needed[k]) --pending;
        }
      }
      incoming[k] = 0;
    }
    for (std::size_t j : senders) transmitting[j] = 0;
    if (pending == 0) return {frame, frame * frame_bits};
  }
  throw ConvergenceError("random access did not converge within " + std::to_string(max_frames) +
                         " frames (" + std::to_string(pending) + " nodes below target)");
}

namespace {

void check_config(const DiscoveryExperimentConfig& c) {
  if (!(c.expected_nodes > 0.0) || !(c.mean_neighbors > 0.0))
    throw ParameterError("expected node count and mean neighbor count must be > 0");
  if (c.slots == 0) throw ParameterError("signature length must be >= 1");
  if (!std::isfinite(c.snr_db)) throw ParameterError("SNR must be finite");
  if (c.mode == ObservationMode::energy && c.threshold_fractions.empty())
    throw ParameterError("energy mode needs at least one threshold");
}

}  // namespace

DiscoveryNetwork make_discovery_network(const DiscoveryExperimentConfig& c, bool with_neighborhoods) {
  check_config(c);
  DiscoveryNetwork net;
  const double tau = std::pow(10.0, c.snr_db / 10.0);
  net.neighbor_threshold = tau;
  net.q = c.q > 0.0 ? c.q : 1.0 / (c.mean_neighbors + 1.0);

  // Unit neighbor radius without fading: gain at d = 1 equals the threshold.
  LinkParams params;
  params.alpha = c.alpha;
  params.unit_snr = tau;
  params.fading = c.fading;
  params.neighbor_threshold = tau;
  params.torus = c.torus;
  const double density = c.mean_neighbors / std::numbers::pi;
  const double side = std::sqrt(c.expected_nodes / density);
  net.topology = generate_poisson_network(side, density, rng::combine(c.seed, 1), params);
  net.gain_seed = rng::combine(c.seed, 2);

  if (with_neighborhoods) {
    const GainModel gains(net.topology, net.gain_seed);
    net.neighborhoods.resize(net.topology.size());
    parallel_for(net.topology.size(), [&](std::size_t k) {
      std::vector<double> row(net.topology.size());
      gains.row(k, row);
      net.neighborhoods[k] = neighbors(std::span<const double>(row), k, tau);
    });
  }
  return net;
}

DiscoveryExperimentResult run_discovery_experiment(const DiscoveryExperimentConfig& c) {
  const DiscoveryNetwork net = make_discovery_network(c);
  const Topology& topo = net.topology;
  const double tau = net.neighbor_threshold;
  DiscoveryExperimentResult result;
  result.neighbor_threshold = tau;
  result.q = net.q;
  const GainModel gains(topo, net.gain_seed);
  const std::uint64_t noise_seed = rng::combine(c.seed, 3);
  result.nodes = topo.size();

  std::vector<Nia> nias(topo.size());
  for (std::size_t i = 0; i < nias.size(); ++i) nias[i] = Nia{i + 1};
  const SignatureBook book = reconstruct_book(nias, result.q, c.slots, domain::discovery);

  const std::size_t receivers =
      c.max_receivers == 0 ? topo.size() : std::min(c.max_receivers, topo.size());
  const bool energy = c.mode == ObservationMode::energy;
  const std::size_t points = energy ? c.threshold_fractions.size() : 1;
  const DiscoveryMode mode = energy ? DiscoveryMode::energy(c.noise_var) : DiscoveryMode::noiseless();

  // per_point[p][r]
  std::vector<std::vector<ReceiverReport>> per_point(points, std::vector<ReceiverReport>(receivers));
  parallel_for(receivers, [&](std::size_t k) {
    std::vector<double> row(topo.size());
    gains.row(k, row);
    const NeighborSet truth = neighbors(std::span<const double>(row), k, tau);
    const DiscoveryObservation obs = observe_discovery(k, row, truth, book, mode, noise_seed);
    for (std::size_t p = 0; p < points; ++p) {
      const double threshold = energy ? c.threshold_fractions[p] * tau : 0.0;
      const DiscoveryResult est = eliminate(obs, k, book, threshold);
      ReceiverReport& rep = per_point[p][k];
      rep.receiver = k;
      rep.true_count = truth.size();
      rep.est_count = est.estimated.size();
      for (std::size_t j : truth.members)
        if (!std::binary_search(est.estimated.members.begin(), est.estimated.members.end(), j))
          ++rep.misses;
      rep.false_alarms = rep.est_count + rep.misses - rep.true_count;
      if (!truth.empty()) rep.accuracy = discovery_metrics(truth, est).accuracy;
    }
  });

  std::size_t neighbor_total = 0;
  for (const ReceiverReport& r : per_point[0]) neighbor_total += r.true_count;
  result.mean_neighbors_observed =
      receivers ? static_cast<double>(neighbor_total) / static_cast<double>(receivers) : 0.0;

  std::size_t best = 0;
  for (std::size_t p = 0; p < points; ++p) {
    ThresholdPoint pt;
    pt.threshold = energy ? c.threshold_fractions[p] * tau : 0.0;
    double sum = 0.0;
    std::size_t counted = 0;
    for (const ReceiverReport& r : per_point[p]) {
      pt.misses += r.misses;
      pt.false_alarms += r.false_alarms;
      if (r.accuracy) {
        sum += *r.accuracy;
        ++counted;
      }
    }
    pt.mean_accuracy = counted ? sum / static_cast<double>(counted) : 0.0;
    result.curve.push_back(pt);
    if (pt.mean_accuracy > result.curve[best].mean_accuracy) best = p;
  }
  result.threshold = result.curve[best].threshold;
  result.mean_accuracy = result.curve[best].mean_accuracy;
  result.total_misses = result.curve[best].misses;
  result.total_false_alarms = result.curve[best].false_alarms;
  result.rows = std::move(per_point[best]);
  if (!energy) result.curve.clear();
  return result;
}

void write_discovery_csv(std::ostream& os, const DiscoveryExperimentResult& r) {
  os << "receiver,true_count,est_count,misses,false_alarms,accuracy\n";
  std::size_t true_total = 0, est_total = 0;
  for (const ReceiverReport& row : r.rows) {
    os << row.receiver << ',' << row.true_count << ',' << row.est_count << ',' << row.misses << ','
       << row.false_alarms << ',' << (row.accuracy ? format_g(*row.accuracy) : std::string()) << '\n';
    true_total += row.true_count;
    est_total += row.est_count;
  }
  os << "all," << true_total << ',' << est_total << ',' << r.total_misses << ','
     << r.total_false_alarms << ',' << format_g(r.mean_accuracy) << '\n';
}

}  // namespace rodd
