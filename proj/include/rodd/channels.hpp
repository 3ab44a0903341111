#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rodd/bits.hpp"
#include "rodd/model.hpp"
#include "rodd/signatures.hpp"

namespace rodd {

/// Per-slot output of the OR channel. Erased marks the receiver's own on-slots.
enum class OrSlot : std::uint8_t { zero = 0, one = 1, erased = 2 };

struct OrFrameObservation {
  std::vector<OrSlot> slots;

  std::size_t size() const noexcept { return slots.size(); }
  /// Listen slots that read 0.
  Bits silent() const;
};

struct RealFrameObservation {
  std::vector<std::optional<double>> slots;  // nullopt = erased

  std::size_t size() const noexcept { return slots.size(); }
};

/// A node's frame: its mask plus one symbol per slot. Symbols at off-slots are
/// ignored by the channel.
struct TransmitFrame {
  DuplexMask mask;
  std::vector<double> symbols;

  /// Throws unless lengths agree and sum_m s_m x_m^2 <= M.
  void validate() const;
};

struct OrPeer {
  const DuplexMask* mask;
  const Bits* payload;  // Z_j; only slots where the mask is on matter
};

/// Erased at the receiver's on-slots, otherwise OR over peers of (s_jm AND z_jm).
OrFrameObservation or_channel(const DuplexMask& receiver_mask, std::span<const OrPeer> peers);

struct GaussianMacOptions {
  double noise_var = 1.0;
  std::uint64_t seed = 0;
  /// When set, only transmitters j with gamma[k][j] >= threshold contribute
  /// (the neighborhood-restricted model); otherwise every j != k does.
  std::optional<double> neighbor_threshold;
};

/// frames[j] is node j's frame; frames[receiver].mask decides the erasures.
/// Off-slot value = sum_j sqrt(gamma[k][j]) s_jm x_jm + w, w ~ N(0, noise_var),
/// with the noise a pure function of (seed, receiver, slot).
RealFrameObservation gaussian_mac(std::size_t receiver, const LinkGains& gains,
                                  std::span<const TransmitFrame> frames,
                                  const GaussianMacOptions& options);

/// Trace dump: one `m E` or `m <value>` line per slot, m counted from 0.
void write_trace(std::ostream& os, const OrFrameObservation& obs);
void write_trace(std::ostream& os, const RealFrameObservation& obs);

}  // namespace rodd
