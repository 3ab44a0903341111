#include "rodd/channels.hpp"

#include <cmath>
#include <ostream>

#include "rodd/error.hpp"
#include "rodd/format.hpp"
#include "rodd/rng.hpp"

namespace rodd {

namespace {

constexpr std::uint64_t kNoiseTag = 0x6e6f6973;  // "nois"

}  // namespace

Bits OrFrameObservation::silent() const {
  Bits out(slots.size());
  for (std::size_t m = 0; m < slots.size(); ++m)
    if (slots[m] == OrSlot::zero) out.set(m);
  return out;
}

void TransmitFrame::validate() const {
  if (symbols.size() != mask.length()) throw LengthMismatchError("frame symbols and mask differ in length");
  double energy = 0.0;
  for (std::size_t m = 0; m < symbols.size(); ++m)
    if (mask.on(m)) energy += symbols[m] * symbols[m];
  // Small slack for symbols normalized to exactly M in floating point.
  if (energy > static_cast<double>(symbols.size()) * (1.0 + 1e-12))
    throw ParameterError("frame violates the unit average power constraint");
}

OrFrameObservation or_channel(const DuplexMask& receiver_mask, std::span<const OrPeer> peers) {
  const std::size_t slots = receiver_mask.length();
  Bits energy(slots);
  for (const OrPeer& peer : peers) {
    if (peer.mask->length() != slots || peer.payload->size() != slots)
      throw LengthMismatchError("peer frame length differs from receiver mask");
    Bits on = peer.mask->bits;
    on &= *peer.payload;
    energy |= on;
  }
  OrFrameObservation obs;
  obs.slots.resize(slots);
  for (std::size_t m = 0; m < slots; ++m) {
    if (receiver_mask.on(m))
      obs.slots[m] = OrSlot::erased;
    else
      obs.slots[m] = energy.test(m) ? OrSlot::one : OrSlot::zero;
  }
  return obs;
}

RealFrameObservation gaussian_mac(std::size_t receiver, const LinkGains& gains,
                                  std::span<const TransmitFrame> frames,
                                  const GaussianMacOptions& options) {
  if (!(options.noise_var >= 0.0)) throw ParameterError("noise variance must be >= 0");
  if (frames.size() != gains.size()) throw LengthMismatchError("need one frame per node");
  if (receiver >= frames.size()) throw ParameterError("receiver index out of range");
  const std::size_t slots = frames[receiver].mask.length();
  for (const TransmitFrame& f : frames) {
    if (f.mask.length() != slots) throw LengthMismatchError("frames differ in length");
    f.validate();
  }

  std::vector<double> amplitude(frames.size(), 0.0);
  for (std::size_t j = 0; j < frames.size(); ++j) {
    if (j == receiver) continue;
    const double g = gains.at(receiver, j);
    if (options.neighbor_threshold && g < *options.neighbor_threshold) continue;
    amplitude[j] = std::sqrt(g);
  }

  const double sigma = std::sqrt(options.noise_var);
  const std::uint64_t key = rng::combine(rng::combine(options.seed, kNoiseTag), receiver);
  const DuplexMask& own = frames[receiver].mask;
  RealFrameObservation obs;
  obs.slots.resize(slots);
  for (std::size_t m = 0; m < slots; ++m) {
    if (own.on(m)) continue;
    double y = 0.0;
    for (std::size_t j = 0; j < frames.size(); ++j)
      if (amplitude[j] != 0.0 && frames[j].mask.on(m)) y += amplitude[j] * frames[j].symbols[m];
    if (sigma > 0.0) {
      rng::Stream noise(key, 2 * m);
      y += sigma * noise.normal();
    }
    obs.slots[m] = y;
  }
  return obs;
}

void write_trace(std::ostream& os, const OrFrameObservation& obs) {
  for (std::size_t m = 0; m < obs.size(); ++m) {
    os << m << ' ';
    switch (obs.slots[m]) {
      case OrSlot::erased:
        os << 'E';
        break;
      case OrSlot::one:
        os << '1';
        break;
      case OrSlot::zero:
        os << '0';
        break;
    }
    os << '\n';
  }
}

void write_trace(std::ostream& os, const RealFrameObservation& obs) {
  for (std::size_t m = 0; m < obs.size(); ++m) {
    os << m << ' ';
    if (obs.slots[m])
      os << format_g(*obs.slots[m], 12);
    else
      os << 'E';
    os << '\n';
  }
}

}  // namespace rodd
