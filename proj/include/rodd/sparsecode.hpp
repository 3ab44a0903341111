#pragma once

// Short message code: node k owns mu signatures and sends message m by
// transmitting signature m, which also serves as its duplex mask for the
// frame. Receivers identify each neighbor's signature by the same
// elimination rule used for neighbor discovery.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rodd/bits.hpp"
#include "rodd/channels.hpp"
#include "rodd/signatures.hpp"

namespace rodd {

/// Messages are numbered 0..mu-1; message m of node k is
/// derive_mask(nia_k, q, M, domain::message_base + m).
class MessageBook {
 public:
  MessageBook(std::span<const Nia> nodes, std::size_t messages, double q, std::size_t slots);

  std::size_t nodes() const noexcept { return nias_.size(); }
  std::size_t messages() const noexcept { return messages_; }
  std::size_t slots() const noexcept { return slots_; }
  double q() const noexcept { return q_; }
  Nia nia(std::size_t node) const { return nias_.at(node); }
  const DuplexMask& mask(std::size_t node, std::size_t message) const {
    return masks_[node * messages_ + message];
  }

 private:
  std::vector<Nia> nias_;
  std::size_t messages_;
  double q_;
  std::size_t slots_;
  std::vector<DuplexMask> masks_;  // node-major
};

/// The mask node `node` transmits to send `message`. Throws on out-of-range.
const DuplexMask& encode(const MessageBook& book, std::size_t node, std::size_t message);

enum class DecodeStatus { decoded, ambiguous, eliminated_all };

const char* to_string(DecodeStatus status);

struct NeighborDecode {
  std::size_t neighbor = 0;
  DecodeStatus status = DecodeStatus::eliminated_all;
  std::vector<std::size_t> survivors;
  std::optional<std::size_t> message;  // set iff decoded
};

struct DecodeOutcome {
  std::vector<NeighborDecode> neighbors;  // same order as the neighbor list
};

/// Decodes every listed neighbor from the slots judged silent.
DecodeOutcome decode_silent(const Bits& silent, const MessageBook& book,
                            std::span<const std::size_t> neighbor_list);
/// Noiseless OR observation; erased slots are never silent.
DecodeOutcome decode(const OrFrameObservation& observation, const MessageBook& book,
                     std::span<const std::size_t> neighbor_list);
/// Energy observation: a listen slot is silent iff y^2 < threshold.
DecodeOutcome decode_energy(const RealFrameObservation& observation, double threshold,
                            const MessageBook& book, std::span<const std::size_t> neighbor_list);

/// OR observation at `receiver` when node i sends messages[i] and every
/// other node is a neighbor.
OrFrameObservation message_frame_observation(const MessageBook& book,
                                             std::span<const std::size_t> messages,
                                             std::size_t receiver);

struct SparseCodeConfig {
  std::size_t nodes = 10;
  std::size_t messages = 1024;
  double q = 0.09;
  std::size_t slots = 400;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
};

struct PairRecord {
  std::size_t trial = 0;
  std::size_t receiver = 0;
  std::size_t neighbor = 0;
  DecodeStatus status = DecodeStatus::eliminated_all;
  std::size_t true_message = 0;
  std::optional<std::size_t> decoded_message;
  bool true_message_survived = false;
};

struct SparseCodeSummary {
  std::size_t pairs = 0;
  std::size_t decoded_correct = 0;
  std::size_t ambiguous = 0;
  std::size_t eliminated_all = 0;
  /// Pairs where the sent message did not survive elimination.
  std::size_t true_message_lost = 0;
  std::size_t frames = 0;
  /// Frames (trial, receiver) in which every neighbor decoded correctly.
  std::size_t frames_ok = 0;

  double pair_success() const {
    return pairs ? static_cast<double>(decoded_correct) / static_cast<double>(pairs) : 0.0;
  }
  double frame_success() const {
    return frames ? static_cast<double>(frames_ok) / static_cast<double>(frames) : 0.0;
  }
};

struct SparseCodeResult {
  std::vector<PairRecord> records;
  SparseCodeSummary summary;
};

/// Full-mesh network of `nodes` nodes with NIAs 1..K; messages per trial are
/// pure functions of (seed, trial, node).
SparseCodeResult run_sparsecode_experiment(const SparseCodeConfig& config);

/// `trial,receiver,neighbor,outcome,true_msg,decoded_msg`.
void write_sparsecode_csv(std::ostream& os, const SparseCodeResult& result);

}  // namespace rodd
