#include "rodd/sparsecode.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "rodd/error.hpp"
#include "rodd/parallel.hpp"
#include "rodd/rng.hpp"

namespace rodd {

namespace {

constexpr std::uint64_t kMessageTag = 0x6d736773;  // "msgs"

// Modulo bias is at most mu / 2^64.
std::size_t draw_message(std::uint64_t key, std::size_t node, std::size_t messages) {
  return static_cast<std::size_t>(rng::word(key, node) % messages);
}

}  // namespace

MessageBook::MessageBook(std::span<const Nia> nodes, std::size_t messages, double q, std::size_t slots)
    : nias_(nodes.begin(), nodes.end()), messages_(messages), q_(q), slots_(slots) {
  if (messages == 0) throw ParameterError("message alphabet size mu must be >= 1");
  if (messages > 0xffffffffULL - domain::message_base) throw ParameterError("message alphabet too large");
  for (std::size_t i = 0; i < nias_.size(); ++i)
    for (std::size_t j = i + 1; j < nias_.size(); ++j)
      if (nias_[i] == nias_[j]) throw ParameterError("duplicate NIA " + std::to_string(nias_[i].value));
  masks_.reserve(nias_.size() * messages_);
  for (Nia nia : nias_)
    for (std::size_t m = 0; m < messages_; ++m)
      masks_.push_back(derive_mask(nia, q, slots, domain::message_base + static_cast<std::uint32_t>(m)));
}

const DuplexMask& encode(const MessageBook& book, std::size_t node, std::size_t message) {
  if (node >= book.nodes()) throw ParameterError("node index out of range");
  if (message >= book.messages())
    throw ParameterError("message " + std::to_string(message) + " outside 0.." +
                         std::to_string(book.messages() - 1));
  return book.mask(node, message);
}

const char* to_string(DecodeStatus status) {
  switch (status) {
    case DecodeStatus::decoded:
      return "decoded";
    case DecodeStatus::ambiguous:
      return "ambiguous";
    case DecodeStatus::eliminated_all:
      return "eliminated_all";
  }
  return "eliminated_all";
}

DecodeOutcome decode_silent(const Bits& silent, const MessageBook& book,
                            std::span<const std::size_t> neighbor_list) {
  if (silent.size() != book.slots()) throw LengthMismatchError("observation and book differ in M");
  DecodeOutcome out;
  out.neighbors.reserve(neighbor_list.size());
  const auto silent_words = silent.words();
  for (std::size_t j : neighbor_list) {
    if (j >= book.nodes()) throw ParameterError("neighbor index out of range");
    NeighborDecode d;
    d.neighbor = j;
    for (std::size_t m = 0; m < book.messages(); ++m)
      if (!any_common(book.mask(j, m).bits.words(), silent_words)) d.survivors.push_back(m);
    if (d.survivors.size() == 1) {
      d.status = DecodeStatus::decoded;
      d.message = d.survivors.front();
    } else {
      d.status = d.survivors.empty() ? DecodeStatus::eliminated_all : DecodeStatus::ambiguous;
    }
    out.neighbors.push_back(std::move(d));
  }
  return out;
}

DecodeOutcome decode(const OrFrameObservation& observation, const MessageBook& book,
                     std::span<const std::size_t> neighbor_list) {
  return decode_silent(observation.silent(), book, neighbor_list);
}

DecodeOutcome decode_energy(const RealFrameObservation& observation, double threshold,
                            const MessageBook& book, std::span<const std::size_t> neighbor_list) {
  if (!(threshold >= 0.0)) throw ParameterError("energy threshold must be >= 0");
  Bits silent(observation.size());
  for (std::size_t m = 0; m < observation.size(); ++m)
    if (const auto& y = observation.slots[m]; y && (*y) * (*y) < threshold) silent.set(m);
  return decode_silent(silent, book, neighbor_list);
}

OrFrameObservation message_frame_observation(const MessageBook& book,
                                             std::span<const std::size_t> messages,
                                             std::size_t receiver) {
  if (messages.size() != book.nodes()) throw LengthMismatchError("need one message per node");
  if (receiver >= book.nodes()) throw ParameterError("receiver index out of range");
  std::vector<OrPeer> peers;
  peers.reserve(book.nodes());
  // Every on-slot carries a pulse, so the payload is the mask itself.
  for (std::size_t j = 0; j < book.nodes(); ++j) {
    if (j == receiver) continue;
    const DuplexMask& m = encode(book, j, messages[j]);
    peers.push_back({&m, &m.bits});
  }
  return or_channel(encode(book, receiver, messages[receiver]), peers);
}

SparseCodeResult run_sparsecode_experiment(const SparseCodeConfig& c) {
  if (c.nodes < 2) throw ParameterError("the message code needs at least 2 nodes");
  if (c.trials == 0) throw ParameterError("trial count must be >= 1");
  std::vector<Nia> nias(c.nodes);
  for (std::size_t i = 0; i < c.nodes; ++i) nias[i] = Nia{i + 1};
  const MessageBook book(nias, c.messages, c.q, c.slots);
  const std::uint64_t base = rng::combine(c.seed, kMessageTag);

  const std::size_t per_trial = c.nodes * (c.nodes - 1);
  SparseCodeResult result;
  result.records.resize(c.trials * per_trial);
  parallel_for(c.trials, [&](std::size_t t) {
    const std::uint64_t key = rng::combine(base, t);
    std::vector<std::size_t> messages(c.nodes);
    for (std::size_t i = 0; i < c.nodes; ++i) messages[i] = draw_message(key, i, c.messages);
    std::vector<std::size_t> others;
    std::size_t out = t * per_trial;
    for (std::size_t r = 0; r < c.nodes; ++r) {
      others.clear();
      for (std::size_t j = 0; j < c.nodes; ++j)
        if (j != r) others.push_back(j);
      const DecodeOutcome outcome = decode(message_frame_observation(book, messages, r), book, others);
      for (const NeighborDecode& d : outcome.neighbors) {
        PairRecord& rec = result.records[out++];
        rec.trial = t;
        rec.receiver = r;
        rec.neighbor = d.neighbor;
        rec.status = d.status;
        rec.true_message = messages[d.neighbor];
        rec.decoded_message = d.message;
        rec.true_message_survived =
            std::binary_search(d.survivors.begin(), d.survivors.end(), rec.true_message);
      }
    }
  });

  SparseCodeSummary& s = result.summary;
  s.pairs = result.records.size();
  s.frames = c.trials * c.nodes;
  std::size_t frame_bad = 0;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const PairRecord& rec = result.records[i];
    const bool ok = rec.status == DecodeStatus::decoded && rec.decoded_message == rec.true_message;
    if (ok) ++s.decoded_correct;
    if (rec.status == DecodeStatus::ambiguous) ++s.ambiguous;
    if (rec.status == DecodeStatus::eliminated_all) ++s.eliminated_all;
    if (!ok) ++frame_bad;
    if (!rec.true_message_survived) ++s.true_message_lost;
    if ((i + 1) % (c.nodes - 1) == 0) {
      if (frame_bad == 0) ++s.frames_ok;
      frame_bad = 0;
    }
  }
  return result;
}

void write_sparsecode_csv(std::ostream& os, const SparseCodeResult& result) {
  os << "trial,receiver,neighbor,outcome,true_msg,decoded_msg\n";
  for (const PairRecord& r : result.records) {
    os << r.trial << ',' << r.receiver << ',' << r.neighbor << ',' << to_string(r.status) << ','
       << r.true_message << ',';
    if (r.decoded_message) os << *r.decoded_message;
    os << '\n';
  }
}

}  // namespace rodd
