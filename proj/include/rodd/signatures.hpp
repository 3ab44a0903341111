#pragma once

// On-off duplex masks derived from node addresses.
//
// Derivation (bit-exact, platform independent):
//   key       = combine(nia, domain_tag)            (see rng.hpp)
//   word_m    = mix64(key + (m + 1) * 0x9e3779b97f4a7c15)
//   threshold = floor(q * 2^64)
//   bit m     = word_m < threshold
// Slot m's bit is therefore computable without generating slots 0..m-1.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rodd/bits.hpp"
#include "rodd/model.hpp"
#include "rodd/rng.hpp"

namespace rodd {

/// Domain tags keep discovery, data and per-message signatures independent.
namespace domain {
inline constexpr std::uint32_t discovery = 0;
inline constexpr std::uint32_t data = 1;
/// Message m of the short message code uses tag message_base + m.
inline constexpr std::uint32_t message_base = 0x100;
}  // namespace domain

struct DuplexMask {
  Bits bits;  // 1 = on (transmit), 0 = off (listen)
  Nia owner;
  double q = 0.0;

  std::size_t length() const noexcept { return bits.size(); }
  bool on(std::size_t m) const noexcept { return bits.test(m); }
  friend bool operator==(const DuplexMask&, const DuplexMask&) = default;
};

std::uint64_t mask_key(Nia nia, std::uint32_t domain_tag) noexcept;
/// floor(q * 2^64); exact for every double q in (0, 1).
std::uint64_t on_threshold(double q);

/// Throws ParameterError unless 0 < q < 1 and M >= 1.
DuplexMask derive_mask(Nia nia, double q, std::size_t slots, std::uint32_t domain_tag);

/// Masks for a list of addresses, all sharing (q, M, tag).
class SignatureBook {
 public:
  SignatureBook() = default;
  SignatureBook(double q, std::size_t slots, std::uint32_t domain_tag)
      : q_(q), slots_(slots), tag_(domain_tag) {}

  std::size_t size() const noexcept { return masks_.size(); }
  bool empty() const noexcept { return masks_.empty(); }
  const DuplexMask& operator[](std::size_t i) const { return masks_[i]; }
  const DuplexMask& at(Nia nia) const;
  bool contains(Nia nia) const { return index_.contains(nia.value); }
  std::size_t index_of(Nia nia) const;

  double q() const noexcept { return q_; }
  std::size_t slots() const noexcept { return slots_; }
  std::uint32_t domain_tag() const noexcept { return tag_; }
  std::span<const DuplexMask> masks() const noexcept { return masks_; }

  /// Appends a mask; throws on duplicate owner or length mismatch.
  void add(DuplexMask mask);

  friend bool operator==(const SignatureBook& a, const SignatureBook& b) {
    return a.q_ == b.q_ && a.slots_ == b.slots_ && a.tag_ == b.tag_ && a.masks_ == b.masks_;
  }

 private:
  double q_ = 0.0;
  std::size_t slots_ = 0;
  std::uint32_t tag_ = 0;
  std::vector<DuplexMask> masks_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

SignatureBook reconstruct_book(std::span<const Nia> nias, double q, std::size_t slots,
                               std::uint32_t domain_tag);

/// Hex export. One header line
///   # rodd-book M=<slots> q=<q> tag=<tag>
/// then one `<nia> <hex>` line per mask. Hex is MSB-first: slot 0 is the high
/// bit of the first digit; the last digit is zero-padded on the right.
void write_book(std::ostream& os, const SignatureBook& book);
SignatureBook read_book(std::istream& is);

std::string to_hex(const Bits& bits);
Bits from_hex(std::string_view hex, std::size_t slots);

inline bool mask_bit(std::uint64_t key, std::uint64_t threshold, std::size_t m) noexcept {
  return rng::word(key, m) < threshold;
}

}  // namespace rodd
