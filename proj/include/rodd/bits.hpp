#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rodd {

/// Fixed-length packed bit vector. Slot m lives in word m/64, bit m%64.
/// Bits past size() in the last word are always zero.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  /// Parses "1010..." (other characters rejected).
  static Bits from_string(std::string_view s);

  std::size_t size() const noexcept { return size_; }
  bool test(std::size_t m) const noexcept { return (words_[m >> 6] >> (m & 63)) & 1U; }
  void set(std::size_t m, bool on = true) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (m & 63);
    if (on)
      words_[m >> 6] |= bit;
    else
      words_[m >> 6] &= ~bit;
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  /// True iff some slot is set in both.
  bool intersects(const Bits& other) const noexcept;
  Bits& operator|=(const Bits& other);
  Bits& operator&=(const Bits& other);
  /// Complement within size().
  Bits operator~() const;

  std::string to_string() const;

  friend bool operator==(const Bits&, const Bits&) = default;

 private:
  void clear_tail() noexcept;

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

inline bool any_common(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) noexcept {
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] & b[i]) return true;
  return false;
}

}  // namespace rodd
