#include "rodd/bits.hpp"

#include "rodd/error.hpp"

namespace rodd {

Bits Bits::from_string(std::string_view s) {
  Bits b(s.size());
  for (std::size_t m = 0; m < s.size(); ++m) {
    if (s[m] == '1')
      b.set(m);
    else if (s[m] != '0')
      throw ParseError("bit string may only contain '0' and '1'");
  }
  return b;
}

bool Bits::intersects(const Bits& other) const noexcept {
  return any_common(words_, other.words_);
}

Bits& Bits::operator|=(const Bits& other) {
  if (other.size_ != size_) throw LengthMismatchError("bit vectors differ in length");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

Bits& Bits::operator&=(const Bits& other) {
  if (other.size_ != size_) throw LengthMismatchError("bit vectors differ in length");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

Bits Bits::operator~() const {
  Bits out(size_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
  out.clear_tail();
  return out;
}

std::string Bits::to_string() const {
  std::string s(size_, '0');
  for (std::size_t m = 0; m < size_; ++m)
    if (test(m)) s[m] = '1';
  return s;
}

void Bits::clear_tail() noexcept {
  if (const std::size_t r = size_ & 63; r != 0) words_.back() &= (std::uint64_t{1} << r) - 1;
}

}  // namespace rodd
