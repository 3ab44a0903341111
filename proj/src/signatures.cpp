#include "rodd/signatures.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rodd/error.hpp"
#include "rodd/format.hpp"

namespace rodd {

std::uint64_t mask_key(Nia nia, std::uint32_t domain_tag) noexcept {
  return rng::combine(nia.value, domain_tag);
}

std::uint64_t on_threshold(double q) {
  if (!(q > 0.0 && q < 1.0)) throw ParameterError("on-probability q must lie in (0, 1)");
  // q * 2^64 is exact and strictly below 2^64 for every double q < 1.
  return static_cast<std::uint64_t>(std::ldexp(q, 64));
}

DuplexMask derive_mask(Nia nia, double q, std::size_t slots, std::uint32_t domain_tag) {
  const std::uint64_t threshold = on_threshold(q);
  if (slots == 0) throw ParameterError("mask length M must be >= 1");
  const std::uint64_t key = mask_key(nia, domain_tag);
  DuplexMask mask{Bits(slots), nia, q};
  auto words = mask.bits.words();
  for (std::size_t m = 0; m < slots; ++m)
    if (mask_bit(key, threshold, m)) words[m >> 6] |= std::uint64_t{1} << (m & 63);
  return mask;
}

const DuplexMask& SignatureBook::at(Nia nia) const { return masks_[index_of(nia)]; }

std::size_t SignatureBook::index_of(Nia nia) const {
  const auto it = index_.find(nia.value);
  if (it == index_.end()) throw ParameterError("NIA " + std::to_string(nia.value) + " not in book");
  return it->second;
}

void SignatureBook::add(DuplexMask mask) {
  if (mask.length() != slots_) throw LengthMismatchError("mask length differs from book M");
  if (!index_.emplace(mask.owner.value, masks_.size()).second)
    throw ParameterError("duplicate NIA " + std::to_string(mask.owner.value));
  masks_.push_back(std::move(mask));
}

SignatureBook reconstruct_book(std::span<const Nia> nias, double q, std::size_t slots,
                               std::uint32_t domain_tag) {
  on_threshold(q);
  if (slots == 0) throw ParameterError("mask length M must be >= 1");
  SignatureBook book(q, slots, domain_tag);
  for (Nia nia : nias) {
    if (book.contains(nia)) throw ParameterError("duplicate NIA " + std::to_string(nia.value));
    book.add(derive_mask(nia, q, slots, domain_tag));
  }
  return book;
}

std::string to_hex(const Bits& bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out((bits.size() + 3) / 4, '0');
  for (std::size_t m = 0; m < bits.size(); ++m)
    if (bits.test(m)) {
      const int value = out[m / 4] <= '9' ? out[m / 4] - '0' : out[m / 4] - 'a' + 10;
      out[m / 4] = kDigits[value | (8 >> (m % 4))];
    }
  return out;
}

Bits from_hex(std::string_view hex, std::size_t slots) {
  if (hex.size() != (slots + 3) / 4) throw ParseError("hex mask has wrong length");
  Bits bits(slots);
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const char c = hex[i];
    int v = 0;
    if (c >= '0' && c <= '9')
      v = c - '0';
    else if (c >= 'a' && c <= 'f')
      v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F')
      v = c - 'A' + 10;
    else
      throw ParseError("invalid hex digit");
    for (int b = 0; b < 4; ++b) {
      const std::size_t m = i * 4 + static_cast<std::size_t>(b);
      if (v & (8 >> b)) {
        if (m >= slots) throw ParseError("hex mask has nonzero padding");
        bits.set(m);
      }
    }
  }
  return bits;
}

void write_book(std::ostream& os, const SignatureBook& book) {
  os << "# rodd-book M=" << book.slots() << " q=" << format_g(book.q(), 17)
     << " tag=" << book.domain_tag() << '\n';
  for (const DuplexMask& mask : book.masks()) os << mask.owner.value << ' ' << to_hex(mask.bits) << '\n';
}

SignatureBook read_book(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("book: missing header");
  std::istringstream header(line);
  std::string hash, magic, field;
  header >> hash >> magic;
  if (hash != "#" || magic != "rodd-book") throw ParseError("book: bad header");
  std::size_t slots = 0;
  double q = 0.0;
  std::uint32_t tag = 0;
  int seen = 0;
  while (header >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ParseError("book: malformed header field");
    const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
    try {
      if (key == "M") {
        slots = std::stoull(value);
        seen |= 1;
      } else if (key == "q") {
        q = std::stod(value);
        seen |= 2;
      } else if (key == "tag") {
        tag = static_cast<std::uint32_t>(std::stoul(value));
        seen |= 4;
      }
    } catch (const std::logic_error&) {
      throw ParseError("book: bad value for '" + key + "'");
    }
  }
  if (seen != 7) throw ParseError("book: header needs M, q and tag");

  SignatureBook book(q, slots, tag);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::uint64_t nia = 0;
    std::string hex;
    if (!(row >> nia >> hex)) throw ParseError("book: bad mask line");
    book.add(DuplexMask{from_hex(hex, slots), Nia{nia}, q});
  }
  return book;
}

}  // namespace rodd
