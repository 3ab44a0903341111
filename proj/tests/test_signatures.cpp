#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rodd/error.hpp"
#include "rodd/signatures.hpp"

using namespace rodd;

TEST_CASE("derivation matches the frozen cross-implementation vectors") {
  // Produced by an independent Python implementation of the PRF.
  CHECK(to_hex(derive_mask(Nia{1}, 0.5, 64, domain::discovery).bits) == "cb6336377a3185a5");
  CHECK(to_hex(derive_mask(Nia{42}, 0.1, 70, domain::discovery).bits) == "0000000000000208c8");
  CHECK(to_hex(derive_mask(Nia{7}, 0.5, 30, domain::message_base + 3).bits) == "f9c63480");
}

TEST_CASE("derive_mask is deterministic and prefix-consistent") {
  const DuplexMask a = derive_mask(Nia{123}, 0.3, 500, 0);
  const DuplexMask b = derive_mask(Nia{123}, 0.3, 500, 0);
  CHECK(a == b);
  // A longer mask extends the shorter one: slot m depends on m alone.
  const DuplexMask longer = derive_mask(Nia{123}, 0.3, 777, 0);
  for (std::size_t m = 0; m < 500; ++m) CHECK(a.on(m) == longer.on(m));
  CHECK(a.owner == Nia{123});
  CHECK(a.q == 0.3);
}

TEST_CASE("domain tags separate signature families") {
  CHECK(derive_mask(Nia{5}, 0.5, 256, domain::discovery) != derive_mask(Nia{5}, 0.5, 256, domain::data));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(derive_mask(Nia{1}, 0.0, 10, 0), ParameterError);
  CHECK_THROWS_AS(derive_mask(Nia{1}, 1.0, 10, 0), ParameterError);
  CHECK_THROWS_AS(derive_mask(Nia{1}, -0.2, 10, 0), ParameterError);
  CHECK_THROWS_AS(derive_mask(Nia{1}, 0.5, 0, 0), ParameterError);
  CHECK(on_threshold(0.5) == (std::uint64_t{1} << 63));
  CHECK(on_threshold(std::nextafter(1.0, 0.0)) == 0xfffffffffffff800ULL);
}

TEST_CASE("on-fraction concentrates around q") {
  const std::size_t slots = 10'000;
  const double q = 0.5;
  const double sigma = std::sqrt(q * (1 - q) / static_cast<double>(slots));
  for (std::uint64_t nia : {1ULL, 2ULL, 99ULL, 123456789ULL}) {
    const double frac = static_cast<double>(derive_mask(Nia{nia}, q, slots, 0).bits.count()) / slots;
    CHECK(std::abs(frac - q) <= 3 * sigma);
  }
  const double q2 = 0.02;
  const double sigma2 = std::sqrt(q2 * (1 - q2) / static_cast<double>(slots));
  const double frac2 = static_cast<double>(derive_mask(Nia{77}, q2, slots, 0).bits.count()) / slots;
  CHECK(std::abs(frac2 - q2) <= 3 * sigma2);
}

TEST_CASE("distinct masks overlap like independent Bernoulli vectors") {
  const std::size_t slots = 10'000;
  const double q = 0.5;
  const double mean = q * q * slots;
  const double sigma = std::sqrt(slots * q * q * (1 - q * q));
  for (std::uint64_t a = 1; a <= 5; ++a) {
    Bits x = derive_mask(Nia{a}, q, slots, 0).bits;
    x &= derive_mask(Nia{a + 1000}, q, slots, 0).bits;
    CHECK(std::abs(static_cast<double>(x.count()) - mean) <= 3 * sigma);
  }
}

TEST_CASE("book reconstruction") {
  SUBCASE("three addresses, each re-derivable") {
    const std::vector<Nia> nias{{10}, {20}, {30}};
    const SignatureBook book = reconstruct_book(nias, 0.2, 100, 0);
    REQUIRE(book.size() == 3);
    for (Nia n : nias) CHECK(book.at(n) == derive_mask(n, 0.2, 100, 0));
    CHECK(book.index_of(Nia{20}) == 1);
  }
  SUBCASE("empty list") {
    CHECK(reconstruct_book({}, 0.2, 100, 0).empty());
  }
  SUBCASE("duplicates are rejected") {
    const std::vector<Nia> nias{{1}, {2}, {1}};
    CHECK_THROWS_AS(reconstruct_book(nias, 0.2, 100, 0), ParameterError);
  }
  SUBCASE("any party derives the same book") {
    std::vector<Nia> nias;
    for (std::uint64_t i = 0; i < 200; ++i) nias.push_back(Nia{i * 7919 + 3});
    CHECK(reconstruct_book(nias, 0.1, 333, 2) == reconstruct_book(nias, 0.1, 333, 2));
  }
}

TEST_CASE("discovery-scale book statistics") {
  std::vector<Nia> nias;
  for (std::uint64_t i = 1; i <= 10'000; ++i) nias.push_back(Nia{i});
  const SignatureBook book = reconstruct_book(nias, 1.0 / 51.0, 2500, domain::discovery);
  REQUIRE(book.size() == 10'000);
  std::size_t on = 0;
  for (const DuplexMask& m : book.masks()) on += m.bits.count();
  const double total = 10'000.0 * 2500.0;
  const double q = 1.0 / 51.0;
  CHECK(std::abs(on / total - q) <= 3 * std::sqrt(q * (1 - q) / total));
}

TEST_CASE("hex export") {
  SUBCASE("MSB-first with right padding") {
    CHECK(to_hex(Bits::from_string("1")) == "8");
    CHECK(to_hex(Bits::from_string("0001")) == "1");
    CHECK(to_hex(Bits::from_string("101000001")) == "a08");
    CHECK(from_hex("a08", 9) == Bits::from_string("101000001"));
    CHECK_THROWS_AS(from_hex("a0f", 9), ParseError);
    CHECK_THROWS_AS(from_hex("a0", 9), ParseError);
  }
  SUBCASE("book round trip") {
    std::vector<Nia> nias;
    for (std::uint64_t i = 1; i <= 50; ++i) nias.push_back(Nia{i * i});
    const SignatureBook book = reconstruct_book(nias, 0.3, 101, 1);
    std::stringstream ss;
    write_book(ss, book);
    CHECK(ss.str().rfind("# rodd-book M=101 q=0.29999999999999999 tag=1\n", 0) == 0);
    CHECK(read_book(ss) == book);
  }
}
