#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rodd/channels.hpp"
#include "rodd/error.hpp"

using namespace rodd;

namespace {

DuplexMask mask_of(const char* bits) { return DuplexMask{Bits::from_string(bits), Nia{0}, 0.5}; }

std::string render(const OrFrameObservation& obs) {
  std::string s;
  for (OrSlot v : obs.slots) s += v == OrSlot::erased ? 'E' : v == OrSlot::one ? '1' : '0';
  return s;
}

}  // namespace

TEST_CASE("or channel: direct evaluation") {
  const DuplexMask rx = mask_of("1010");
  const DuplexMask peer = mask_of("0110");
  const Bits payload = Bits::from_string("0110");
  const OrPeer peers[] = {{&peer, &payload}};
  CHECK(render(or_channel(rx, peers)) == "E1E0");
}

TEST_CASE("or channel: no peers reads zero off-slots") {
  CHECK(render(or_channel(mask_of("0110"), {})) == "0EE0");
}

TEST_CASE("or channel: payload is masked by the transmitter's own mask") {
  const DuplexMask rx = mask_of("0000");
  const DuplexMask peer = mask_of("1100");
  const Bits payload = Bits::from_string("0111");
  const OrPeer peers[] = {{&peer, &payload}};
  CHECK(render(or_channel(rx, peers)) == "0100");
}

TEST_CASE("or channel: four nodes over fifty slots") {
  // Node 1 hears the OR of nodes 2..4, blanked at its own on-slots.
  std::vector<DuplexMask> masks;
  std::vector<Bits> payloads;
  for (std::uint64_t n = 1; n <= 4; ++n) {
    masks.push_back(derive_mask(Nia{n}, 0.3, 50, domain::data));
    payloads.push_back(derive_mask(Nia{n + 100}, 0.5, 50, domain::data).bits);
  }
  std::vector<OrPeer> peers;
  for (std::size_t j = 1; j < 4; ++j) peers.push_back({&masks[j], &payloads[j]});
  const OrFrameObservation obs = or_channel(masks[0], peers);
  for (std::size_t m = 0; m < 50; ++m) {
    if (masks[0].on(m)) {
      CHECK(obs.slots[m] == OrSlot::erased);
      continue;
    }
    bool any = false;
    for (std::size_t j = 1; j < 4; ++j) any = any || (masks[j].on(m) && payloads[j].test(m));
    CHECK(obs.slots[m] == (any ? OrSlot::one : OrSlot::zero));
  }
}

TEST_CASE("or channel: erasures equal the receiver's on-slots and output is monotone") {
  const DuplexMask rx = derive_mask(Nia{1}, 0.4, 300, 0);
  std::vector<DuplexMask> masks;
  for (std::uint64_t n = 2; n < 8; ++n) masks.push_back(derive_mask(Nia{n}, 0.2, 300, 0));
  std::vector<OrPeer> peers;
  OrFrameObservation previous = or_channel(rx, peers);
  for (const DuplexMask& m : masks) {
    peers.push_back({&m, &m.bits});
    const OrFrameObservation next = or_channel(rx, peers);
    for (std::size_t s = 0; s < 300; ++s) {
      CHECK((next.slots[s] == OrSlot::erased) == rx.on(s));
      if (previous.slots[s] == OrSlot::one) CHECK(next.slots[s] == OrSlot::one);
    }
    previous = next;
  }
}

TEST_CASE("or channel: length mismatch") {
  const DuplexMask rx = mask_of("000");
  const DuplexMask peer = mask_of("0000");
  const OrPeer peers[] = {{&peer, &peer.bits}};
  CHECK_THROWS_AS(or_channel(rx, peers), LengthMismatchError);
}

namespace {

std::vector<TransmitFrame> frames_for(std::initializer_list<const char*> masks,
                                      std::vector<std::vector<double>> symbols) {
  std::vector<TransmitFrame> frames;
  std::size_t i = 0;
  for (const char* m : masks) frames.push_back({mask_of(m), symbols[i++]});
  return frames;
}

LinkGains all_ones(std::size_t n) {
  LinkGains g(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) g.set(k, j, 1.0);
  return g;
}

}  // namespace

TEST_CASE("gaussian mac: single peer without noise") {
  const auto frames = frames_for({"1001", "0111"}, {{1, 0, 0, 1}, {0, 0.5, -1.0, 1.0}});
  const RealFrameObservation obs = gaussian_mac(0, all_ones(2), frames, {0.0, 1, std::nullopt});
  CHECK_FALSE(obs.slots[0]);
  CHECK(*obs.slots[1] == 0.5);
  CHECK(*obs.slots[2] == -1.0);
  CHECK_FALSE(obs.slots[3]);
}

TEST_CASE("gaussian mac: superposition with gains") {
  LinkGains g(3);
  g.set(0, 1, 4.0);
  g.set(0, 2, 9.0);
  const auto frames = frames_for({"00", "11", "01"}, {{0, 0}, {1, 1}, {0, 1}});
  const RealFrameObservation obs = gaussian_mac(0, g, frames, {0.0, 1, std::nullopt});
  CHECK(*obs.slots[0] == doctest::Approx(2.0));
  CHECK(*obs.slots[1] == doctest::Approx(2.0 + 3.0));
  SUBCASE("neighborhood restriction drops weak links") {
    const RealFrameObservation r = gaussian_mac(0, g, frames, {0.0, 1, 5.0});
    CHECK(*r.slots[1] == doctest::Approx(3.0));
  }
}

TEST_CASE("gaussian mac: linear in the symbols at a fixed noise realization") {
  const std::size_t slots = 64;
  LinkGains g(3);
  g.set(0, 1, 2.0);
  g.set(0, 2, 0.7);
  std::vector<TransmitFrame> a, b, sum;
  for (std::uint64_t n = 0; n < 3; ++n) {
    const DuplexMask m = derive_mask(Nia{n}, 0.4, slots, 0);
    std::vector<double> xa(slots), xb(slots), xs(slots);
    for (std::size_t s = 0; s < slots; ++s) {
      xa[s] = std::sin(static_cast<double>(s + n)) * 0.5;
      xb[s] = std::cos(static_cast<double>(3 * s + n)) * 0.5;
      xs[s] = xa[s] + xb[s];
    }
    a.push_back({m, xa});
    b.push_back({m, xb});
    sum.push_back({m, xs});
  }
  const GaussianMacOptions noisy{0.3, 77, std::nullopt};
  const GaussianMacOptions silent{0.0, 77, std::nullopt};
  const RealFrameObservation ya = gaussian_mac(0, g, a, noisy);
  const RealFrameObservation yb = gaussian_mac(0, g, b, silent);
  const RealFrameObservation ys = gaussian_mac(0, g, sum, noisy);
  for (std::size_t s = 0; s < slots; ++s) {
    REQUIRE(ya.slots[s].has_value() == ys.slots[s].has_value());
    if (ys.slots[s]) CHECK(*ys.slots[s] == doctest::Approx(*ya.slots[s] + *yb.slots[s]).epsilon(1e-12));
  }
}

TEST_CASE("gaussian mac: noise-only variance") {
  const std::size_t slots = 100'000;
  std::vector<TransmitFrame> frames;
  frames.push_back({DuplexMask{Bits(slots), Nia{0}, 0.5}, std::vector<double>(slots, 0.0)});
  frames.push_back({DuplexMask{Bits(slots), Nia{1}, 0.5}, std::vector<double>(slots, 0.0)});
  const double noise_var = 2.5;
  const RealFrameObservation obs = gaussian_mac(0, all_ones(2), frames, {noise_var, 5, std::nullopt});
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& y : obs.slots) {
    sum += *y;
    sum_sq += *y * *y;
  }
  const double n = static_cast<double>(slots);
  const double var = (sum_sq - sum * sum / n) / (n - 1);
  // sd of the sample variance of a Gaussian: sigma^2 sqrt(2/(n-1))
  CHECK(std::abs(var - noise_var) <= 3 * noise_var * std::sqrt(2.0 / (n - 1)));
  // Deterministic in the seed.
  const RealFrameObservation again = gaussian_mac(0, all_ones(2), frames, {noise_var, 5, std::nullopt});
  CHECK(*again.slots[123] == *obs.slots[123]);
}

TEST_CASE("gaussian mac: validation") {
  const auto frames = frames_for({"1", "0"}, {{2.0}, {0.0}});
  CHECK_THROWS_AS(gaussian_mac(1, all_ones(2), frames, {}), ParameterError);  // 4 > M
  const auto ok = frames_for({"1", "0"}, {{1.0}, {0.0}});
  CHECK_THROWS_AS(gaussian_mac(1, all_ones(2), ok, {-1.0, 0, std::nullopt}), ParameterError);
  const auto ragged = frames_for({"10", "0"}, {{1.0, 0.0}, {0.0}});
  CHECK_THROWS_AS(gaussian_mac(1, all_ones(2), ragged, {}), LengthMismatchError);
}

TEST_CASE("trace dump format") {
  const DuplexMask rx = mask_of("1010");
  const DuplexMask peer = mask_of("0110");
  const OrPeer peers[] = {{&peer, &peer.bits}};
  std::ostringstream os;
  write_trace(os, or_channel(rx, peers));
  CHECK(os.str() == "0 E\n1 1\n2 E\n3 0\n");

  RealFrameObservation real;
  real.slots = {std::nullopt, 0.25, -1.5};
  std::ostringstream rs;
  write_trace(rs, real);
  CHECK(rs.str() == "0 E\n1 0.25\n2 -1.5\n");
}
