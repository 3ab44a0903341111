#include "rodd/validate.hpp"

#include <cmath>
#include <functional>
#include <ostream>

#include "rodd/analysis.hpp"
#include "rodd/error.hpp"
#include "rodd/format.hpp"
#include "rodd/parallel.hpp"
#include "rodd/rng.hpp"
#include "rodd/signatures.hpp"

namespace rodd {

namespace {

constexpr std::size_t kChunk = 8192;

void require(std::size_t nodes, double q, std::size_t slots) {
  if (nodes < 2) throw ParameterError("Monte Carlo needs K >= 2");
  if (!(q > 0.0 && q < 1.0)) throw ParameterError("on-probability q must lie in (0, 1)");
  if (slots < kMinMcSlots) throw ParameterError("Monte Carlo needs M >= 1000 slots");
}

std::vector<std::uint64_t> node_keys(std::size_t nodes, std::uint64_t seed) {
  std::vector<std::uint64_t> keys(nodes);
  for (std::size_t i = 0; i < nodes; ++i)
    keys[i] = mask_key(Nia{rng::combine(seed, i)}, domain::data);
  return keys;
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
};

// Averages f(receiver_on, peers_on) over slots, chunked and merged in order.
McEstimate slot_average(std::size_t nodes, double q, std::size_t slots, std::uint64_t seed,
                        const std::function<double(bool, std::size_t)>& f) {
  const auto keys = node_keys(nodes, seed);
  const std::uint64_t threshold = on_threshold(q);
  const std::size_t chunks = (slots + kChunk - 1) / kChunk;
  std::vector<Moments> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    Moments& mo = parts[c];
    const std::size_t end = std::min(slots, (c + 1) * kChunk);
    for (std::size_t m = c * kChunk; m < end; ++m) {
      std::size_t peers_on = 0;
      for (std::size_t i = 1; i < nodes; ++i) peers_on += mask_bit(keys[i], threshold, m);
      const double x = f(mask_bit(keys[0], threshold, m), peers_on);
      mo.sum += x;
      mo.sum_sq += x * x;
      ++mo.n;
    }
  });
  Moments total;
  for (const Moments& mo : parts) {
    total.sum += mo.sum;
    total.sum_sq += mo.sum_sq;
    total.n += mo.n;
  }
  const double n = static_cast<double>(total.n);
  const double mean = total.sum / n;
  const double var = std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), total.n};
}

}  // namespace

std::vector<double> mc_weight_distribution(std::size_t nodes, double q, std::size_t slots,
                                           std::uint64_t seed) {
  if (nodes < 1) throw ParameterError("need at least one node");
  if (slots < kMinMcSlots) throw ParameterError("Monte Carlo needs M >= 1000 slots");
  const auto keys = node_keys(nodes, seed);
  const std::uint64_t threshold = on_threshold(q);
  std::vector<double> hist(nodes + 1, 0.0);
  for (std::size_t m = 0; m < slots; ++m) {
    std::size_t w = 0;
    for (std::uint64_t key : keys) w += mask_bit(key, threshold, m);
    hist[w] += 1.0;
  }
  for (double& h : hist) h /= static_cast<double>(slots);
  return hist;
}

McEstimate mc_or_rate(std::size_t nodes, double q, double p, std::size_t slots, std::uint64_t seed) {
  require(nodes, q, slots);
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("silence probability p must lie in [0, 1]");
  const double scale = 1.0 / static_cast<double>(nodes - 1);
  std::vector<double> table(nodes);
  for (std::size_t n = 0; n < nodes; ++n)
    table[n] = n == 0 ? 0.0 : scale * binary_entropy(std::pow(p, static_cast<double>(n)));
  return slot_average(nodes, q, slots, seed,
                      [&](bool erased, std::size_t n) { return erased ? 0.0 : table[n]; });
}

McEstimate mc_gauss_rate(std::size_t nodes, double q, double gamma, std::size_t slots,
                         std::uint64_t seed) {
  require(nodes, q, slots);
  if (!(gamma >= 0.0)) throw ParameterError("SNR gamma must be >= 0");
  const double scale = 1.0 / static_cast<double>(nodes - 1);
  std::vector<double> table(nodes);
  for (std::size_t n = 0; n < nodes; ++n)
    table[n] = scale * awgn_rate(static_cast<double>(n) * gamma / q);
  return slot_average(nodes, q, slots, seed,
                      [&](bool erased, std::size_t n) { return erased ? 0.0 : table[n]; });
}

McEstimate mc_erased_fraction(std::size_t nodes, double q, std::size_t slots, std::uint64_t seed) {
  require(nodes, q, slots);
  return slot_average(nodes, q, slots, seed, [](bool erased, std::size_t) { return erased ? 1.0 : 0.0; });
}

std::vector<ValidationRow> run_validation_suite(const std::string& suite, std::uint64_t seed) {
  std::size_t slots = 0;
  if (suite == "quick")
    slots = 20'000;
  else if (suite == "full")
    slots = 100'000;
  else
    throw ParameterError("unknown validation suite '" + suite + "' (expected quick or full)");

  std::vector<ValidationRow> rows;
  auto add = [&](std::string name, double analytic, McEstimate mc) {
    const bool pass = std::abs(mc.mean - analytic) <= 3.0 * mc.std_error;
    rows.push_back({std::move(name), analytic, mc, pass});
  };
  std::uint64_t stream = 0;
  const auto next_seed = [&] { return rng::combine(seed, stream++); };

  for (std::size_t k : {3, 5, 20}) {
    const double q = 0.3;
    const RateResult r = or_symmetric_rate(k, q);
    add("or_rate K=" + std::to_string(k) + " q=0.3 p=p*", r.rate,
        mc_or_rate(k, q, *r.p_star, slots, next_seed()));
  }
  for (std::size_t k : {3, 5, 20}) {
    const double q = 0.2, gamma = 100.0;
    add("gauss_rate K=" + std::to_string(k) + " q=0.2 gamma=100",
        gauss_symmetric_rate(k, q, gamma).rate, mc_gauss_rate(k, q, gamma, slots, next_seed()));
  }
  add("gauss_rate K=2 q=0.5 gamma=1", gauss_symmetric_rate(2, 0.5, 1.0).rate,
      mc_gauss_rate(2, 0.5, 1.0, slots, next_seed()));
  for (std::size_t k : {3, 5, 20}) {
    add("erased_fraction K=" + std::to_string(k) + " q=0.3", 0.3,
        mc_erased_fraction(k, 0.3, slots, next_seed()));
  }
  return rows;
}

void write_validation_csv(std::ostream& os, const std::vector<ValidationRow>& rows) {
  os << "quantity,analytic,mc_mean,mc_stderr,trials,pass\n";
  for (const ValidationRow& r : rows) {
    os << r.quantity << ',' << format_g(r.analytic) << ',' << format_g(r.mc.mean) << ','
       << format_g(r.mc.std_error) << ',' << r.mc.trials << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
  }
}

}  // namespace rodd
