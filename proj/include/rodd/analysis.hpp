#pragma once

// Closed-form throughput and capacity of on-off duplex signaling over the
// OR channel and the Gaussian multiaccess channel, plus slotted-ALOHA
// baselines. All rates are in bits (log base 2) per slot.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rodd/model.hpp"

namespace rodd {

struct RateResult {
  double rate = 0.0;
  /// Silence probability maximizing the OR-channel rate (signature-independent codes).
  std::optional<double> p_star;
  /// Water level of the Gaussian symmetric capacity.
  std::optional<double> v_star;
  double residual = 0.0;
};

/// H2(p) in bits, with 0 log 0 = 0.
double binary_entropy(double p);
/// 0.5 * log2(1 + x): capacity of a real AWGN channel at linear SNR x.
double awgn_rate(double snr);

/// log C(n, k) via lgamma.
double log_binomial(std::size_t n, std::size_t k);

/// Weight of the pattern where the listener is off and exactly n of the other
/// K-1 nodes are on: C(K-1, n) q^n (1-q)^(K-n), evaluated in log space.
double listener_pattern_weight(std::size_t nodes, double q, std::size_t n);

/// The OR-channel rate sum before maximization over p (p = silence
/// probability of a codeword symbol).
double or_rate_at_p(std::size_t nodes, double q, double p);
RateResult or_symmetric_rate(std::size_t nodes, double q);
RateResult or_symmetric_capacity(std::size_t nodes, double q);
/// K q (1-q)^(K-1).
double or_aloha_throughput(std::size_t nodes, double q);

/// K q (1-q)^(K-1) g(gamma / q).
double gauss_aloha_throughput(std::size_t nodes, double q, double gamma);
RateResult gauss_symmetric_rate(std::size_t nodes, double q, double gamma);

struct WaterLevel {
  double v = 0.0;
  /// v - 1, carried separately so tiny SNRs keep their precision.
  double excess = 0.0;
  /// |power(v) - gamma|.
  double residual = 0.0;
  int iterations = 0;
};

/// Average power spent at water level v (left side of the power constraint).
double water_level_power(std::size_t nodes, double q, double v);
/// w_m = max((K-m)/(K-1) v - 1, 0) for m = 1..K-1 (index 0 holds w_1).
std::vector<double> power_allocation(std::size_t nodes, double v);
/// Bisection on the nondecreasing power(v); residual <= 1e-9 gamma.
WaterLevel solve_water_level(std::size_t nodes, double q, double gamma);
RateResult gauss_symmetric_capacity(std::size_t nodes, double q, double gamma);

inline constexpr std::size_t kMaxAsymmetricNodes = 25;

/// Achievable rate bound for node k over the fading channel with per-node
/// on-probabilities q. gains.at(i, k) is the SNR at receiver i from node k.
/// Enumerates 2^(K-2) subsets per listener; throws SizeError for K > 25.
double asymmetric_rate_bound(const LinkGains& gains, std::span<const double> q, std::size_t k);
std::vector<double> asymmetric_rate_bounds(const LinkGains& gains, std::span<const double> q);

struct SweepRow {
  std::size_t nodes = 0;
  double q = 0.0;
  std::optional<double> gamma;  // unset for OR-channel sweeps
  double rodd_sum_rate = 0.0;
  double rodd_sum_capacity = 0.0;
  double aloha = 0.0;
};

using SweepTable = std::vector<SweepRow>;

SweepTable sweep_or(std::span<const std::size_t> node_counts, std::span<const double> q_grid);
SweepTable sweep_gauss(std::span<const std::size_t> node_counts, std::span<const double> q_grid,
                       double gamma);

/// Header `K,q,gamma,rodd_sum_rate,rodd_sum_capacity,aloha`, %.12g numbers.
void write_sweep_csv(std::ostream& os, const SweepTable& table);

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximization of f on [lo, hi] until the bracket is <= tol.
Extremum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                 double tol);

}  // namespace rodd
