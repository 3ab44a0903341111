#pragma once

// Monte Carlo estimates of the per-slot information functionals behind the
// closed-form rates. Masks for K nodes are derived from the seed; slot m's
// contribution depends only on (seed, m), so estimates are identical for any
// worker count.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rodd {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(trials)
  std::size_t trials = 0;
};

inline constexpr std::size_t kMinMcSlots = 1000;

/// Empirical distribution of the per-slot on-count over M slots (K+1 bins).
std::vector<double> mc_weight_distribution(std::size_t nodes, double q, std::size_t slots,
                                           std::uint64_t seed);

/// Per-slot estimate of the OR-channel rate at silence probability p, seen by node 0.
McEstimate mc_or_rate(std::size_t nodes, double q, double p, std::size_t slots, std::uint64_t seed);

/// Per-slot estimate of the Gaussian symmetric rate, seen by node 0.
McEstimate mc_gauss_rate(std::size_t nodes, double q, double gamma, std::size_t slots,
                         std::uint64_t seed);

/// Fraction of node 0's slots that are erased (its own on-slots).
McEstimate mc_erased_fraction(std::size_t nodes, double q, std::size_t slots, std::uint64_t seed);

struct ValidationRow {
  std::string quantity;
  double analytic = 0.0;
  McEstimate mc;
  bool pass = false;
};

/// Runs a named suite ("quick" or "full") and returns MC-vs-analytic rows.
/// A row passes when |mc.mean - analytic| <= 3 * mc.std_error.
std::vector<ValidationRow> run_validation_suite(const std::string& suite, std::uint64_t seed);

/// `quantity,analytic,mc_mean,mc_stderr,trials,pass`.
void write_validation_csv(std::ostream& os, const std::vector<ValidationRow>& rows);

}  // namespace rodd
