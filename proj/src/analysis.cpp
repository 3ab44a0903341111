#include "rodd/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "rodd/error.hpp"
#include "rodd/format.hpp"

namespace rodd {

namespace {

void require_nodes(std::size_t nodes, std::size_t min) {
  if (nodes < min) throw ParameterError("node count K must be >= " + std::to_string(min));
}

void require_open_q(double q) {
  if (!(q > 0.0 && q < 1.0)) throw ParameterError("on-probability q must lie in (0, 1)");
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("SNR gamma must be > 0");
}

// log of C(n, k) q^k (1-q)^(n-k) times extra (1-q) factors.
double log_pattern(std::size_t n, std::size_t k, double log_q, double log_1mq) {
  return log_binomial(n, k) + static_cast<double>(k) * log_q +
         static_cast<double>(n - k) * log_1mq;
}

constexpr std::size_t kGridPoints = 1001;
constexpr double kArgTol = 1e-9;

}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("binary entropy needs p in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double awgn_rate(double snr) {
  if (!(snr >= 0.0)) throw ParameterError("g(x) needs x >= 0");
  return 0.5 * std::log2(1.0 + snr);
}

double log_binomial(std::size_t n, std::size_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  if (k == 0 || k == n) return 0.0;
  const double dn = static_cast<double>(n), dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
}

double listener_pattern_weight(std::size_t nodes, double q, std::size_t n) {
  require_nodes(nodes, 2);
  require_open_q(q);
  const double log_q = std::log(q), log_1mq = std::log1p(-q);
  return std::exp(log_pattern(nodes - 1, n, log_q, log_1mq) + log_1mq);
}

double or_rate_at_p(std::size_t nodes, double q, double p) {
  require_nodes(nodes, 2);
  require_open_q(q);
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("silence probability p must lie in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  const double log_q = std::log(q), log_1mq = std::log1p(-q), log_p = std::log(p);
  double sum = 0.0;
  for (std::size_t n = 1; n < nodes; ++n) {
    const double weight = std::exp(log_pattern(nodes - 1, n, log_q, log_1mq) + log_1mq);
    if (weight == 0.0) continue;
    sum += weight * binary_entropy(std::exp(static_cast<double>(n) * log_p));
  }
  return sum / static_cast<double>(nodes - 1);
}

Extremum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                 double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double fx = f(x);
  // Keep the best point actually evaluated.
  if (fc > fx && fc >= fd) return {c, fc};
  if (fd > fx) return {d, fd};
  return {x, fx};
}

RateResult or_symmetric_rate(std::size_t nodes, double q) {
  require_nodes(nodes, 2);
  require_open_q(q);
  const auto objective = [&](double p) { return or_rate_at_p(nodes, q, p); };

  // The objective has been unimodal on every (K, q) tried, but check on a
  // grid and refine locally around the grid maximum if it is not.
  std::vector<double> grid(kGridPoints);
  std::size_t best = 0;
  for (std::size_t i = 0; i < kGridPoints; ++i) {
    grid[i] = objective(static_cast<double>(i) / static_cast<double>(kGridPoints - 1));
    if (grid[i] > grid[best]) best = i;
  }
  const double scale = std::max(grid[best], std::numeric_limits<double>::min());
  bool descending = false, unimodal = true;
  for (std::size_t i = 0; i + 1 < kGridPoints; ++i) {
    const double diff = grid[i + 1] - grid[i];
    if (std::abs(diff) <= 1e-14 * scale) continue;
    if (diff < 0.0)
      descending = true;
    else if (descending)
      unimodal = false;
  }

  const double step = 1.0 / static_cast<double>(kGridPoints - 1);
  Extremum ext;
  if (unimodal) {
    ext = golden_section_maximize(objective, 0.0, 1.0, kArgTol);
  } else {
    const double lo = std::max(0.0, static_cast<double>(best) * step - step);
    const double hi = std::min(1.0, static_cast<double>(best) * step + step);
    ext = golden_section_maximize(objective, lo, hi, kArgTol);
  }
  if (grid[best] > ext.value) ext = {static_cast<double>(best) * step, grid[best]};

  RateResult r;
  r.rate = ext.value;
  r.p_star = ext.x;
  return r;
}

RateResult or_symmetric_capacity(std::size_t nodes, double q) {
  require_nodes(nodes, 2);
  require_open_q(q);
  const double k = static_cast<double>(nodes);
  // (1-q) - (1-q)^K = (1-q) (1 - (1-q)^(K-1)), written to avoid cancellation.
  const double rate = (1.0 - q) * -std::expm1((k - 1.0) * std::log1p(-q)) / (k - 1.0);
  return {rate, std::nullopt, std::nullopt, 0.0};
}

double or_aloha_throughput(std::size_t nodes, double q) {
  require_nodes(nodes, 1);
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("transmit probability must lie in [0, 1]");
  const double k = static_cast<double>(nodes);
  if (nodes == 1) return q;
  return k * q * std::pow(1.0 - q, k - 1.0);
}

double gauss_aloha_throughput(std::size_t nodes, double q, double gamma) {
  require_gamma(gamma);
  require_open_q(q);
  return or_aloha_throughput(nodes, q) * awgn_rate(gamma / q);
}

RateResult gauss_symmetric_rate(std::size_t nodes, double q, double gamma) {
  require_nodes(nodes, 2);
  require_open_q(q);
  require_gamma(gamma);
  const double log_q = std::log(q), log_1mq = std::log1p(-q);
  double sum = 0.0;
  for (std::size_t m = 1; m < nodes; ++m) {
    const double weight = std::exp(log_pattern(nodes - 1, m, log_q, log_1mq) + log_1mq);
    sum += weight * awgn_rate(static_cast<double>(m) * gamma / q);
  }
  return {sum / static_cast<double>(nodes - 1), std::nullopt, std::nullopt, 0.0};
}

namespace {

// Water-filling written in the excess u = v - 1, so that
// w_m = ((K-m) u - (m-1)) / (K-1) keeps full relative precision as u -> 0.
std::vector<double> allocation_at_excess(std::size_t nodes, double u) {
  std::vector<double> w(nodes - 1);
  const double km1 = static_cast<double>(nodes - 1);
  for (std::size_t m = 1; m < nodes; ++m)
    w[m - 1] = std::max((static_cast<double>(nodes - m) * u - static_cast<double>(m - 1)) / km1, 0.0);
  return w;
}

double power_at_excess(std::size_t nodes, double q, double u) {
  const double log_q = std::log(q), log_1mq = std::log1p(-q);
  const double km1 = static_cast<double>(nodes - 1);
  double sum = 0.0;
  for (std::size_t m = 1; m < nodes; ++m) {
    const double w = (static_cast<double>(nodes - m) * u - static_cast<double>(m - 1)) / km1;
    if (w <= 0.0) break;  // w_m is decreasing in m
    sum += std::exp(log_pattern(nodes, m, log_q, log_1mq)) * w;
  }
  return sum / static_cast<double>(nodes);
}

}  // namespace

std::vector<double> power_allocation(std::size_t nodes, double v) {
  require_nodes(nodes, 2);
  return allocation_at_excess(nodes, v - 1.0);
}

double water_level_power(std::size_t nodes, double q, double v) {
  require_nodes(nodes, 2);
  require_open_q(q);
  return power_at_excess(nodes, q, v - 1.0);
}

WaterLevel solve_water_level(std::size_t nodes, double q, double gamma) {
  require_nodes(nodes, 2);
  require_open_q(q);
  require_gamma(gamma);
  const auto power = [&](double u) { return power_at_excess(nodes, q, u); };

  // power(u = 0) = 0: every w_m is clipped at v <= 1.
  double lo = 0.0, hi = 1.0;
  int doublings = 0;
  while (power(hi) < gamma) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 2000 || !std::isfinite(hi)) {
      throw SolverError("water level bracket failed: K=" + std::to_string(nodes) +
                        " q=" + format_g(q) + " gamma=" + format_g(gamma) +
                        " power(v=" + format_g(1.0 + lo) + ")=" + format_g(power(lo)));
    }
  }

  WaterLevel out;
  const double target = 1e-9 * gamma;
  double best_u = hi, best_res = std::abs(power(hi) - gamma);
  for (int it = 0; it < 3000; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double pm = power(mid);
    const double res = std::abs(pm - gamma);
    if (res < best_res) {
      best_res = res;
      best_u = mid;
    }
    out.iterations = it + 1;
    if (res <= 1e-3 * target || mid <= lo || mid >= hi) break;
    if (pm < gamma)
      lo = mid;
    else
      hi = mid;
  }
  out.excess = best_u;
  out.v = 1.0 + best_u;
  out.residual = best_res;
  if (out.residual > target) {
    throw SolverError("water level residual " + format_g(out.residual) + " exceeds tolerance: K=" +
                      std::to_string(nodes) + " q=" + format_g(q) + " gamma=" + format_g(gamma));
  }
  return out;
}

RateResult gauss_symmetric_capacity(std::size_t nodes, double q, double gamma) {
  const WaterLevel level = solve_water_level(nodes, q, gamma);
  const std::vector<double> w = allocation_at_excess(nodes, level.excess);
  const double log_q = std::log(q), log_1mq = std::log1p(-q);
  double sum = 0.0;
  for (std::size_t m = 1; m < nodes; ++m) {
    const double weight = std::exp(log_pattern(nodes - 1, m, log_q, log_1mq) + log_1mq);
    sum += weight * awgn_rate(w[m - 1]);
  }
  RateResult r;
  r.rate = sum / static_cast<double>(nodes - 1);
  r.v_star = level.v;
  r.residual = level.residual;
  return r;
}

double asymmetric_rate_bound(const LinkGains& gains, std::span<const double> q, std::size_t k) {
  const std::size_t n = gains.size();
  if (n > kMaxAsymmetricNodes)
    throw SizeError("subset enumeration supports at most " + std::to_string(kMaxAsymmetricNodes) +
                    " nodes, got " + std::to_string(n));
  require_nodes(n, 2);
  if (q.size() != n) throw LengthMismatchError("need one on-probability per node");
  if (k >= n) throw ParameterError("node index out of range");
  for (double qi : q) require_open_q(qi);

  double bound = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> others;
  others.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == k) continue;
    const double gamma_ik = gains.at(i, k);
    if (gamma_ik == 0.0) {
      bound = 0.0;
      continue;
    }
    others.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && j != k) others.push_back(j);

    // A = {k} plus the Gray-coded subset of `others`. weight carries
    // prod_{j in A} q_j * prod_{l not in A, l != i} (1 - q_l).
    double h = gamma_ik / q[k];
    double weight = q[k];
    for (std::size_t l : others) weight *= 1.0 - q[l];
    std::vector<char> in(others.size(), 0);
    double sum = gamma_ik / (q[k] * h) * awgn_rate(h) * weight;
    const std::uint64_t subsets = std::uint64_t{1} << others.size();
    for (std::uint64_t step = 1; step < subsets; ++step) {
      const auto bit = static_cast<std::size_t>(std::countr_zero(step));
      const std::size_t j = others[bit];
      const double ratio = q[j] / (1.0 - q[j]);
      if (in[bit]) {
        h -= gains.at(i, j) / q[j];
        weight /= ratio;
      } else {
        h += gains.at(i, j) / q[j];
        weight *= ratio;
      }
      in[bit] ^= 1;
      sum += gamma_ik / (q[k] * h) * awgn_rate(h) * weight;
    }
    bound = std::min(bound, (1.0 - q[i]) * sum);
  }
  return bound;
}

std::vector<double> asymmetric_rate_bounds(const LinkGains& gains, std::span<const double> q) {
  std::vector<double> out(gains.size());
  for (std::size_t k = 0; k < gains.size(); ++k) out[k] = asymmetric_rate_bound(gains, q, k);
  return out;
}

namespace {

void check_grid(std::span<const std::size_t> node_counts, std::span<const double> q_grid) {
  if (node_counts.empty() || q_grid.empty()) throw ParameterError("sweep grid is empty");
  for (double q : q_grid) require_open_q(q);
  for (std::size_t k : node_counts) require_nodes(k, 2);
}

}  // namespace

SweepTable sweep_or(std::span<const std::size_t> node_counts, std::span<const double> q_grid) {
  check_grid(node_counts, q_grid);
  SweepTable table;
  table.reserve(node_counts.size() * q_grid.size());
  for (std::size_t k : node_counts) {
    const double kd = static_cast<double>(k);
    for (double q : q_grid) {
      SweepRow row;
      row.nodes = k;
      row.q = q;
      row.rodd_sum_rate = kd * or_symmetric_rate(k, q).rate;
      row.rodd_sum_capacity = kd * or_symmetric_capacity(k, q).rate;
      row.aloha = or_aloha_throughput(k, q);
      table.push_back(row);
    }
  }
  return table;
}

SweepTable sweep_gauss(std::span<const std::size_t> node_counts, std::span<const double> q_grid,
                       double gamma) {
  check_grid(node_counts, q_grid);
  require_gamma(gamma);
  SweepTable table;
  table.reserve(node_counts.size() * q_grid.size());
  for (std::size_t k : node_counts) {
    const double kd = static_cast<double>(k);
    for (double q : q_grid) {
      SweepRow row;
      row.nodes = k;
      row.q = q;
      row.gamma = gamma;
      row.rodd_sum_rate = kd * gauss_symmetric_rate(k, q, gamma).rate;
      row.rodd_sum_capacity = kd * gauss_symmetric_capacity(k, q, gamma).rate;
      row.aloha = gauss_aloha_throughput(k, q, gamma);
      table.push_back(row);
    }
  }
  return table;
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "K,q,gamma,rodd_sum_rate,rodd_sum_capacity,aloha\n";
  for (const SweepRow& r : table) {
    os << r.nodes << ',' << format_g(r.q) << ',' << (r.gamma ? format_g(*r.gamma) : std::string())
       << ',' << format_g(r.rodd_sum_rate) << ',' << format_g(r.rodd_sum_capacity) << ','
       << format_g(r.aloha) << '\n';
  }
}

}  // namespace rodd
