// rodd: experiment driver. Every subcommand writes CSV to --out (stdout by
// default) and a short summary to stderr.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "cli_support.hpp"
#include "rodd/analysis.hpp"
#include "rodd/channels.hpp"
#include "rodd/discovery.hpp"
#include "rodd/error.hpp"
#include "rodd/format.hpp"
#include "rodd/model.hpp"
#include "rodd/rng.hpp"
#include "rodd/signatures.hpp"
#include "rodd/sparsecode.hpp"
#include "rodd/validate.hpp"

namespace {

using namespace rodd;
using rodd::cli::kExitCheckFailed;
using rodd::cli::kExitOk;

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

struct SweepArgs {
  std::string nodes = "3,5,20";
  std::string q = "0.02:0.98:0.02";
  double gamma_db = 20.0;
  std::string out;
  bool check = false;
};

// Appends a dominance column: RODD rate >= ALOHA and capacity >= rate.
int emit_sweep(const SweepTable& table, const SweepArgs& a) {
  std::ostringstream csv;
  write_sweep_csv(csv, table);
  if (!a.check) {
    emit(a.out, csv.str());
    return kExitOk;
  }
  std::istringstream lines(csv.str());
  std::ostringstream checked;
  std::string line;
  std::getline(lines, line);
  checked << line << ",dominance\n";
  std::size_t failures = 0;
  for (const SweepRow& row : table) {
    std::getline(lines, line);
    const double slack = 1e-12 * std::max(1.0, row.rodd_sum_capacity);
    const bool ok = row.rodd_sum_rate + slack >= row.aloha && row.rodd_sum_capacity + slack >= row.rodd_sum_rate;
    failures += !ok;
    checked << line << ',' << (ok ? "PASS" : "FAIL") << '\n';
  }
  emit(a.out, checked.str());
  std::cerr << "dominance: " << table.size() - failures << '/' << table.size() << " rows pass\n";
  return failures ? kExitCheckFailed : kExitOk;
}

void add_sweep_options(CLI::App* cmd, SweepArgs& a) {
  cmd->add_option("--K", a.nodes, "node counts (list or start:stop:step)")->capture_default_str();
  cmd->add_option("--q", a.q, "on-probability grid")->capture_default_str();
  cmd->add_option("--out", a.out, "output CSV (default stdout)");
  cmd->add_flag("--check", a.check, "add a dominance column; exit 3 if any row fails");
}

struct DiscoverArgs {
  double nodes = 0.0;
  double neighbors = 0.0;
  std::size_t slots = 0;
  std::string mode;
  double snr_db = 20.0;
  std::uint64_t seed = 0;
  double q = 0.0;
  double alpha = 4.0;
  std::string fading = "none";
  bool plane = false;
  double noise_var = 1.0;
  std::string thresholds;
  std::size_t max_receivers = 0;
  bool compare_ra = false;
  double target = 0.99;
  std::string curve;
  std::string out;
  bool check = false;
};

int run_discover(const DiscoverArgs& a) {
  DiscoveryExperimentConfig c;
  c.expected_nodes = a.nodes;
  c.mean_neighbors = a.neighbors;
  c.slots = a.slots;
  c.snr_db = a.snr_db;
  cli::db_to_linear(a.snr_db);
  c.q = a.q;
  c.alpha = a.alpha;
  c.fading = fading_from_string(a.fading);
  c.torus = !a.plane;
  c.mode = a.mode == "energy" ? ObservationMode::energy : ObservationMode::or_noiseless;
  c.noise_var = a.noise_var;
  if (!a.thresholds.empty()) c.threshold_fractions = cli::parse_grid(a.thresholds);
  c.max_receivers = a.max_receivers;
  c.seed = a.seed;

  const DiscoveryExperimentResult r = run_discovery_experiment(c);
  std::ostringstream csv;
  write_discovery_csv(csv, r);
  emit(a.out, csv.str());

  std::cerr << "nodes " << r.nodes << ", mean neighbors " << format_g(r.mean_neighbors_observed, 6)
            << ", q " << format_g(r.q, 6) << ", M " << c.slots << ", mode " << a.mode << '\n';
  if (c.mode == ObservationMode::energy) {
    std::ostringstream curve;
    curve << "threshold,mean_accuracy,misses,false_alarms\n";
    for (const ThresholdPoint& p : r.curve) {
      curve << format_g(p.threshold) << ',' << format_g(p.mean_accuracy) << ',' << p.misses << ','
            << p.false_alarms << '\n';
      std::cerr << "  threshold " << format_g(p.threshold, 6) << ": accuracy "
                << format_g(p.mean_accuracy, 6) << '\n';
    }
    if (!a.curve.empty()) emit(a.curve, curve.str());
    std::cerr << "selected threshold " << format_g(r.threshold, 6) << '\n';
  }
  std::cerr << "accuracy " << format_g(r.mean_accuracy, 6) << ", misses " << r.total_misses
            << ", false alarms " << r.total_false_alarms << '\n';

  if (a.compare_ra) {
    const DiscoveryNetwork net = make_discovery_network(c, true);
    const auto frame_bits =
        static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(net.topology.size()))));
    const RandomAccessResult ra = random_access_baseline(net.neighborhoods, frame_bits, net.q,
                                                         r.mean_accuracy, rng::combine(c.seed, 4));
    std::cerr << "random access: " << ra.frames << " frames of " << frame_bits << " slots = "
              << ra.slots_used << " slots (" << format_g(static_cast<double>(ra.slots_used) / c.slots, 4)
              << "x)\n";
  }

  if (!a.check) return kExitOk;
  const bool ok = r.mean_accuracy >= a.target &&
                  (c.mode == ObservationMode::energy || r.total_misses == 0);
  std::cerr << "check: " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

struct SparseArgs {
  SparseCodeConfig config;
  double target = 0.99;
  std::string out;
  bool check = false;
};

int run_sparse(const SparseArgs& a) {
  const SparseCodeResult r = run_sparsecode_experiment(a.config);
  std::ostringstream csv;
  write_sparsecode_csv(csv, r);
  emit(a.out, csv.str());
  const SparseCodeSummary& s = r.summary;
  std::cerr << "pairs " << s.pairs << ": decoded " << s.decoded_correct << ", ambiguous " << s.ambiguous
            << ", eliminated " << s.eliminated_all << ", sent message lost " << s.true_message_lost << '\n'
            << "pair success " << format_g(s.pair_success(), 6) << ", frame success "
            << format_g(s.frame_success(), 6) << " over " << s.frames << " frames\n";
  if (!a.check) return kExitOk;
  const bool ok = s.pair_success() >= a.target && s.true_message_lost == 0;
  std::cerr << "check: " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

struct ValidateArgs {
  std::string suite = "quick";
  std::uint64_t seed = 0;
  std::string out;
  bool check = false;
};

int run_validate(const ValidateArgs& a) {
  const std::vector<ValidationRow> rows = run_validation_suite(a.suite, a.seed);
  std::ostringstream csv;
  write_validation_csv(csv, rows);
  emit(a.out, csv.str());
  std::size_t passed = 0;
  for (const ValidationRow& r : rows) passed += r.pass;
  std::cerr << passed << '/' << rows.size() << " rows within 3 standard errors\n";
  if (!a.check) return kExitOk;
  return passed == rows.size() ? kExitOk : kExitCheckFailed;
}

struct AsymArgs {
  std::string gains;
  std::string q;
  std::string out;
};

int run_asym(const AsymArgs& a) {
  std::ifstream in(a.gains);
  if (!in) throw ParseError("cannot open gains file '" + a.gains + "'");
  const LinkGains gains = read_gains(in);
  std::vector<double> q = cli::parse_grid(a.q);
  if (q.size() == 1) q.assign(gains.size(), q.front());
  const std::vector<double> bounds = asymmetric_rate_bounds(gains, q);
  std::ostringstream csv;
  csv << "node,q,rate_bound\n";
  for (std::size_t k = 0; k < bounds.size(); ++k)
    csv << k << ',' << format_g(q[k]) << ',' << format_g(bounds[k]) << '\n';
  emit(a.out, csv.str());
  return kExitOk;
}

struct TraceArgs {
  std::size_t nodes = 4;
  double q = 0.3;
  std::size_t slots = 50;
  std::uint64_t seed = 0;
  std::string channel = "or";
  double snr_db = 20.0;
  double noise_var = 1.0;
  std::size_t receiver = 0;
  std::string out;
};

// Nodes 1..K send masks derived from their NIAs; the trace is what the
// receiver observes over one frame.
int run_trace(const TraceArgs& a) {
  if (a.nodes < 2) throw ParameterError("trace needs K >= 2");
  if (a.receiver >= a.nodes) throw ParameterError("receiver index out of range");
  std::vector<DuplexMask> masks;
  for (std::size_t j = 0; j < a.nodes; ++j)
    masks.push_back(derive_mask(Nia{rng::combine(a.seed, j)}, a.q, a.slots, domain::data));
  std::ostringstream text;
  if (a.channel == "or") {
    std::vector<Bits> payloads;
    for (std::size_t j = 0; j < a.nodes; ++j)
      payloads.push_back(derive_mask(Nia{rng::combine(a.seed, a.nodes + j)}, 0.5, a.slots, domain::data).bits);
    std::vector<OrPeer> peers;
    for (std::size_t j = 0; j < a.nodes; ++j)
      if (j != a.receiver) peers.push_back({&masks[j], &payloads[j]});
    write_trace(text, or_channel(masks[a.receiver], peers));
  } else if (a.channel == "gauss") {
    const double gamma = cli::db_to_linear(a.snr_db);
    LinkGains gains(a.nodes);
    for (std::size_t i = 0; i < a.nodes; ++i)
      for (std::size_t j = 0; j < a.nodes; ++j)
        if (i != j) gains.set(i, j, gamma);
    std::vector<TransmitFrame> frames;
    for (std::size_t j = 0; j < a.nodes; ++j) {
      // Antipodal symbols at the amplitude that spends exactly M units of energy.
      const double on = static_cast<double>(std::max<std::size_t>(1, masks[j].bits.count()));
      const double amp = std::sqrt(static_cast<double>(a.slots) / on);
      const std::uint64_t key = rng::combine(rng::combine(a.seed, 0x73796d62), j);
      std::vector<double> x(a.slots);
      for (std::size_t m = 0; m < a.slots; ++m) x[m] = (rng::word(key, m) >> 63) ? amp : -amp;
      frames.push_back({masks[j], std::move(x)});
    }
    write_trace(text, gaussian_mac(a.receiver, gains, frames, {a.noise_var, a.seed, std::nullopt}));
  } else {
    throw ParameterError("unknown channel '" + a.channel + "'");
  }
  emit(a.out, text.str());
  return kExitOk;
}

bool is_usage_error(const rodd::Error& e) {
  return dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const rodd::ParseError*>(&e) ||
         dynamic_cast<const SizeError*>(&e) || dynamic_cast<const LengthMismatchError*>(&e);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    args = cli::expand_config(std::move(args));
  } catch (const rodd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  }

  CLI::App app{"On-off duplex signaling: rate analysis, neighbor discovery and message coding"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", "rodd 0.1.0");
  std::function<int()> action;

  SweepArgs fig2;
  auto* fig2_cmd = app.add_subcommand("fig2", "OR-channel sum rate, capacity and ALOHA over a q grid");
  add_sweep_options(fig2_cmd, fig2);
  fig2_cmd->callback([&] {
    action = [&] {
      const auto nodes = cli::parse_count_list(fig2.nodes);
      const auto q = cli::parse_grid(fig2.q);
      return emit_sweep(sweep_or(nodes, q), fig2);
    };
  });

  SweepArgs fig3;
  auto* fig3_cmd = app.add_subcommand("fig3", "Gaussian sum rate, capacity and ALOHA over a q grid");
  add_sweep_options(fig3_cmd, fig3);
  fig3_cmd->add_option("--gamma-db", fig3.gamma_db, "link SNR in dB")->capture_default_str();
  fig3_cmd->callback([&] {
    action = [&] {
      const auto nodes = cli::parse_count_list(fig3.nodes);
      const auto q = cli::parse_grid(fig3.q);
      return emit_sweep(sweep_gauss(nodes, q, cli::db_to_linear(fig3.gamma_db)), fig3);
    };
  });

  DiscoverArgs disc;
  auto* disc_cmd = app.add_subcommand("discover", "Compressed neighbor discovery on a Poisson network");
  disc_cmd->add_option("--n", disc.nodes, "expected node count")->required();
  disc_cmd->add_option("--neighbors", disc.neighbors, "mean neighbors per node")->required();
  disc_cmd->add_option("--M", disc.slots, "signature length in slots")->required();
  disc_cmd->add_option("--mode", disc.mode, "or | energy")->required()->check(CLI::IsMember({"or", "energy"}));
  disc_cmd->add_option("--seed", disc.seed, "random seed")->required();
  disc_cmd->add_option("--snr-db", disc.snr_db, "SNR at the neighbor boundary")->capture_default_str();
  disc_cmd->add_option("--q", disc.q, "signature on-probability (default 1/(neighbors+1))");
  disc_cmd->add_option("--alpha", disc.alpha, "path-loss exponent")->capture_default_str();
  disc_cmd->add_option("--fading", disc.fading, "none | rayleigh")->check(CLI::IsMember({"none", "rayleigh"}));
  disc_cmd->add_flag("--plane", disc.plane, "bounded square instead of a torus");
  disc_cmd->add_option("--noise-var", disc.noise_var, "energy-mode noise variance")->capture_default_str();
  disc_cmd->add_option("--thresholds", disc.thresholds, "energy thresholds as fractions of the SNR threshold");
  disc_cmd->add_option("--max-receivers", disc.max_receivers, "evaluate only the first n receivers");
  disc_cmd->add_flag("--compare-ra", disc.compare_ra, "also run the random-access baseline");
  disc_cmd->add_option("--target", disc.target, "accuracy required by --check")->capture_default_str();
  disc_cmd->add_option("--curve", disc.curve, "energy mode: write the threshold curve here");
  disc_cmd->add_option("--out", disc.out, "output CSV (default stdout)");
  disc_cmd->add_flag("--check", disc.check, "exit 3 below the target accuracy");
  disc_cmd->callback([&] { action = [&] { return run_discover(disc); }; });

  SparseArgs sparse;
  auto* sparse_cmd = app.add_subcommand("sparsecode", "Short-message code over a full-mesh OR network");
  sparse_cmd->add_option("--K", sparse.config.nodes, "nodes")->capture_default_str();
  sparse_cmd->add_option("--mu", sparse.config.messages, "messages per node")->capture_default_str();
  sparse_cmd->add_option("--q", sparse.config.q, "signature on-probability")->capture_default_str();
  sparse_cmd->add_option("--M", sparse.config.slots, "frame length in slots")->capture_default_str();
  sparse_cmd->add_option("--trials", sparse.config.trials, "frames to simulate")->capture_default_str();
  sparse_cmd->add_option("--seed", sparse.config.seed, "random seed")->required();
  sparse_cmd->add_option("--target", sparse.target, "pair success required by --check")->capture_default_str();
  sparse_cmd->add_option("--out", sparse.out, "output CSV (default stdout)");
  sparse_cmd->add_flag("--check", sparse.check, "exit 3 below the target or if a sent message is lost");
  sparse_cmd->callback([&] { action = [&] { return run_sparse(sparse); }; });

  ValidateArgs val;
  auto* val_cmd = app.add_subcommand("validate", "Monte Carlo checks of the closed-form rates");
  val_cmd->add_option("--suite", val.suite, "quick | full")->capture_default_str()->check(CLI::IsMember({"quick", "full"}));
  val_cmd->add_option("--seed", val.seed, "random seed")->required();
  val_cmd->add_option("--out", val.out, "output CSV (default stdout)");
  val_cmd->add_flag("--check", val.check, "exit 3 if any row fails");
  val_cmd->callback([&] { action = [&] { return run_validate(val); }; });

  AsymArgs asym;
  auto* asym_cmd = app.add_subcommand("asym", "Per-node rate bounds for an arbitrary gain matrix");
  asym_cmd->add_option("--gains", asym.gains, "gain matrix file (K, then K rows)")->required();
  asym_cmd->add_option("--q", asym.q, "one on-probability, or one per node")->required();
  asym_cmd->add_option("--out", asym.out, "output CSV (default stdout)");
  asym_cmd->callback([&] { action = [&] { return run_asym(asym); }; });

  TraceArgs trace;
  auto* trace_cmd = app.add_subcommand("trace", "Dump one receiver's per-slot observation");
  trace_cmd->add_option("--K", trace.nodes, "nodes")->capture_default_str();
  trace_cmd->add_option("--q", trace.q, "mask on-probability")->capture_default_str();
  trace_cmd->add_option("--M", trace.slots, "frame length")->capture_default_str();
  trace_cmd->add_option("--seed", trace.seed, "random seed")->required();
  trace_cmd->add_option("--channel", trace.channel, "or | gauss")->capture_default_str()->check(CLI::IsMember({"or", "gauss"}));
  trace_cmd->add_option("--snr-db", trace.snr_db, "gauss: link SNR in dB")->capture_default_str();
  trace_cmd->add_option("--noise-var", trace.noise_var, "gauss: noise variance")->capture_default_str();
  trace_cmd->add_option("--receiver", trace.receiver, "observing node")->capture_default_str();
  trace_cmd->add_option("--out", trace.out, "output file (default stdout)");
  trace_cmd->callback([&] { action = [&] { return run_trace(trace); }; });

  std::vector<const char*> cargv;
  for (const std::string& s : args) cargv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }

  try {
    return action();
  } catch (const rodd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_usage_error(e) ? cli::kExitUsage : cli::kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitFailure;
  }
}
