#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rodd/analysis.hpp"
#include "rodd/discovery.hpp"
#include "rodd/error.hpp"
#include "rodd/signatures.hpp"
#include "rodd/sparsecode.hpp"
#include "rodd/validate.hpp"

namespace py = pybind11;
using namespace rodd;

namespace {

LinkGains to_gains(const std::vector<std::vector<double>>& rows) {
  LinkGains g(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw LengthMismatchError("gain matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j)
      if (i != j) g.set(i, j, rows[i][j]);
  }
  return g;
}

py::list sweep_rows(const SweepTable& table) {
  py::list out;
  for (const SweepRow& r : table) {
    py::dict d;
    d["K"] = r.nodes;
    d["q"] = r.q;
    d["gamma"] = r.gamma ? py::cast(*r.gamma) : py::none();
    d["rodd_sum_rate"] = r.rodd_sum_rate;
    d["rodd_sum_capacity"] = r.rodd_sum_capacity;
    d["aloha"] = r.aloha;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_rodd, m) {
  m.doc() = "On-off duplex signaling: rate analysis, neighbor discovery and message coding.";

  auto base = py::register_exception<Error>(m, "RoddError", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<LengthMismatchError>(m, "LengthMismatchError", PyExc_ValueError);
  py::register_exception<SizeError>(m, "SizeError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<EmptyNetworkError>(m, "EmptyNetworkError", base.ptr());
  py::register_exception<MetricsUndefinedError>(m, "MetricsUndefinedError", base.ptr());

  py::class_<RateResult>(m, "RateResult")
      .def_readonly("rate", &RateResult::rate)
      .def_readonly("p_star", &RateResult::p_star)
      .def_readonly("v_star", &RateResult::v_star)
      .def_readonly("residual", &RateResult::residual)
      .def("__repr__", [](const RateResult& r) { return "RateResult(rate=" + std::to_string(r.rate) + ")"; });

  m.def("binary_entropy", &binary_entropy, py::arg("p"));
  m.def("awgn_rate", &awgn_rate, py::arg("snr"));
  m.def("or_rate_at_p", &or_rate_at_p, py::arg("K"), py::arg("q"), py::arg("p"));
  m.def("or_symmetric_rate", &or_symmetric_rate, py::arg("K"), py::arg("q"));
  m.def("or_symmetric_capacity", &or_symmetric_capacity, py::arg("K"), py::arg("q"));
  m.def("or_aloha_throughput", &or_aloha_throughput, py::arg("K"), py::arg("q"));
  m.def("gauss_symmetric_rate", &gauss_symmetric_rate, py::arg("K"), py::arg("q"), py::arg("gamma"));
  m.def("gauss_symmetric_capacity", &gauss_symmetric_capacity, py::arg("K"), py::arg("q"), py::arg("gamma"));
  m.def("gauss_aloha_throughput", &gauss_aloha_throughput, py::arg("K"), py::arg("q"), py::arg("gamma"));
  m.def(
      "asymmetric_rate_bounds",
      [](const std::vector<std::vector<double>>& gains, const std::vector<double>& q) {
        return asymmetric_rate_bounds(to_gains(gains), q);
      },
      py::arg("gains"), py::arg("q"),
      "Per-node rate bounds; gains[i][k] is the SNR at receiver i from node k.");
  m.def(
      "sweep_or",
      [](const std::vector<std::size_t>& ks, const std::vector<double>& qs) { return sweep_rows(sweep_or(ks, qs)); },
      py::arg("K"), py::arg("q"));
  m.def(
      "sweep_gauss",
      [](const std::vector<std::size_t>& ks, const std::vector<double>& qs, double gamma) {
        return sweep_rows(sweep_gauss(ks, qs, gamma));
      },
      py::arg("K"), py::arg("q"), py::arg("gamma"));

  m.def(
      "derive_mask",
      [](std::uint64_t nia, double q, std::size_t slots, std::uint32_t tag) {
        return derive_mask(Nia{nia}, q, slots, tag).bits.to_string();
      },
      py::arg("nia"), py::arg("q"), py::arg("M"), py::arg("tag") = domain::discovery,
      "Mask as a '0'/'1' string, slot 0 first.");

  m.def(
      "run_discovery",
      [](double n, double neighbors, std::size_t slots, const std::string& mode, double snr_db,
         std::uint64_t seed, std::size_t max_receivers) {
        DiscoveryExperimentConfig c;
        c.expected_nodes = n;
        c.mean_neighbors = neighbors;
        c.slots = slots;
        c.snr_db = snr_db;
        if (mode == "energy")
          c.mode = ObservationMode::energy;
        else if (mode != "or")
          throw ParameterError("mode must be 'or' or 'energy'");
        c.max_receivers = max_receivers;
        c.seed = seed;
        DiscoveryExperimentResult r;
        {
          py::gil_scoped_release release;
          r = run_discovery_experiment(c);
        }
        py::dict d;
        d["nodes"] = r.nodes;
        d["q"] = r.q;
        d["mean_neighbors"] = r.mean_neighbors_observed;
        d["accuracy"] = r.mean_accuracy;
        d["misses"] = r.total_misses;
        d["false_alarms"] = r.total_false_alarms;
        d["threshold"] = r.threshold;
        return d;
      },
      py::arg("n"), py::arg("neighbors"), py::arg("M"), py::arg("mode") = "or", py::arg("snr_db") = 20.0,
      py::arg("seed"), py::arg("max_receivers") = 0);

  m.def(
      "run_sparsecode",
      [](std::size_t nodes, std::size_t messages, double q, std::size_t slots, std::size_t trials,
         std::uint64_t seed) {
        SparseCodeConfig c{nodes, messages, q, slots, trials, seed};
        SparseCodeSummary s;
        {
          py::gil_scoped_release release;
          s = run_sparsecode_experiment(c).summary;
        }
        py::dict d;
        d["pairs"] = s.pairs;
        d["decoded_correct"] = s.decoded_correct;
        d["ambiguous"] = s.ambiguous;
        d["eliminated_all"] = s.eliminated_all;
        d["true_message_lost"] = s.true_message_lost;
        d["pair_success"] = s.pair_success();
        d["frame_success"] = s.frame_success();
        return d;
      },
      py::arg("K") = 10, py::arg("mu") = 1024, py::arg("q") = 0.09, py::arg("M") = 400,
      py::arg("trials") = 1000, py::arg("seed"));

  m.def(
      "run_validation",
      [](const std::string& suite, std::uint64_t seed) {
        py::list out;
        for (const ValidationRow& r : run_validation_suite(suite, seed)) {
          py::dict d;
          d["quantity"] = r.quantity;
          d["analytic"] = r.analytic;
          d["mc_mean"] = r.mc.mean;
          d["mc_stderr"] = r.mc.std_error;
          d["trials"] = r.mc.trials;
          d["pass"] = r.pass;
          out.append(d);
        }
        return out;
      },
      py::arg("suite") = "quick", py::arg("seed"));
}
