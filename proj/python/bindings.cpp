#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cogradar/checkpoint.hpp"
#include "cogradar/config.hpp"
#include "cogradar/dual.hpp"
#include "cogradar/env.hpp"
#include "cogradar/motion.hpp"
#include "cogradar/runner.hpp"
#include "cogradar/sensing.hpp"
#include "cogradar/tracking.hpp"

namespace py = pybind11;
using namespace cogradar;

namespace {

py::array_t<double> to_numpy(const Mat& m) {
  py::array_t<double> a({m.rows(), m.cols()});
  auto buf = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) buf(i, j) = m(i, j);
  return a;
}

Mat from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
  const auto r = static_cast<std::size_t>(a.shape(0));
  const auto c = static_cast<std::size_t>(a.shape(1));
  return Mat(r, c, std::vector<double>(a.data(), a.data() + r * c));
}

py::dict report_dict(const SlotReport& r) {
  py::dict d;
  d["slot"] = r.slot_index;
  d["n_targets"] = r.n_targets;
  d["n_tracked"] = r.n_tracked;
  d["n_miss"] = r.n_miss;
  d["usage"] = r.usage;
  d["lambda"] = r.lambda;
  d["utility"] = r.utility;
  d["reward"] = r.reward;
  d["costs"] = r.costs;
  d["dwells"] = r.dwells;
  d["dists"] = r.dists;
  d["confirm_latencies"] = r.confirm_latencies;
  return d;
}

py::dict summary_dict(const EpisodeSummary& s) {
  py::dict d;
  d["episode"] = s.episode;
  d["seed"] = s.seed;
  d["slots"] = s.slots;
  d["mean_utility"] = s.mean_utility;
  d["mean_reward"] = s.mean_reward;
  d["mean_usage"] = s.mean_usage;
  d["violation_fraction"] = s.violation_fraction;
  d["mean_confirm_latency"] = s.mean_confirm_latency;
  d["mean_tracking_cost"] = s.mean_tracking_cost;
  d["mean_n_miss"] = s.mean_n_miss;
  d["confirmations"] = s.confirmations;
  return d;
}

RunConfig make_config(const std::optional<std::string>& path, const std::map<std::string, std::string>& overrides) {
  RunConfig cfg = path ? load_config(*path) : RunConfig{};
  for (const auto& [k, v] : overrides) apply_setting(cfg, k, v);
  validate(cfg);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radar tracking/scanning simulator and constrained actor-critic time allocation";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CheckpointError>(m, "CheckpointError", PyExc_RuntimeError);

  m.def("transition_matrix", [](double T) { return to_numpy(transition_matrix(T)); }, py::arg("T"));
  m.def("process_noise_cov", [](double T, double s2) { return to_numpy(process_noise_cov(T, s2)); },
        py::arg("T"), py::arg("sigma_w2") = 16.0);
  m.def("measure", [](double x, double y) {
    const Polar p = measure_fn(x, y);
    return py::make_tuple(p.range, p.azimuth);
  });
  m.def("jacobian", [](double x, double y) { return to_numpy(jacobian(x, y)); });
  m.def("wrap_angle", &wrap_angle);
  m.def("snr_track", [](double tau, double r, double snr0) {
    SnrModel sm;
    sm.snr0 = snr0;
    return snr_track(sm, tau, r);
  }, py::arg("tau"), py::arg("r"), py::arg("snr0") = 100.0);
  m.def("meas_noise_cov", [](double snr) { return to_numpy(meas_noise_cov(SnrModel{}, snr)); }, py::arg("snr"));
  m.def("detection_probability", [](double snr, double pfa, int sw) {
    return detection_probability(snr, pfa, static_cast<SwerlingCase>(sw));
  }, py::arg("snr"), py::arg("pfa"), py::arg("swerling") = 0);
  m.def("tracking_cost", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& p) {
    return tracking_cost(from_numpy(p));
  });
  m.def("ekf_update", [](const std::vector<double>& x, const py::array_t<double, py::array::c_style | py::array::forcecast>& P,
                         const std::vector<double>& z, const std::vector<double>& h,
                         const py::array_t<double, py::array::c_style | py::array::forcecast>& H,
                         const py::array_t<double, py::array::c_style | py::array::forcecast>& R) {
    const UpdateResult u = ekf_update(Prediction{x, from_numpy(P)}, z, Linearization{from_numpy(H), h}, from_numpy(R));
    return py::make_tuple(u.estimate, to_numpy(u.covariance), u.updated);
  }, py::arg("x"), py::arg("P"), py::arg("z"), py::arg("h"), py::arg("H"), py::arg("R"),
     "Linear-Gaussian measurement update with predicted measurement h and Jacobian H.");

  m.def("utility", [](const std::vector<double>& costs, std::size_t n_miss, double beta) {
    return utility(costs, n_miss, beta);
  }, py::arg("costs"), py::arg("n_miss"), py::arg("beta") = 2e4);
  m.def("reward", &reward, py::arg("utility"), py::arg("usage"), py::arg("lam"), py::arg("theta_max") = 0.9);
  m.def("dual_update", [](double lam, double usage, double alpha, double theta_max) {
    DualVariable dv;
    dv.lambda = lam;
    dv.alpha = alpha;
    dv.theta_max = theta_max;
    return dual_update(dv, usage).lambda;
  }, py::arg("lam"), py::arg("usage"), py::arg("alpha") = 5000.0, py::arg("theta_max") = 0.9);
  m.def("fixed_policy", [](double fraction, const std::vector<bool>& active, double t0) {
    const std::unique_ptr<bool[]> a(new bool[active.size()]);
    for (std::size_t i = 0; i < active.size(); ++i) a[i] = active[i];
    return fixed_policy(fraction, std::span<const bool>(a.get(), active.size()), t0);
  }, py::arg("fraction"), py::arg("active"), py::arg("t0") = 2.5);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init([](std::optional<std::string> path, std::map<std::string, std::string> overrides) {
             return make_config(path, overrides);
           }),
           py::arg("path") = py::none(), py::arg("overrides") = std::map<std::string, std::string>{})
      .def("set", [](RunConfig& c, const std::string& key, const std::string& value) {
        apply_setting(c, key, value);
        validate(c);
      })
      .def("to_ini", &config_to_string)
      .def_readwrite("seed", &RunConfig::seed)
      .def_static("keys", &config_keys);

  py::class_<Environment>(m, "Environment")
      .def(py::init([](const RunConfig& c) { return Environment(c.env_config()); }),
           py::arg("config") = RunConfig{})
      .def("reset", [](Environment& e, std::uint64_t seed) { return e.reset(seed).to_vector(); })
      .def("step", [](Environment& e, const std::vector<double>& action, double lam) {
        StepResult r = e.step(action, lam);
        return py::make_tuple(r.observation.to_vector(), report_dict(r.report));
      }, py::arg("action"), py::arg("lam"))
      .def("add_target", &Environment::add_target)
      .def("active_mask", &Environment::active_mask)
      .def_property_readonly("slot", &Environment::slot_index)
      .def_property_readonly("action_dim", &Environment::action_dim)
      .def_property_readonly("observation_dim", &Environment::observation_dim);

  py::class_<TrainingSession>(m, "TrainingSession")
      .def(py::init([](const RunConfig& c) {
        return TrainingSession(c.env_config(), c.ddpg_config(), c.normalizer(), c.train_config(), c.seed);
      }))
      .def("run", [](TrainingSession& s, std::int64_t n) {
        py::list rows;
        train(s, n, [&rows](const TraceRow& r) { rows.append(report_dict(r.report)); });
        return rows;
      }, py::arg("n"), "Runs up to n training slots and returns their slot reports.")
      .def("act", [](const TrainingSession& s, const std::vector<double>& obs) { return s.agent().act(obs); })
      .def("save", [](const TrainingSession& s, const std::string& path, const RunConfig& c) {
        save_checkpoint(path, s, config_to_string(c));
      })
      .def_static("load", [](const std::string& path) { return load_checkpoint(path).session; })
      .def_property_readonly("slot", &TrainingSession::slot)
      .def_property_readonly("done", &TrainingSession::done)
      .def_property_readonly("lam", [](const TrainingSession& s) { return s.dual().lambda; });

  m.def("run_baseline", [](const RunConfig& c, double fraction, std::int64_t slots, std::uint64_t seed) {
    const EnvConfig env = c.env_config();
    return summary_dict(run_episode(env, fixed_fraction_policy(fraction, env.revisit_interval()),
                                    c.train_config().dual, slots, seed, 0, nullptr));
  }, py::arg("config"), py::arg("fraction"), py::arg("slots"), py::arg("seed"));
  m.def("episode_seed", &episode_seed);
}
