#include <optional>
#include <sstream>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "genrob/bounds.hpp"
#include "genrob/commands.hpp"
#include "genrob/config.hpp"
#include "genrob/dynamics.hpp"
#include "genrob/errors.hpp"
#include "genrob/simulator.hpp"

namespace py = pybind11;
using namespace genrob;

namespace {

Theta theta_at(const Config& cfg, double t) { return evaluate_bodies(cfg.bodies, t).theta; }

py::dict simulate(const std::string& path) {
  const Config cfg = load_config(path);
  const Trajectory tr = run(make_scenario(cfg));
  const auto n = static_cast<Eigen::Index>(tr.samples.size());
  const Eigen::Index dof = cfg.chain.dof();
  VecX t(n), energy(n);
  MatX q(n, dof), qd(n, dof);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Sample& s = tr.samples[static_cast<std::size_t>(k)];
    t(k) = s.t;
    q.row(k) = s.q.transpose();
    qd.row(k) = s.qd.transpose();
    energy(k) = s.energy.total();
  }
  py::dict out;
  out["t"] = t;
  out["q"] = q;
  out["qd"] = qd;
  out["energy"] = energy;
  out["max_energy_drift"] = tr.max_energy_drift;
  return out;
}

py::dict certify_file(const std::string& path) {
  const Config cfg = load_config(path);
  if (!cfg.certify) throw ConfigError("/certify", "section required");
  std::vector<ParamTrajectory> trs;
  for (const auto& b : cfg.bodies) trs.push_back(sample_trajectory(b, cfg.certify->times));
  BoundOptions opt;
  opt.scan.restarts = cfg.certify->restarts;
  opt.scan.seed = cfg.seed;
  opt.epsilon = cfg.certify->epsilon;
  const BoundCertificate c = certify(cfg.chain, trs, cfg.certify->grid, opt);
  py::dict out;
  out["alpha1"] = c.alpha1;
  out["alpha2"] = c.alpha2;
  out["normal"] = c.normal;
  out["uniformly_consistent"] = c.uniformly_consistent;
  out["params_upper_bounded"] = c.params_upper_bounded;
  out["sampled_min_lambda"] = c.sampled_min_lambda;
  out["sampled_max_lambda"] = c.sampled_max_lambda;
  out["verified_points"] = c.verified_points;
  out["notes"] = c.notes;
  return out;
}

int run_cli(const std::string& command, const std::string& config, const std::string& out_dir,
            std::optional<std::uint64_t> seed) {
  std::ostringstream out, err;
  const int rc = run_command(command, config, out_dir, seed, out, err);
  if (!err.str().empty()) py::print(err.str(), py::arg("end") = "", py::arg("file") = py::module_::import("sys").attr("stderr"));
  return rc;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Serial-chain dynamics with time-varying inertial parameters";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<NumericFailure>(m, "NumericFailure", PyExc_ArithmeticError);

  py::class_<InertialParams>(m, "InertialParams")
      .def(py::init<>())
      .def_readwrite("m", &InertialParams::m)
      .def_readwrite("h", &InertialParams::h)
      .def_readwrite("I", &InertialParams::I)
      .def("to_vector", &InertialParams::to_vector)
      .def_static("from_vector", [](const Vec10& v) { return InertialParams::from_vector(v); })
      .def("__repr__", [](const InertialParams& p) { return "<InertialParams m=" + std::to_string(p.m) + ">"; });

  py::class_<ConsistencyResult>(m, "ConsistencyResult")
      .def_readonly("consistent", &ConsistencyResult::consistent)
      .def_readonly("lambda_min", &ConsistencyResult::lambda_min)
      .def_readonly("lambda_max", &ConsistencyResult::lambda_max);

  m.def("sphere_params", &sphere_params, py::arg("mass"), py::arg("radius"), py::arg("center") = Vec3(Vec3::Zero()));
  m.def("box_params", &box_params, py::arg("mass"), py::arg("size"), py::arg("center") = Vec3(Vec3::Zero()));
  m.def("unit_ball_params", &unit_ball_params);
  m.def("pseudo_inertia", &pseudo_inertia);
  m.def("check_consistency", &check_consistency, py::arg("params"), py::arg("margin") = 0.0);

  py::class_<Chain>(m, "Chain")
      .def_property_readonly("dof", &Chain::dof)
      .def_property_readonly("bodies", &Chain::bodies)
      .def_property_readonly("gravity", &Chain::gravity);
  m.def("planar_chain", &planar_chain, py::arg("lengths"), py::arg("gravity") = Vec3(Vec3::Zero()), py::arg("tip") = false);
  m.def("prismatic_x_chain", &prismatic_x_chain, py::arg("gravity") = Vec3(Vec3::Zero()));
  m.def("jacobian", &jacobian);

  m.def("mass_matrix", &mass_matrix);
  m.def("coriolis", &coriolis);
  m.def("gravity", &gravity);
  m.def("q_block", &q_block);
  m.def("h_matrix", &h_matrix);
  m.def("skew", [](const Vec3& x) { return skew(x); });
  m.def("lemma5_factorization", &lemma5_factorization);
  m.def("sigma_max", &sigma_max);

  m.def("load_chain", [](const std::string& path) { return load_config(path).chain; });
  m.def("load_params", [](const std::string& path, double t) { return theta_at(load_config(path), t); },
        py::arg("path"), py::arg("t") = 0.0);
  m.def("simulate", &simulate, py::arg("config"));
  m.def("certify", &certify_file, py::arg("config"));
  m.def("run_command", &run_cli, py::arg("command"), py::arg("config"), py::arg("out_dir"),
        py::arg("seed") = std::nullopt);
}
