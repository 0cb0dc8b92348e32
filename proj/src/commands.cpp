#include "genrob/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "genrob/bounds.hpp"
#include "genrob/dynamics.hpp"

namespace genrob {

namespace {

using json = nlohmann::json;

// Non-finite values have no JSON representation; they are written as strings.
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json vec_json(const VecX& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

json list_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json grid_json(const Grid& g) {
  json a = json::array();
  for (const auto& ax : g.axes) a.push_back({{"min", num(ax.min)}, {"max", num(ax.max)}, {"count", ax.count}});
  return a;
}

json margins_json(const TrajectoryMargins& m, const std::vector<double>& times) {
  json j;
  j["lambda_min"] = list_json(m.lambda_min);
  j["lambda_max"] = list_json(m.lambda_max);
  json flags = json::array();
  for (double l : m.lambda_min) flags.push_back(l > 1e-12);
  j["consistent"] = flags;
  j["inf_lambda_min"] = num(m.inf_lambda_min);
  j["sup_lambda_max"] = num(m.sup_lambda_max);
  j["argmin_time_s"] = num(times[m.argmin]);
  j["argmax_time_s"] = num(times[m.argmax]);
  j["consistent_at_all_samples"] = m.consistent_at_all_samples;
  std::vector<double> bad;
  for (std::size_t k : m.inconsistent_samples) bad.push_back(times[k]);
  j["inconsistent_times_s"] = list_json(bad);
  j["vanishing_trend"] = m.vanishing_trend;
  j["growth_trend"] = m.growth_trend;
  j["uniformly_consistent"] = m.uniformly_consistent;
  j["upper_bounded"] = m.upper_bounded;
  return j;
}

std::vector<ParamTrajectory> trajectories(const Config& cfg, const std::vector<double>& times) {
  std::vector<ParamTrajectory> trs;
  for (const auto& b : cfg.bodies) trs.push_back(sample_trajectory(b, times));
  return trs;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------

CommandOutput simulate_command(const Config& cfg) {
  const Scenario sc = make_scenario(cfg);
  const Trajectory tr = run(sc);
  const auto n = static_cast<int>(sc.q0.size());

  std::ostringstream csv;
  csv << "t";
  for (const char* name : {"q", "qd", "qdd"})
    for (int i = 1; i <= n; ++i) csv << ',' << name << '_' << i;
  csv << ",T_kin,U_pot,nu,E_total\n";
  for (const Sample& s : tr.samples) {
    csv << format_number(s.t);
    for (const VecX* v : {&s.q, &s.qd, &s.qdd})
      for (int i = 0; i < n; ++i) csv << ',' << format_number((*v)(i));
    csv << ',' << format_number(s.energy.kinetic.total()) << ',' << format_number(s.energy.potential) << ','
        << format_number(s.energy.nu) << ',' << format_number(s.energy.total()) << '\n';
  }

  const Sample& first = tr.samples.front();
  const Sample& last = tr.samples.back();
  json sum;
  sum["steps"] = tr.steps;
  sum["samples"] = tr.samples.size();
  sum["dt_s"] = num(sc.dt);
  sum["t_end_s"] = num(last.t);
  const double e0 = first.energy.total();
  sum["energy"] = {{"initial_J", num(e0)},
                   {"final_J", num(last.energy.total())},
                   {"max_drift_J", num(tr.max_energy_drift)},
                   {"relative_drift", num(tr.max_energy_drift / std::max(std::abs(e0), 1e-300))}};
  sum["flow_work_J"] = num(last.flow_work);
  sum["flow_work_note"] = "integral of qd^T J^T Q Psi-dot; diagnostic, not part of the energy balance";
  json bodies = json::array();
  for (const auto& b : sc.bodies) {
    const BodyState a = evaluate_body(b, first.t);
    const BodyState z = evaluate_body(b, last.t);
    bodies.push_back({{"mass_kg_start", num(a.phi.m)},
                      {"mass_kg_end", num(z.phi.m)},
                      {"mass_rate_kgps_start", num(a.phi_rate.m)},
                      {"mass_rate_kgps_end", num(z.phi_rate.m)}});
  }
  sum["bodies"] = bodies;
  const SystemState st = evaluate_bodies(sc.bodies, last.t);
  sum["param_rate_force_end"] = vec_json(param_rate_matrix(sc.chain, last.q, st.theta_rate) * last.qd);
  sum["final_state"] = {{"q", vec_json(last.q)}, {"qd", vec_json(last.qd)}};

  CommandOutput out;
  out.files = {{"trajectory.csv", csv.str()}, {"summary.json", dump(sum)}};
  out.message = "simulated " + std::to_string(tr.steps) + " steps, max energy drift " +
                format_number(tr.max_energy_drift) + " J";
  return out;
}

CommandOutput consistency_command(const Config& cfg) {
  const std::vector<double> times = consistency_times(cfg);
  json rep;
  rep["kind"] = "sampled certificate";
  rep["times_s"] = list_json(times);
  json bodies = json::array();
  bool all_uniform = true;
  for (const auto& tr : trajectories(cfg, times)) {
    const TrajectoryMargins m = trajectory_margins(tr);
    all_uniform = all_uniform && m.uniformly_consistent;
    bodies.push_back(margins_json(m, times));
  }
  rep["bodies"] = bodies;
  rep["all_uniformly_consistent"] = all_uniform;
  CommandOutput out;
  out.files = {{"consistency.json", dump(rep)}};
  out.message = std::string("consistency report written; uniformly consistent: ") + (all_uniform ? "yes" : "no");
  return out;
}

CommandOutput certify_command(const Config& cfg) {
  if (!cfg.certify) throw ConfigError("", "missing required key \"certify\"");
  const CertifyConfig& cc = *cfg.certify;
  const std::vector<ParamTrajectory> trs = trajectories(cfg, cc.times);
  BoundOptions opt;
  opt.scan.restarts = cc.restarts;
  opt.scan.seed = cfg.seed;
  opt.epsilon = cc.epsilon;
  const BoundCertificate c = certify(cfg.chain, trs, cc.grid, opt);
  const QNormReport qn = q_norm_check(cfg.chain, cc.grid, opt.scan);
  const RateBound rb = rate_bound(cfg.chain, trs, cc.grid);
  const CorollaryReport cr = corollary_report(cfg.chain, c);

  json rep;
  rep["kind"] = "sampled certificate";
  rep["seed"] = cfg.seed;
  rep["alpha1"] = num(c.alpha1);
  rep["alpha2"] = num(c.alpha2);
  rep["epsilon"] = num(opt.epsilon);
  rep["jac_inf"] = num(c.jac_inf);
  rep["jac_sup"] = num(c.jac_sup);
  rep["consistency_inf"] = num(c.consistency_inf);
  rep["consistency_sup"] = num(c.consistency_sup);
  rep["verdicts"] = {{"normal", c.normal},
                     {"upper_bounded_jac", c.upper_bounded_jac},
                     {"uniformly_consistent", c.uniformly_consistent},
                     {"params_upper_bounded", c.params_upper_bounded}};
  rep["grid"] = grid_json(c.grid);
  rep["restarts"] = cc.restarts;
  rep["times_s"] = list_json(c.times);
  rep["witnesses"] = {{"jac_argmin_q", vec_json(c.scan.argmin)},
                      {"jac_argmax_q", vec_json(c.scan.argmax)},
                      {"prismatic_sensitivity", num(c.scan.prismatic_sensitivity)}};
  json bodies = json::array();
  for (const auto& m : c.bodies) bodies.push_back(margins_json(m, c.times));
  rep["bodies"] = bodies;
  rep["verification"] = {{"points", c.verified_points},
                         {"sampled_min_lambda_M", num(c.sampled_min_lambda)},
                         {"sampled_max_lambda_M", num(c.sampled_max_lambda)},
                         {"lower_holds", c.lower_holds},
                         {"upper_holds", c.upper_holds}};
  rep["q_norm"] = {{"sup_sigma_max", num(qn.sup)}, {"inf_sigma_max", num(qn.inf)}, {"limit", num(kQNormLimit)}};
  rep["rate_bound"] = {{"sup_sigma_max_M_rate", num(rb.sup_sigma)},
                       {"chi", num(rb.chi)},
                       {"envelope", num(rb.envelope)},
                       {"envelope_holds", rb.envelope_holds},
                       {"points", rb.points}};
  json msgs = json::array();
  for (const auto& m : cr.messages) msgs.push_back(m);
  rep["corollary"] = {{"hypotheses_hold", cr.hypotheses_hold},
                      {"bounds_follow", cr.bounds_follow},
                      {"constant_params", cr.constant_params},
                      {"beta1", num(cr.beta1)},
                      {"beta2", num(cr.beta2)},
                      {"unit_ball_inf_lambda_min_M", num(cr.unit_ball_inf)},
                      {"unit_ball_sup_lambda_max_M", num(cr.unit_ball_sup)},
                      {"lower_direction_witnessed", cr.lower_direction_witnessed},
                      {"upper_direction_witnessed", cr.upper_direction_witnessed},
                      {"messages", msgs}};
  json notes = json::array();
  for (const auto& s : c.notes) notes.push_back(s);
  rep["notes"] = notes;

  CommandOutput out;
  out.files = {{"certificate.json", dump(rep)}};
  out.message = "alpha1 = " + format_number(c.alpha1) + ", alpha2 = " + format_number(c.alpha2);
  return out;
}

// ---------------------------------------------------------------------------

bool PropertyReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const PropertyCheck* PropertyReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

void observe(PropertyCheck& c, double residual) {
  c.worst = std::max(c.worst, residual);
  ++c.samples;
  if (!(residual <= c.tolerance)) c.passed = false;
}

double inf_norm(const MatX& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

VecX random_configuration(const Chain& chain, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(-3.141592653589793, 3.141592653589793);
  std::uniform_real_distribution<double> lin(-1.0, 1.0);
  VecX q(chain.dof());
  for (const auto& l : chain.links())
    if (l.dof >= 0) q(l.dof) = l.kind == JointKind::kRevolute ? ang(rng) : lin(rng);
  return q;
}

VecX random_vector(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  VecX v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

}  // namespace

PropertyReport run_property_suite(const Config& cfg) {
  const VerifyConfig vc = cfg.verify.value_or(VerifyConfig{});
  const Chain& chain = cfg.chain;
  const Eigen::Index n = chain.dof();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, vc.times.size() - 1);

  PropertyCheck skew_sym{"skew_symmetry", true, 0.0, 1e-9, 0};
  PropertyCheck hskew{"h_skew_symmetry", true, 0.0, 1e-12, 0};
  PropertyCheck reg{"regressor_identity", true, 0.0, 1e-9, 0};
  PropertyCheck qnorm{"q_block_norm", true, 0.0, kQNormLimit + 1e-9, 0};
  PropertyCheck st{"st_factorization", true, 0.0, 1e-12, 0};

  for (int s = 0; s < vc.samples; ++s) {
    const double t = vc.times[pick(rng)];
    const SystemState bs = evaluate_bodies(cfg.bodies, t);
    const VecX q = random_configuration(chain, rng);
    const VecX qd = random_vector(n, rng);

    const std::vector<MatX> dm = mass_matrix_partials(chain, q, bs.theta);
    const MatX mrate = param_rate_matrix(chain, q, bs.theta_rate);
    MatX mdot = mrate;
    for (Eigen::Index i = 0; i < n; ++i) mdot += dm[static_cast<std::size_t>(i)] * qd(i);
    const MatX c = coriolis(chain, q, qd, bs.theta);
    const MatX nmat = mdot - 2.0 * c - mrate;
    observe(skew_sym, inf_norm(nmat + nmat.transpose()) / std::max(1.0, inf_norm(mdot)));

    const MatX h = h_matrix(chain, q, bs.flow.psi);
    observe(hskew, inf_norm(h + h.transpose()));

    const VecX v = random_vector(n, rng);
    const VecX a = random_vector(n, rng);
    const VecX lhs = mass_matrix(chain, q, bs.theta) * a + c * v +
                     gravity(chain, q, bs.theta);
    const Regressor r = regressor(chain, q, qd, v, a);
    observe(reg, (lhs - r.R * stack_params(bs.theta)).cwiseAbs().maxCoeff() / std::max(1.0, lhs.cwiseAbs().maxCoeff()));

    observe(qnorm, sigma_max(q_block(chain, q)));

    const Vec3 x = random_vector(3, rng);
    const Mat3 rot = rotation(Vec3(random_vector(3, rng, 3.141592653589793)));
    observe(st, inf_norm(lemma5_factorization(x, rot) - skew(x) * rot));
  }

  // Euler-Lagrange comparison along a seeded smooth path.
  PropertyCheck oracle{"lagrangian_oracle", true, 0.0, vc.oracle_tolerance, 0};
  PropertyCheck energy{"energy_decomposition", true, 0.0, 1e-9, 0};
  std::uniform_real_distribution<double> amp(0.3, 0.8), freq(0.5, 2.0), phase(0.0, 6.283185307179586);
  SinePath path{random_configuration(chain, rng), VecX(n), VecX(n), VecX(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    path.amplitude(i) = amp(rng);
    path.omega(i) = freq(rng);
    path.phase(i) = phase(rng);
  }
  for (double t : vc.oracle_times) {
    const SystemState bs = evaluate_bodies(cfg.bodies, t);
    DynamicsTerms d = assemble(chain, path.q(t), path.qd(t), bs);
    if (vc.inject_fault == "flip_h_sign") d.H = -d.H;
    const VecX lhs = d.generalized_force(path.qdd(t));
    const VecX ref = lagrangian_oracle(chain, cfg.bodies, path, t);
    observe(oracle, (lhs - ref).norm() / std::max(1.0, lhs.norm()));

    const double t3 = kinetic_terms(d).total();
    const double tp = particle_kinetic_energy(chain, cfg.bodies, d.q, d.qd, t);
    observe(energy, std::abs(t3 - tp) / std::max(1.0, std::abs(tp)));
  }

  PropertyReport rep;
  rep.checks = {skew_sym, hskew, reg, qnorm, st, oracle, energy};
  return rep;
}

CommandOutput verify_command(const Config& cfg) {
  const PropertyReport rep = run_property_suite(cfg);
  json j;
  j["seed"] = cfg.seed;
  j["fault_injected"] = cfg.verify ? cfg.verify->inject_fault : std::string();
  json checks = json::array();
  std::vector<std::string> failed;
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"worst_residual", num(c.worst)},
                      {"tolerance", num(c.tolerance)},
                      {"samples", c.samples}});
    if (!c.passed) failed.push_back(c.name);
  }
  j["checks"] = checks;
  j["passed"] = rep.passed();
  j["failed"] = failed;

  CommandOutput out;
  out.files = {{"verify.json", dump(j)}};
  if (rep.passed()) {
    out.message = "all " + std::to_string(rep.checks.size()) + " property checks passed";
  } else {
    out.exit_code = kExitProperty;
    out.message = "property checks failed:";
    for (const auto& f : failed) out.message += " " + f;
  }
  return out;
}

int run_command(const std::string& name, const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
  CommandOutput res;
  try {
    Config cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (name == "simulate") {
      res = simulate_command(cfg);
    } else if (name == "consistency") {
      res = consistency_command(cfg);
    } else if (name == "certify") {
      res = certify_command(cfg);
    } else if (name == "verify") {
      res = verify_command(cfg);
    } else {
      err << "unknown command: " << name << "\n";
      return kExitConfig;
    }
  } catch (const InvalidInput& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericFailure& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const InternalInconsistency& e) {
    err << "internal inconsistency: " << e.what() << "\n";
    return kExitNumeric;
  }

  try {
    std::filesystem::create_directories(out_dir);
    for (const auto& [file, contents] : res.files) {
      const std::filesystem::path p = std::filesystem::path(out_dir) / file;
      std::ofstream f(p, std::ios::binary);
      f << contents;
      if (!f) throw std::runtime_error("cannot write " + p.string());
    }
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return kExitIo;
  }
  (res.exit_code == kExitOk ? out : err) << res.message << "\n";
  return res.exit_code;
}

}  // namespace genrob
