#include "genrob/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "genrob/errors.hpp"

namespace genrob {

Signal Signal::constant(const VecX& v) {
  Signal s;
  s.kind = Kind::kConstant;
  s.value = v;
  return s;
}

Signal Signal::table(std::vector<double> times, std::vector<VecX> values) {
  Signal s;
  s.kind = Kind::kTable;
  s.times = std::move(times);
  s.values = std::move(values);
  return s;
}

void Signal::validate(Eigen::Index n) const {
  switch (kind) {
    case Kind::kZero:
      return;
    case Kind::kConstant:
      if (value.size() != n || !value.allFinite()) throw InvalidInput("constant signal must have one finite entry per joint");
      return;
    case Kind::kTable:
      if (times.empty() || times.size() != values.size()) throw InvalidInput("signal table needs matching times and values");
      for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k]) || (k > 0 && !(times[k] > times[k - 1])))
          throw InvalidInput("signal table times must be finite and strictly increasing");
        if (values[k].size() != n || !values[k].allFinite())
          throw InvalidInput("signal table rows must have one finite entry per joint");
      }
      return;
  }
}

VecX Signal::at(double t, Eigen::Index n) const {
  switch (kind) {
    case Kind::kZero:
      return VecX::Zero(n);
    case Kind::kConstant:
      return value;
    case Kind::kTable: {
      if (t <= times.front()) return values.front();
      if (t >= times.back()) return values.back();
      const auto it = std::upper_bound(times.begin(), times.end(), t);
      const auto k = static_cast<std::size_t>(it - times.begin()) - 1;
      const double s = (t - times[k]) / (times[k + 1] - times[k]);
      return (1.0 - s) * values[k] + s * values[k + 1];
    }
  }
  return VecX::Zero(n);
}

TorqueSource TorqueSource::from_signal(Signal s) {
  TorqueSource t;
  t.signal = std::move(s);
  return t;
}

TorqueSource TorqueSource::pd(const VecX& setpoint, const VecX& kp, const VecX& kd, bool gravity_compensation) {
  TorqueSource t;
  t.kind = Kind::kPD;
  t.setpoint = setpoint;
  t.kp = kp;
  t.kd = kd;
  t.gravity_compensation = gravity_compensation;
  return t;
}

TorqueSource TorqueSource::gravity() {
  TorqueSource t;
  t.kind = Kind::kGravity;
  return t;
}

void TorqueSource::validate(Eigen::Index n) const {
  if (kind == Kind::kSignal) {
    signal.validate(n);
  } else if (kind == Kind::kPD) {
    if (setpoint.size() != n || kp.size() != n || kd.size() != n)
      throw InvalidInput("PD torque needs setpoint, kp and kd with one entry per joint");
    if (!setpoint.allFinite() || !kp.allFinite() || !kd.allFinite()) throw InvalidInput("PD gains must be finite");
  }
}

VecX TorqueSource::evaluate(double t, const DynamicsTerms& terms) const {
  const Eigen::Index n = terms.q.size();
  switch (kind) {
    case Kind::kSignal:
      return signal.at(t, n);
    case Kind::kPD: {
      VecX tau = kp.cwiseProduct(setpoint - terms.q) - kd.cwiseProduct(terms.qd);
      if (gravity_compensation) tau += terms.G;
      return tau;
    }
    case Kind::kGravity:
      return terms.G;
  }
  return VecX::Zero(n);
}

void Scenario::validate() const {
  const Eigen::Index n = chain.dof();
  if (static_cast<int>(bodies.size()) != chain.bodies())
    throw InvalidInput("scenario needs one body per joint (" + std::to_string(chain.bodies()) + ")");
  if (q0.size() != n || qd0.size() != n) throw InvalidInput("initial state must have one entry per degree of freedom");
  if (!q0.allFinite() || !qd0.allFinite()) throw InvalidInput("initial state is not finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("time step must be positive");
  if (!(t_end > t0) || !std::isfinite(t_end) || !std::isfinite(t0)) throw InvalidInput("time span must be positive");
  if (output_every < 1) throw InvalidInput("output_every must be >= 1");
  const double ratio = (t_end - t0) / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw InvalidInput("time span must be an integer multiple of the time step");
  torque.validate(n);
  disturbance.validate(n);
}

std::size_t Scenario::steps() const { return static_cast<std::size_t>(std::llround((t_end - t0) / dt)); }

namespace {

DynamicsTerms terms_at(const Scenario& sc, double t, const VecX& q, const VecX& qd) {
  return assemble(sc.chain, q, qd, evaluate_bodies(sc.bodies, t));
}

VecX qdd_from(const Scenario& sc, double t, const DynamicsTerms& d) {
  const Eigen::Index n = d.q.size();
  return forward_dynamics(d, sc.torque.evaluate(t, d), sc.disturbance.at(t, n));
}

std::string describe(const SimState& s) {
  std::ostringstream os;
  os.precision(17);
  os << "t = " << s.t << ", q = [";
  for (Eigen::Index i = 0; i < s.q.size(); ++i) os << (i ? ", " : "") << s.q(i);
  os << "], qd = [";
  for (Eigen::Index i = 0; i < s.qd.size(); ++i) os << (i ? ", " : "") << s.qd(i);
  os << "]";
  return os.str();
}

}  // namespace

VecX accelerations(const Scenario& sc, const SimState& s) {
  return qdd_from(sc, s.t, terms_at(sc, s.t, s.q, s.qd));
}

SimState step(const Scenario& sc, const SimState& s, double dt) {
  const double h = 0.5 * dt;
  const VecX k1q = s.qd;
  const VecX k1v = accelerations(sc, s);
  const SimState s2{s.t + h, s.q + h * k1q, s.qd + h * k1v};
  const VecX k2q = s2.qd;
  const VecX k2v = accelerations(sc, s2);
  const SimState s3{s.t + h, s.q + h * k2q, s.qd + h * k2v};
  const VecX k3q = s3.qd;
  const VecX k3v = accelerations(sc, s3);
  const SimState s4{s.t + dt, s.q + dt * k3q, s.qd + dt * k3v};
  const VecX k4q = s4.qd;
  const VecX k4v = accelerations(sc, s4);
  SimState out;
  out.t = s.t + dt;
  out.q = s.q + (dt / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
  out.qd = s.qd + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  return out;
}

EnergyAudit energy(const Scenario& sc, const SimState& s) {
  const SystemState b = evaluate_bodies(sc.bodies, s.t);
  const DynamicsTerms d = assemble(sc.chain, s.q, s.qd, b);
  EnergyAudit e;
  e.kinetic = kinetic_terms(d);
  e.potential = potential_energy(sc.chain, s.q, b.theta);
  e.nu = b.flow.nu;
  return e;
}

Trajectory run(const Scenario& sc) {
  sc.validate();
  Trajectory tr;
  const std::size_t n = sc.steps();
  SimState s{sc.t0, sc.q0, sc.qd0};

  // Records the state; the flow work is advanced by the trapezoid rule from
  // the previous sample's power.
  struct Tally {
    double power = 0.0;
    double work = 0.0;
    double energy = 0.0;
  };
  const auto record = [&](const SimState& st, const Tally& prev, double h, bool keep) {
    const SystemState b = evaluate_bodies(sc.bodies, st.t);
    const DynamicsTerms d = assemble(sc.chain, st.q, st.qd, b);
    Tally now;
    now.power = st.qd.dot(d.flow_force());
    now.work = prev.work + 0.5 * h * (prev.power + now.power);
    Sample smp;
    smp.t = st.t;
    smp.q = st.q;
    smp.qd = st.qd;
    smp.qdd = qdd_from(sc, st.t, d);
    smp.energy.kinetic = kinetic_terms(d);
    smp.energy.potential = potential_energy(sc.chain, st.q, b.theta);
    smp.energy.nu = b.flow.nu;
    smp.flow_work = now.work;
    now.energy = smp.energy.total();
    if (keep) tr.samples.push_back(std::move(smp));
    return now;
  };

  try {
    Tally tally = record(s, Tally{}, 0.0, true);
    const double e0 = tally.energy;
    for (std::size_t k = 1; k <= n; ++k) {
      s = step(sc, s, sc.dt);
      s.t = sc.t0 + static_cast<double>(k) * sc.dt;
      const bool keep = (k % static_cast<std::size_t>(sc.output_every) == 0) || k == n;
      tally = record(s, tally, sc.dt, keep);
      tr.max_energy_drift = std::max(tr.max_energy_drift, std::abs(tally.energy - e0));
      ++tr.steps;
    }
  } catch (const SingularMassMatrix& ex) {
    throw SingularMassMatrix(std::string(ex.what()) + "; simulation aborted at " + describe(s), ex.lambda_min());
  }
  return tr;
}

}  // namespace genrob
