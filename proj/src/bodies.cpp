#include "genrob/bodies.hpp"

#include "genrob/errors.hpp"

namespace genrob {

BodySource constant_body(const InertialParams& p) {
  validate(p);
  ScaledInertia s;
  if (p.m != 0.0) {
    s.unit = (1.0 / p.m) * p;
    s.mass = TimeLaw::constant(p.m);
  } else {
    s.unit = p;
    s.mass = TimeLaw::constant(1.0);
  }
  return s;
}

namespace {

struct Evaluator {
  double t;

  BodyState operator()(const ParticleCloud& c) const {
    BodyState s;
    s.phi = cloud_inertial_params(c, t);
    s.phi_rate = cloud_param_rate(c, t);
    s.psi = flow_vector(c, t);
    s.psi_rate = flow_rate(c, t);
    s.nu = kinetic_offset(c, t);
    return s;
  }

  BodyState operator()(const ParamTrajectory& tr) const {
    BodyState s;
    s.phi = tr.at(t);
    s.phi_rate = tr.rate_at(t);
    return s;
  }

  BodyState operator()(const ScaledInertia& si) const {
    BodyState s;
    s.phi = si.mass.value(t) * si.unit;
    s.phi_rate = si.mass.rate_at(t) * si.unit;
    return s;
  }
};

}  // namespace

BodyState evaluate_body(const BodySource& src, double t) { return std::visit(Evaluator{t}, src); }

FlowState FlowState::zero(int bodies) {
  FlowState f;
  f.psi = VecX::Zero(12 * bodies);
  f.psi_rate = VecX::Zero(12 * bodies);
  return f;
}

SystemState evaluate_bodies(const std::vector<BodySource>& sources, double t) {
  if (sources.empty()) throw InvalidInput("evaluate_bodies: no bodies");
  SystemState s;
  s.flow = FlowState::zero(static_cast<int>(sources.size()));
  s.theta.reserve(sources.size());
  s.theta_rate.reserve(sources.size());
  for (std::size_t l = 0; l < sources.size(); ++l) {
    BodyState b = evaluate_body(sources[l], t);
    s.theta.push_back(b.phi);
    s.theta_rate.push_back(b.phi_rate);
    s.flow.psi.segment<12>(12 * static_cast<Eigen::Index>(l)) = b.psi;
    s.flow.psi_rate.segment<12>(12 * static_cast<Eigen::Index>(l)) = b.psi_rate;
    s.flow.nu += b.nu;
  }
  return s;
}

ParamTrajectory sample_trajectory(const BodySource& src, const std::vector<double>& times) {
  ParamTrajectory tr;
  tr.times = times;
  for (double t : times) {
    BodyState b = evaluate_body(src, t);
    tr.params.push_back(b.phi);
    tr.rates.push_back(b.phi_rate);
  }
  tr.validate();
  return tr;
}

}  // namespace genrob
