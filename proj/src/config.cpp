#include "genrob/config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace genrob {

namespace {

using json = nlohmann::json;

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

// Read access to one JSON object that remembers which keys were consumed, so
// finish() can reject everything else.
class Node {
 public:
  Node(const json& j, std::string ptr) : j_(&j), ptr_(std::move(ptr)) {}

  const std::string& ptr() const { return ptr_; }
  const json& raw() const { return *j_; }
  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(ptr_, msg); }

  Node object() const {
    if (!j_->is_object()) fail("expected an object");
    return *this;
  }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  Node at(const std::string& key) {
    if (!j_->is_object()) fail("expected an object");
    if (!j_->contains(key)) throw ConfigError(ptr_, "missing required key \"" + key + "\"");
    used_.insert(key);
    return Node((*j_)[key], ptr_ + "/" + escape_token(key));
  }

  std::optional<Node> get(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return at(key);
  }

  double number() const {
    if (!j_->is_number()) fail("expected a number");
    const double v = j_->get<double>();
    if (!std::isfinite(v)) fail("number must be finite");
    return v;
  }

  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("must be positive");
    return v;
  }

  long long integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<long long>();
  }

  bool boolean() const {
    if (!j_->is_boolean()) fail("expected true or false");
    return j_->get<bool>();
  }

  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }

  std::vector<Node> array() const {
    if (!j_->is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t k = 0; k < j_->size(); ++k) out.emplace_back((*j_)[k], ptr_ + "/" + std::to_string(k));
    return out;
  }

  VecX vec(Eigen::Index expected = -1) const {
    const auto items = array();
    if (expected >= 0 && static_cast<Eigen::Index>(items.size()) != expected)
      fail("expected " + std::to_string(expected) + " numbers, got " + std::to_string(items.size()));
    VecX v(static_cast<Eigen::Index>(items.size()));
    for (std::size_t k = 0; k < items.size(); ++k) v(static_cast<Eigen::Index>(k)) = items[k].number();
    return v;
  }

  Vec3 vec3() const { return vec(3); }

  std::vector<double> numbers() const {
    const VecX v = vec();
    return {v.data(), v.data() + v.size()};
  }

  void finish() const {
    if (!j_->is_object()) return;
    for (auto it = j_->begin(); it != j_->end(); ++it)
      if (!used_.count(it.key()))
        throw ConfigError(ptr_ + "/" + escape_token(it.key()), "unknown key \"" + it.key() + "\"");
  }

 private:
  const json* j_;
  std::string ptr_;
  std::set<std::string> used_;
};

// ---------------------------------------------------------------------------

Mat3 inertia_from(const Node& n) {
  const VecX v = n.vec(6);
  Mat3 i;
  i << v(0), v(3), v(5),
       v(3), v(1), v(4),
       v(5), v(4), v(2);
  return i;
}

InertialParams rigid_params(Node n) {
  InertialParams p;
  p.m = n.at("mass_kg").number();
  if (auto h = n.get("first_moment_kgm")) p.h = h->vec3();
  if (auto i = n.get("inertia_kgm2")) p.I = inertia_from(*i);
  n.finish();
  return p;
}

TimeLaw parse_law(Node n) {
  n.object();
  const std::string type = n.at("type").string();
  TimeLaw law;
  if (type == "constant") {
    law = TimeLaw::constant(n.at("value_kg").number());
  } else if (type == "linear") {
    law = TimeLaw::linear(n.at("initial_kg").number(), n.at("rate_kgps").number());
  } else if (type == "sinusoid") {
    const double mean = n.at("mean_kg").number();
    const double amp = n.at("amplitude_kg").number();
    const double omega = n.at("omega_radps").number();
    const double phase = n.get("phase_rad") ? n.at("phase_rad").number() : 0.0;
    law = TimeLaw::sinusoid(mean, amp, omega, phase);
  } else if (type == "exponential") {
    law = TimeLaw::exponential(n.at("initial_kg").number(), n.at("rate_per_s").number());
  } else {
    n.at("type").fail("unknown mass law \"" + type + "\" (constant, linear, sinusoid, exponential)");
  }
  n.finish();
  return law;
}

// A shape either has a fixed "mass_kg" or a "mass_law".
TimeLaw shape_mass(Node& n) {
  const bool has_mass = n.has("mass_kg");
  const bool has_law = n.has("mass_law");
  if (has_mass == has_law) n.fail("give exactly one of \"mass_kg\" or \"mass_law\"");
  if (has_mass) return TimeLaw::constant(n.at("mass_kg").number());
  return parse_law(n.at("mass_law"));
}

BodySource scaled(const InertialParams& unit, const TimeLaw& law) { return ScaledInertia{unit, law}; }

RelativeMotion parse_motion(Node n) {
  n.object();
  const std::string type = n.at("type").string();
  RelativeMotion m;
  if (type == "still") {
    m = RelativeMotion::still();
  } else if (type == "constant_velocity") {
    m = RelativeMotion::constant_velocity(n.at("velocity_mps").vec3());
  } else if (type == "oscillation") {
    const Vec3 a = n.at("amplitude_m").vec3();
    const double w = n.at("omega_radps").number();
    const double p = n.get("phase_rad") ? n.at("phase_rad").number() : 0.0;
    m = RelativeMotion::oscillation(a, w, p);
  } else {
    n.at("type").fail("unknown motion \"" + type + "\" (still, constant_velocity, oscillation)");
  }
  n.finish();
  return m;
}

Particle parse_particle(Node n) {
  n.object();
  Particle p;
  p.position = n.at("position_m").vec3();
  p.mass = shape_mass(n);
  if (auto s = n.get("mobility")) {
    p.mobility = s->number();
    if (p.mobility < 0.0 || p.mobility > 1.0) s->fail("mobility must lie in [0, 1]");
  }
  if (auto m = n.get("motion")) p.motion = parse_motion(*m);
  n.finish();
  return p;
}

ParticleCloud random_cloud(Node n, std::mt19937_64& rng) {
  n.object();
  const long long count = n.at("count").integer();
  if (count < 1) n.at("count").fail("count must be >= 1");
  const double mass = n.at("mass_kg").positive();
  const double radius = n.at("radius_m").positive();
  const Vec3 center = n.get("center_m") ? n.at("center_m").vec3() : Vec3::Zero();
  const double mobility = n.get("mobility") ? n.at("mobility").number() : 0.0;
  const double vamp = n.get("velocity_amplitude_mps") ? n.at("velocity_amplitude_mps").number() : 0.0;
  const double omega = n.get("omega_radps") ? n.at("omega_radps").number() : 1.0;
  const double rate = n.get("mass_rate_kgps") ? n.at("mass_rate_kgps").number() : 0.0;
  n.finish();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> ph(0.0, 6.283185307179586);
  std::vector<Particle> ps;
  for (long long k = 0; k < count; ++k) {
    Particle p;
    p.position = center + radius * Vec3(u(rng), u(rng), u(rng));
    p.mass = TimeLaw::linear(mass / static_cast<double>(count), rate / static_cast<double>(count));
    p.mobility = mobility;
    if (vamp != 0.0 && omega != 0.0) {
      const Vec3 dir(u(rng), u(rng), u(rng));
      p.motion = RelativeMotion::oscillation((vamp / omega) * dir, omega, ph(rng));
    }
    ps.push_back(std::move(p));
  }
  return ParticleCloud(std::move(ps));
}

ParamTrajectory params_table(Node n) {
  n.object();
  ParamTrajectory tr;
  tr.times = n.at("times_s").numbers();
  for (Node s : n.at("samples").array()) {
    s.object();
    tr.params.push_back(rigid_params(s));
  }
  n.finish();
  try {
    tr.validate();
  } catch (const InvalidInput& e) {
    n.fail(e.what());
  }
  return tr;
}

BodySource parse_body(Node n, std::mt19937_64& rng) {
  n.object();
  const std::vector<std::string> kinds{"rigid", "rod", "sphere", "box", "params_table", "particles", "random_cloud"};
  std::string kind;
  for (const auto& k : kinds) {
    if (n.has(k)) {
      if (!kind.empty()) n.fail("a body needs exactly one of rigid, rod, sphere, box, params_table, particles, random_cloud");
      kind = k;
    }
  }
  if (kind.empty()) n.fail("a body needs one of rigid, rod, sphere, box, params_table, particles, random_cloud");
  Node s = n.at(kind);
  BodySource out;
  if (kind == "rigid") {
    s.object();
    out = constant_body(rigid_params(s));
  } else if (kind == "rod") {
    s.object();
    const TimeLaw law = shape_mass(s);
    const double len = s.at("length_m").positive();
    s.finish();
    InertialParams unit;
    unit.m = 1.0;
    unit.h = Vec3(0.5 * len, 0.0, 0.0);
    unit.I = Vec3(0.0, len * len / 3.0, len * len / 3.0).asDiagonal();
    out = scaled(unit, law);
  } else if (kind == "sphere") {
    s.object();
    const TimeLaw law = shape_mass(s);
    const double r = s.at("radius_m").positive();
    const Vec3 c = s.get("center_m") ? s.at("center_m").vec3() : Vec3::Zero();
    s.finish();
    out = scaled(sphere_params(1.0, r, c), law);
  } else if (kind == "box") {
    s.object();
    const TimeLaw law = shape_mass(s);
    const Vec3 size = s.at("size_m").vec3();
    const Vec3 c = s.get("center_m") ? s.at("center_m").vec3() : Vec3::Zero();
    s.finish();
    out = scaled(box_params(1.0, size, c), law);
  } else if (kind == "params_table") {
    out = params_table(s);
  } else if (kind == "particles") {
    std::vector<Particle> ps;
    for (const Node& p : s.array()) ps.push_back(parse_particle(p));
    if (ps.empty()) s.fail("particle list is empty");
    try {
      out = ParticleCloud(std::move(ps));
    } catch (const InvalidInput& e) {
      s.fail(e.what());
    }
  } else {
    out = random_cloud(s, rng);
  }
  n.finish();
  return out;
}

Joint parse_joint(Node n) {
  n.object();
  Joint j;
  const std::string type = n.at("type").string();
  if (type == "revolute") {
    j.kind = JointKind::kRevolute;
  } else if (type == "prismatic") {
    j.kind = JointKind::kPrismatic;
  } else if (type == "fixed") {
    j.kind = JointKind::kFixed;
  } else {
    n.at("type").fail("unknown joint type \"" + type + "\" (revolute, prismatic, fixed)");
  }
  if (auto a = n.get("axis")) j.axis = a->vec3();
  if (auto o = n.get("offset_m")) j.offset = o->vec3();
  if (auto r = n.get("offset_rpy_rad")) j.offset_rotation = rotation(r->vec3());
  n.finish();
  return j;
}

Chain parse_chain(Node n) {
  n.object();
  const Vec3 g = n.get("gravity_mps2") ? n.at("gravity_mps2").vec3() : Vec3::Zero();
  std::vector<Joint> joints;
  for (const Node& j : n.at("joints").array()) joints.push_back(parse_joint(j));
  n.finish();
  try {
    return Chain(std::move(joints), g);
  } catch (const InvalidInput& e) {
    n.fail(e.what());
  }
}

std::vector<double> parse_times(Node n) {
  std::vector<double> t;
  if (n.raw().is_array()) {
    t = n.numbers();
  } else {
    n.object();
    const double a = n.at("start_s").number();
    const double b = n.at("stop_s").number();
    const long long c = n.at("count").integer();
    n.finish();
    if (c < 1) n.fail("count must be >= 1");
    for (long long k = 0; k < c; ++k) t.push_back(c == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(c - 1));
  }
  if (t.empty()) n.fail("at least one time is required");
  for (std::size_t k = 1; k < t.size(); ++k)
    if (!(t[k] > t[k - 1])) n.fail("times must strictly increase");
  return t;
}

Signal parse_signal(Node n, Eigen::Index dof, bool allow_controllers, TorqueSource* torque) {
  n.object();
  const std::string type = n.at("type").string();
  Signal s;
  if (type == "zero") {
    s = Signal::zero();
  } else if (type == "constant") {
    s = Signal::constant(n.at("value").vec(dof));
  } else if (type == "table") {
    std::vector<double> times = parse_times(n.at("times_s"));
    std::vector<VecX> values;
    for (const Node& row : n.at("values").array()) values.push_back(row.vec(dof));
    if (values.size() != times.size()) n.fail("table needs one row of values per time");
    s = Signal::table(std::move(times), std::move(values));
  } else if (allow_controllers && type == "pd") {
    const VecX sp = n.at("setpoint").vec(dof);
    const VecX kp = n.at("kp").vec(dof);
    const VecX kd = n.at("kd").vec(dof);
    const bool gc = n.get("gravity_compensation") ? n.at("gravity_compensation").boolean() : false;
    *torque = TorqueSource::pd(sp, kp, kd, gc);
  } else if (allow_controllers && type == "gravity") {
    *torque = TorqueSource::gravity();
  } else {
    n.at("type").fail("unknown source \"" + type + "\"" +
                      (allow_controllers ? " (zero, constant, table, pd, gravity)" : " (zero, constant, table)"));
  }
  n.finish();
  return s;
}

SimulationConfig parse_simulation(Node n, Eigen::Index dof) {
  n.object();
  SimulationConfig s;
  if (auto t = n.get("t0_s")) s.t0 = t->number();
  s.t_end = n.at("t_end_s").number();
  s.dt = n.at("dt_s").positive();
  if (auto o = n.get("output_every")) {
    const long long k = o->integer();
    if (k < 1) o->fail("must be >= 1");
    s.output_every = static_cast<int>(k);
  }
  s.q0 = n.get("q0") ? n.at("q0").vec(dof) : VecX::Zero(dof);
  s.qd0 = n.get("qd0") ? n.at("qd0").vec(dof) : VecX::Zero(dof);
  if (auto t = n.get("torque")) {
    TorqueSource ctl;
    ctl.kind = TorqueSource::Kind::kSignal;
    Signal sig = parse_signal(*t, dof, true, &ctl);
    s.torque = ctl.kind == TorqueSource::Kind::kSignal ? TorqueSource::from_signal(sig) : ctl;
  }
  if (auto w = n.get("disturbance")) s.disturbance = parse_signal(*w, dof, false, nullptr);
  n.finish();
  if (!(s.t_end > s.t0)) n.fail("t_end_s must exceed t0_s");
  return s;
}

Grid parse_grid(Node n, int dof) {
  Grid g;
  for (Node a : n.array()) {
    a.object();
    GridAxis ax;
    ax.min = a.at("min").number();
    ax.max = a.at("max").number();
    const long long c = a.at("count").integer();
    a.finish();
    if (c < 1) a.fail("count must be >= 1");
    if (ax.max < ax.min) a.fail("max must not be below min");
    ax.count = static_cast<int>(c);
    g.axes.push_back(ax);
  }
  if (static_cast<int>(g.axes.size()) != dof)
    n.fail("expected " + std::to_string(dof) + " grid axes (one per degree of freedom)");
  return g;
}

CertifyConfig parse_certify(Node n, int dof) {
  n.object();
  CertifyConfig c;
  c.grid = parse_grid(n.at("q_grid"), dof);
  c.times = parse_times(n.at("times_s"));
  if (auto r = n.get("restarts")) {
    const long long k = r->integer();
    if (k < 0) r->fail("must be >= 0");
    c.restarts = static_cast<int>(k);
  }
  if (auto e = n.get("epsilon")) {
    c.epsilon = e->number();
    if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) e->fail("must lie in (0, 1)");
  }
  n.finish();
  return c;
}

VerifyConfig parse_verify(Node n) {
  n.object();
  VerifyConfig v;
  if (auto s = n.get("samples")) {
    const long long k = s->integer();
    if (k < 1) s->fail("must be >= 1");
    v.samples = static_cast<int>(k);
  }
  if (n.get("times_s")) v.times = parse_times(n.at("times_s"));
  if (n.get("oracle_times_s")) v.oracle_times = parse_times(n.at("oracle_times_s"));
  if (auto t = n.get("oracle_tolerance")) v.oracle_tolerance = t->positive();
  if (auto f = n.get("inject_fault")) {
    v.inject_fault = f->string();
    if (v.inject_fault != "none" && v.inject_fault != "flip_h_sign")
      f->fail("unknown fault \"" + v.inject_fault + "\" (none, flip_h_sign)");
    if (v.inject_fault == "none") v.inject_fault.clear();
  }
  n.finish();
  return v;
}

}  // namespace

Config parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  Node root(doc, "");
  root.object();
  const std::uint64_t seed = root.get("seed") ? static_cast<std::uint64_t>(root.at("seed").integer()) : 1;
  Chain chain = parse_chain(root.at("chain"));
  std::mt19937_64 rng(seed);
  std::vector<BodySource> bodies;
  Node bl = root.at("bodies");
  for (const Node& b : bl.array()) bodies.push_back(parse_body(b, rng));
  if (static_cast<int>(bodies.size()) != chain.bodies())
    bl.fail("expected " + std::to_string(chain.bodies()) + " bodies (one per joint), got " +
            std::to_string(bodies.size()));

  Config cfg{std::move(chain), std::move(bodies), seed, {}, {}, {}, {}};
  if (auto s = root.get("simulation")) cfg.simulation = parse_simulation(*s, cfg.chain.dof());
  if (auto c = root.get("certify")) cfg.certify = parse_certify(*c, cfg.chain.dof());
  if (auto c = root.get("consistency")) {
    Node n = *c;
    n.object();
    cfg.consistency = ConsistencyConfig{parse_times(n.at("times_s"))};
    n.finish();
  }
  if (auto v = root.get("verify")) cfg.verify = parse_verify(*v);
  if (auto d = root.get("description")) (void)d->string();
  root.finish();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Scenario make_scenario(const Config& cfg) {
  if (!cfg.simulation) throw ConfigError("", "missing required key \"simulation\"");
  const SimulationConfig& s = *cfg.simulation;
  Scenario sc{cfg.chain, cfg.bodies, s.torque, s.disturbance, s.q0, s.qd0, s.t0, s.t_end, s.dt, s.output_every};
  try {
    sc.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError("/simulation", e.what());
  }
  return sc;
}

namespace {

std::vector<double> default_times(const Config& cfg) {
  if (cfg.simulation) {
    std::vector<double> t;
    const double a = cfg.simulation->t0;
    const double b = cfg.simulation->t_end;
    for (int k = 0; k <= 20; ++k) t.push_back(a + (b - a) * k / 20.0);
    return t;
  }
  return {0.0};
}

}  // namespace

std::vector<double> consistency_times(const Config& cfg) {
  if (cfg.consistency) return cfg.consistency->times;
  if (cfg.certify) return cfg.certify->times;
  return default_times(cfg);
}

std::vector<double> certify_times(const Config& cfg) {
  if (cfg.certify) return cfg.certify->times;
  return default_times(cfg);
}

}  // namespace genrob
