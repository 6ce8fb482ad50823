#include "lfc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lfc/error.hpp"

namespace lfc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ValidationError(path + ": " + what); }

// Field-by-field reader that remembers which keys were consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string path(const std::string& key) const { return path_ + "." + key; }

  template <class T>
  void read(const std::string& key, T& out, bool required = false) {
    if (!j_.contains(key)) {
      if (required) fail(path(key), "missing required field");
      return;
    }
    seen_.insert(key);
    out = convert<T>(j_.at(key), path(key));
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(j_.at(key), path(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.contains(it.key())) fail(path(it.key()), "unknown field");
  }

  template <class T>
  static T convert(const json& v, const std::string& where) {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) fail(where, "expected a number");
      return v.get<double>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(where, "expected true or false");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) fail(where, "expected an integer");
      return v.get<int>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) fail(where, "expected a nonnegative integer");
      return v.get<std::uint64_t>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(where, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) fail(where, "expected an array of numbers");
      std::vector<double> out;
      for (std::size_t k = 0; k < v.size(); ++k) out.push_back(convert<double>(v[k], where + "[" + std::to_string(k) + "]"));
      return out;
    } else if constexpr (std::is_same_v<T, std::vector<std::vector<double>>>) {
      if (!v.is_array()) fail(where, "expected an array of arrays");
      std::vector<std::vector<double>> out;
      for (std::size_t k = 0; k < v.size(); ++k)
        out.push_back(convert<std::vector<double>>(v[k], where + "[" + std::to_string(k) + "]"));
      return out;
    } else {
      static_assert(sizeof(T) == 0, "unsupported field type");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class Enum, class Parse>
void read_enum(Section& s, const std::string& key, Enum& out, Parse parse) {
  std::string text;
  if (!s.has(key)) return;
  s.read(key, text);
  try {
    out = parse(text);
  } catch (const ValidationError& e) {
    fail(s.path(key), e.what());
  }
}

int parse_agent(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size() || v < 1) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(where, "expected a 1-based agent number, got '" + text + "'");
  }
}

SinusoidCoefficients read_sinusoid(const json& j, const std::string& where) {
  Section s(j, where);
  SinusoidCoefficients c;
  s.read("offset", c.offset, true);
  s.read("amplitude", c.amplitude, true);
  s.read("frequency", c.frequency, true);
  s.finish();
  return c;
}

std::array<double, 2> read_range(Section& s, const std::string& key, std::array<double, 2> fallback) {
  std::vector<double> v;
  s.read(key, v);
  if (v.empty()) return fallback;
  if (v.size() != 2 || !(v[0] <= v[1])) fail(s.path(key), "expected [low, high] with low <= high");
  return {v[0], v[1]};
}

json sinusoid_json(const SinusoidCoefficients& c) {
  return json{{"offset", c.offset}, {"amplitude", c.amplitude}, {"frequency", c.frequency}};
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  Section top(root, "config");
  top.read("name", c.name);

  if (!top.has("plant")) fail("config.plant", "missing required section");
  {
    Section s = top.child("plant");
    s.read("a", c.plant.a, true);
    s.read("b", c.plant.b, true);
    s.finish();
  }
  if (!top.has("topology")) fail("config.topology", "missing required section");
  {
    Section s = top.child("topology");
    s.read("adjacency", c.topology.adjacency, true);
    s.read("pinning", c.topology.pinning, true);
    read_enum(s, "delay_symmetry", c.topology.symmetry, delay_symmetry_from_string);
    s.finish();
  }
  if (!top.has("gains")) fail("config.gains", "missing required section");
  {
    Section s = top.child("gains");
    if (s.has("pin")) {
      const json& pin = s.raw("pin");
      if (!pin.is_object()) fail(s.path("pin"), "expected an object keyed by agent number");
      for (auto it = pin.begin(); it != pin.end(); ++it) {
        const std::string where = s.path("pin") + "." + it.key();
        c.gains.pin.emplace_back(parse_agent(it.key(), where), Section::convert<std::vector<double>>(it.value(), where));
      }
    }
    if (s.has("follower")) {
      const json& fol = s.raw("follower");
      if (!fol.is_object()) fail(s.path("follower"), "expected an object keyed by \"i,j\"");
      for (auto it = fol.begin(); it != fol.end(); ++it) {
        const std::string where = s.path("follower") + "." + it.key();
        const auto comma = it.key().find(',');
        if (comma == std::string::npos) fail(where, "expected a key of the form \"i,j\"");
        const int i = parse_agent(it.key().substr(0, comma), where);
        const int j = parse_agent(it.key().substr(comma + 1), where);
        c.gains.follower.push_back({{i, j}, Section::convert<std::vector<double>>(it.value(), where)});
      }
    }
    s.finish();
  }
  if (top.has("delays")) {
    Section s = top.child("delays");
    s.read("tau_max", c.delays.tau_max);
    s.read("slope_bound", c.delays.slope_bound);
    s.read("resample_interval", c.delays.resample_interval);
    s.read("seed", c.delays.seed);
    s.read("profile", c.delays.profile);
    s.finish();
    if (c.delays.profile != "random" && c.delays.profile != "constant" && c.delays.profile != "zero")
      fail("config.delays.profile", "expected random, constant or zero");
  }
  if (top.has("disturbance")) {
    Section s = top.child("disturbance");
    s.read("kind", c.disturbance.kind);
    if (s.has("coefficients")) {
      const json& arr = s.raw("coefficients");
      if (!arr.is_array()) fail(s.path("coefficients"), "expected an array");
      for (std::size_t k = 0; k < arr.size(); ++k)
        c.disturbance.coefficients.push_back(read_sinusoid(arr[k], s.path("coefficients") + "[" + std::to_string(k) + "]"));
    }
    if (s.has("ranges")) {
      Section r = s.child("ranges");
      c.disturbance.ranges.offset = read_range(r, "offset", c.disturbance.ranges.offset);
      c.disturbance.ranges.amplitude = read_range(r, "amplitude", c.disturbance.ranges.amplitude);
      c.disturbance.ranges.frequency = read_range(r, "frequency", c.disturbance.ranges.frequency);
      r.finish();
    }
    s.read("seed", c.disturbance.seed);
    s.finish();
    const auto& k = c.disturbance.kind;
    if (k != "zero" && k != "biased_sinusoid" && k != "random_sinusoid")
      fail("config.disturbance.kind", "expected zero, biased_sinusoid or random_sinusoid");
  }
  if (top.has("protocol")) {
    Section s = top.child("protocol");
    read_enum(s, "kind", c.protocol.kind, protocol_kind_from_string);
    s.read("rho", c.protocol.rho);
    s.read("t_filter", c.protocol.t_filter);
    read_enum(s, "filter_scaling", c.protocol.filter_scaling, filter_scaling_from_string);
    read_enum(s, "sliding_sign", c.protocol.sliding_sign, sliding_sign_from_string);
    s.finish();
  }
  if (top.has("integrator")) {
    Section s = top.child("integrator");
    s.read("step", c.integrator.step);
    s.read("horizon", c.integrator.horizon);
    s.finish();
  }
  if (!top.has("initial")) fail("config.initial", "missing required section");
  {
    Section s = top.child("initial");
    s.read("leader", c.initial.leader, true);
    s.read("agents", c.initial.agents, true);
    s.finish();
  }
  if (top.has("certificate")) {
    Section s = top.child("certificate");
    s.read("tau", c.certificate.tau);
    s.read("margin", c.certificate.margin);
    read_enum(s, "method", c.certificate.method, search_method_from_string);
    read_enum(s, "third_lmi", c.certificate.third_lmi, third_lmi_from_string);
    s.read("budget", c.certificate.budget);
    s.read("newton_budget", c.certificate.newton_budget);
    s.read("gap_tolerance", c.certificate.gap_tolerance);
    s.read("early_stop", c.certificate.early_stop);
    s.finish();
  }
  if (top.has("tuner")) {
    Section s = top.child("tuner");
    s.read("tau0", c.tuner.tau0);
    s.read("lower", c.tuner.lower);
    s.read("upper", c.tuner.upper);
    s.read("outer_budget", c.tuner.outer_budget);
    s.read("inner_budget", c.tuner.inner_budget);
    s.read("initial_step", c.tuner.initial_step);
    s.read("min_step", c.tuner.min_step);
    s.read("growth_cap", c.tuner.growth_cap);
    s.read("seed", c.tuner.seed);
    s.finish();
  }
  if (top.has("output")) {
    Section s = top.child("output");
    s.read("directory", c.output.directory);
    s.read("plot", c.output.plot);
    s.read("lyapunov", c.output.lyapunov);
    s.finish();
  }
  top.finish();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["plant"] = {{"a", c.plant.a}, {"b", c.plant.b}};
  j["topology"] = {{"adjacency", c.topology.adjacency}, {"pinning", c.topology.pinning}, {"delay_symmetry", to_string(c.topology.symmetry)}};
  json pin = json::object(), fol = json::object();
  for (const auto& [agent, k] : c.gains.pin) pin[std::to_string(agent)] = k;
  for (const auto& [edge, k] : c.gains.follower) fol[std::to_string(edge.first) + "," + std::to_string(edge.second)] = k;
  j["gains"] = {{"pin", pin}, {"follower", fol}};
  j["delays"] = {{"tau_max", c.delays.tau_max},
                 {"slope_bound", c.delays.slope_bound},
                 {"resample_interval", c.delays.resample_interval},
                 {"seed", c.delays.seed},
                 {"profile", c.delays.profile}};
  json coeffs = json::array();
  for (const auto& s : c.disturbance.coefficients) coeffs.push_back(sinusoid_json(s));
  const auto& r = c.disturbance.ranges;
  j["disturbance"] = {{"kind", c.disturbance.kind},
                      {"coefficients", coeffs},
                      {"ranges", {{"offset", r.offset}, {"amplitude", r.amplitude}, {"frequency", r.frequency}}},
                      {"seed", c.disturbance.seed}};
  j["protocol"] = {{"kind", to_string(c.protocol.kind)},
                   {"rho", c.protocol.rho},
                   {"t_filter", c.protocol.t_filter},
                   {"filter_scaling", to_string(c.protocol.filter_scaling)},
                   {"sliding_sign", to_string(c.protocol.sliding_sign)}};
  j["integrator"] = {{"step", c.integrator.step}, {"horizon", c.integrator.horizon}};
  j["initial"] = {{"leader", c.initial.leader}, {"agents", c.initial.agents}};
  j["certificate"] = {{"tau", c.certificate.tau},
                      {"margin", c.certificate.margin},
                      {"method", to_string(c.certificate.method)},
                      {"third_lmi", to_string(c.certificate.third_lmi)},
                      {"budget", c.certificate.budget},
                      {"newton_budget", c.certificate.newton_budget},
                      {"gap_tolerance", c.certificate.gap_tolerance},
                      {"early_stop", c.certificate.early_stop}};
  j["tuner"] = {{"tau0", c.tuner.tau0},
                {"lower", c.tuner.lower},
                {"upper", c.tuner.upper},
                {"outer_budget", c.tuner.outer_budget},
                {"inner_budget", c.tuner.inner_budget},
                {"initial_step", c.tuner.initial_step},
                {"min_step", c.tuner.min_step},
                {"growth_cap", c.tuner.growth_cap},
                {"seed", c.tuner.seed}};
  j["output"] = {{"directory", c.output.directory}, {"plot", c.output.plot}, {"lyapunov", c.output.lyapunov}};
  return j.dump(2) + "\n";
}

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows, const std::string& where) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n)
      fail(where, "adjacency must be square (row " + std::to_string(i + 1) + " has the wrong length)");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

Vector to_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }

CompanionPlant build_plant(const PlantConfig& p) {
  try {
    return CompanionPlant(p.a, p.b);
  } catch (const ValidationError& e) {
    fail("config.plant", e.what());
  }
}

DirectedTopology build_topology(const TopologyConfig& t) {
  const Matrix adj = to_matrix(t.adjacency, "config.topology.adjacency");
  if (adj.rows() == 0) fail("config.topology.adjacency", "need at least one agent");
  if (static_cast<Eigen::Index>(t.pinning.size()) != adj.rows())
    fail("config.topology.pinning", "need one pinning weight per agent");
  try {
    DirectedTopology topo(adj, to_vector(t.pinning), t.symmetry);
    if (topo.pins().empty()) fail("config.topology.pinning", "at least one agent must be pinned to the leader");
    if (!leader_globally_reachable(topo)) fail("config.topology", "some follower is not reachable from the leader");
    return topo;
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind("config.", 0) == 0) throw;
    fail("config.topology", what);
  }
}

GainSet build_gains(const ExperimentConfig& c) {
  GainSet g;
  for (const auto& [agent, k] : c.gains.pin) {
    if (g.pin.contains(agent - 1)) fail("config.gains.pin", "duplicate gain for agent " + std::to_string(agent));
    g.pin[agent - 1] = to_vector(k).transpose();
  }
  for (const auto& [edge, k] : c.gains.follower) {
    const Edge e{edge.first - 1, edge.second - 1};
    if (g.follower.contains(e))
      fail("config.gains.follower", "duplicate gain for edge " + std::to_string(edge.first) + "," + std::to_string(edge.second));
    g.follower[e] = to_vector(k).transpose();
  }
  g.rho = c.protocol.rho;
  g.t_filter = c.protocol.t_filter;
  g.filter_scaling = c.protocol.filter_scaling;
  g.sliding_sign = c.protocol.sliding_sign;
  return g;
}

DisturbanceModel build_disturbance(const DisturbanceConfig& d, int agents) {
  try {
    if (d.kind == "zero") return DisturbanceModel::zero(agents);
    if (d.kind == "biased_sinusoid") {
      if (static_cast<int>(d.coefficients.size()) != agents)
        fail("config.disturbance.coefficients", "need one coefficient triple per agent");
      return DisturbanceModel::biased_sinusoid(d.coefficients);
    }
    return DisturbanceModel::draw_biased_sinusoid(agents, d.ranges, d.seed);
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind("config.", 0) == 0) throw;
    fail("config.disturbance", what);
  }
}

}  // namespace

Experiment build_experiment(const ExperimentConfig& c) {
  CompanionPlant plant = build_plant(c.plant);
  DirectedTopology topology = build_topology(c.topology);
  GainSet gains = build_gains(c);
  try {
    validate_gains(gains, topology, plant.order());
  } catch (const ValidationError& e) {
    fail("config.gains", e.what());
  }
  const int n = plant.order();
  InitialStates init;
  if (static_cast<int>(c.initial.leader.size()) != n) fail("config.initial.leader", "expected " + std::to_string(n) + " entries");
  init.leader = to_vector(c.initial.leader);
  if (static_cast<int>(c.initial.agents.size()) != topology.agents())
    fail("config.initial.agents", "need one initial state per agent");
  for (std::size_t i = 0; i < c.initial.agents.size(); ++i) {
    if (static_cast<int>(c.initial.agents[i].size()) != n)
      fail("config.initial.agents[" + std::to_string(i) + "]", "expected " + std::to_string(n) + " entries");
    init.agents.push_back(to_vector(c.initial.agents[i]));
  }
  if (!(c.delays.tau_max > 0.0)) fail("config.delays.tau_max", "must be positive");
  if (!(c.delays.slope_bound >= 0.0 && c.delays.slope_bound <= 1.0)) fail("config.delays.slope_bound", "must lie in [0, 1]");
  if (!(c.delays.resample_interval > 0.0)) fail("config.delays.resample_interval", "must be positive");
  if (!(c.integrator.step > 0.0)) fail("config.integrator.step", "must be positive");
  if (!(c.integrator.horizon >= 0.0)) fail("config.integrator.horizon", "must be nonnegative");
  if (!(c.certificate.tau >= 0.0)) fail("config.certificate.tau", "must be nonnegative");
  if (!(c.certificate.margin > 0.0)) fail("config.certificate.margin", "must be positive");
  if (c.certificate.budget < 1 || c.certificate.newton_budget < 1) fail("config.certificate", "budgets must be at least 1");
  if (!(c.tuner.lower > 0.0)) fail("config.tuner.lower", "must be strictly positive");
  if (!(c.tuner.upper > c.tuner.lower)) fail("config.tuner.upper", "must exceed the lower bound");
  if (c.tuner.outer_budget < 1) fail("config.tuner.outer_budget", "must be at least 1");
  if (c.tuner.inner_budget < 0) fail("config.tuner.inner_budget", "must be nonnegative");
  if (!(c.tuner.tau0 > 0.0)) fail("config.tuner.tau0", "must be positive");
  DisturbanceModel dist = build_disturbance(c.disturbance, topology.agents());
  return Experiment{c, std::move(plant), std::move(topology), std::move(gains), std::move(dist), std::move(init)};
}

DelayProfiles make_profiles(const Experiment& e) {
  const auto& d = e.config.delays;
  if (d.profile == "zero") return zero_delay_profiles(e.topology);
  if (d.profile == "constant") return constant_delay_profiles(e.topology, d.tau_max * (1.0 - 1e-6));
  DelaySettings s;
  s.tau_max = d.tau_max;
  s.slope_bound = d.slope_bound;
  s.resample_interval = d.resample_interval;
  s.seed = d.seed;
  return generate_delay_profiles(e.topology, s, e.config.integrator.horizon);
}

DelayBounds certificate_bounds(const ExperimentConfig& c, double tau) {
  return DelayBounds{tau, c.delays.slope_bound, c.delays.slope_bound};
}

SearchOptions search_options(const ExperimentConfig& c) {
  SearchOptions o;
  o.method = c.certificate.method;
  o.lmi.margin = c.certificate.margin;
  o.lmi.third = c.certificate.third_lmi;
  o.budget = c.certificate.budget;
  o.newton_budget = c.certificate.newton_budget;
  o.gap_tolerance = c.certificate.gap_tolerance;
  o.early_stop = c.certificate.early_stop;
  return o;
}

TuneConfig tune_config(const Experiment& e) {
  const auto& t = e.config.tuner;
  TuneConfig c;
  c.initial = e.gains;
  c.lower = t.lower;
  c.upper = t.upper;
  c.tau0 = t.tau0;
  c.outer_budget = t.outer_budget;
  c.inner_budget = t.inner_budget;
  c.initial_step = t.initial_step;
  c.min_step = t.min_step;
  c.growth_cap = t.growth_cap;
  c.slope_pin = c.slope_follower = e.config.delays.slope_bound;
  c.search = search_options(e.config);
  c.seed = t.seed;
  return c;
}

SimTrace simulate(const Experiment& e, const DelayProfiles& profiles) {
  SimulationSetup s;
  s.plant = &e.plant;
  s.topology = &e.topology;
  s.gains = &e.gains;
  s.profiles = &profiles;
  s.disturbance = &e.disturbance;
  s.initial = e.initial;
  s.protocol = e.config.protocol.kind;
  s.step = e.config.integrator.step;
  s.horizon = e.config.integrator.horizon;
  return integrate(s);
}

}  // namespace lfc
