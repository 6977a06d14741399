#include "iernn/config.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace iernn {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& msg)
{
  throw ConfigError(key + ": " + msg);
}

std::string join(const std::string& parent, const std::string& key)
{
  return parent.empty() ? key : parent + "." + key;
}

std::string indexed(const std::string& parent, std::size_t i)
{
  return parent + "[" + std::to_string(i) + "]";
}

/// JSON object with its dotted location, for diagnostics.
class Section
{
public:
  Section(const json& j, std::string path, std::initializer_list<const char*> allowed)
  : j_(j), path_(std::move(path))
  {
    if (!j_.is_object()) {
      fail(path_.empty() ? "<root>" : path_, "expected an object");
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j_.items()) {
      if (!ok.count(item.key())) {
        fail(join(path_, item.key()), "unknown key");
      }
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& at(const char* key) const { return j_.at(key); }
  std::string where(const char* key) const { return join(path_, key); }

  double number(const char* key, double fallback) const
  {
    return has(key) ? as_number(j_.at(key), where(key)) : fallback;
  }

  long integer(const char* key, long fallback) const
  {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(where(key), "expected an integer");
    return v.get<long>();
  }

  bool boolean(const char* key, bool fallback) const
  {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(where(key), "expected true or false");
    return v.get<bool>();
  }

  std::string text(const char* key, const std::string& fallback) const
  {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(where(key), "expected a string");
    return v.get<std::string>();
  }

  std::string required_text(const char* key) const
  {
    if (!has(key)) fail(where(key), "missing required key");
    return text(key, {});
  }

  Vec vector(const char* key) const
  {
    if (!has(key)) fail(where(key), "missing required key");
    return as_vector(j_.at(key), where(key));
  }

  static double as_number(const json& v, const std::string& where)
  {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
  }

  static Vec as_vector(const json& v, const std::string& where)
  {
    if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array of numbers");
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      out(static_cast<Eigen::Index>(i)) = as_number(v[i], indexed(where, i));
    }
    return out;
  }

private:
  const json& j_;
  std::string path_;
};

// Library validation errors are rethrown with the section they came from.
template <typename F>
auto within(const std::string& where, F&& f)
{
  try {
    return f();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind(where, 0) == 0) throw;
    throw ConfigError(where + ": " + msg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const DynamicsUnavailable& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

Variant parse_variant_name(const std::string& s, const std::string& where)
{
  if (s == "ie" || s == "ie_rnn") return Variant::ie_rnn;
  if (s == "z" || s == "z_rnn") return Variant::z_rnn;
  fail(where, "unknown variant '" + s + "' (expected ie or z)");
}

NeuralConfig parse_solver(const json& j)
{
  const Section s(j, "solver", {"nu1", "nu2", "activation", "power_n", "dt", "integrator"});
  NeuralConfig cfg;
  cfg.nu1 = s.number("nu1", cfg.nu1);
  cfg.nu2 = s.number("nu2", cfg.nu2);
  cfg.dt = s.number("dt", cfg.dt);
  const std::string act = s.text("activation", "power_sigmoid");
  if (act == "power_sigmoid") cfg.activation.kind = ActivationKind::power_sigmoid;
  else if (act == "linear") cfg.activation.kind = ActivationKind::linear;
  else fail(s.where("activation"), "expected power_sigmoid or linear");
  cfg.activation.n_exponent = static_cast<int>(s.integer("power_n", 3));
  const std::string integ = s.text("integrator", "rk4");
  if (integ == "rk4") cfg.integrator = IntegratorKind::rk4;
  else if (integ == "euler") cfg.integrator = IntegratorKind::euler;
  else fail(s.where("integrator"), "expected rk4 or euler");
  within("solver", [&] { return cfg.validate(); });
  return cfg;
}

NoiseModel parse_noise(const json& j, double default_period)
{
  if (j.is_null()) return NoiseModel::none();
  const Section s(j, "noise",
                  {"kind", "value", "slope", "amplitudes", "frequencies", "phases", "period",
                   "literal_seventh"});
  const std::string kind = s.required_text("kind");
  NoiseModel out;
  if (kind == "none") {
    out = NoiseModel::none();
  } else if (kind == "constant") {
    out = NoiseModel::constant(s.vector("value"));
  } else if (kind == "ramp") {
    out = NoiseModel::ramp(s.vector("slope"));
  } else if (kind == "sinusoid") {
    const Vec amp = s.vector("amplitudes");
    const Vec freq = s.vector("frequencies");
    const Vec phase = s.has("phases") ? s.vector("phases") : Vec(Vec::Zero(amp.size()));
    out = within("noise", [&] { return NoiseModel::sinusoid(amp, freq, phase); });
  } else if (kind == "paper_sinusoid") {
    const double period = s.number("period", default_period);
    if (!(period > 0.0)) fail(s.where("period"), "must be > 0 s");
    out = NoiseModel::paper_sinusoid(period, s.boolean("literal_seventh", false));
  } else {
    fail(s.where("kind"), "unknown noise kind '" + kind +
                              "' (expected none, constant, ramp, sinusoid, paper_sinusoid)");
  }
  within("noise", [&] {
    out.validate();
    return 0;
  });
  return out;
}

SerialChain parse_chain_ref(const json& j, const std::string& base_dir)
{
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (auto chain = presets::by_name(name)) return *chain;
    fail("track.chain", "unknown chain preset '" + name + "' (expected planar2, planar3, spatial6r)");
  }
  const Section s(j, "track.chain", {"file"});
  std::filesystem::path p = s.required_text("file");
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  return within("track.chain.file", [&] { return load_chain_file(p.string()); });
}

PathSpec parse_path(const json& j, int task_dim, bool& anchor)
{
  const Section s(j, "track.path",
                  {"kind", "center", "scale", "period", "e1", "e2", "timing", "anchor",
                   "starfish_r0", "starfish_r1"});
  PathParams p;
  p.kind = within(s.where("kind"), [&] { return parse_path_kind(s.text("kind", "circle")); });
  p.timing = within(s.where("timing"),
                    [&] { return parse_timing(s.text("timing", "smoothstart")); });
  p.center = s.has("center") ? s.vector("center") : Vec(Vec::Zero(task_dim));
  p.scale = s.number("scale", p.scale);
  p.period = s.number("period", p.period);
  if (s.has("e1")) p.e1 = s.vector("e1");
  if (s.has("e2")) p.e2 = s.vector("e2");
  p.starfish_r0 = s.number("starfish_r0", p.starfish_r0);
  p.starfish_r1 = s.number("starfish_r1", p.starfish_r1);
  anchor = s.boolean("anchor", true);
  return within("track.path", [&] { return PathSpec(std::move(p)); });
}

SchemeGains parse_gains(const json& j)
{
  const Section s(j, "track.gains",
                  {"kappa", "feedback_gain", "mu", "alpha", "beta", "xi1", "xi2"});
  SchemeGains g;
  g.kappa = s.number("kappa", g.kappa);
  g.feedback_gain = s.number("feedback_gain", g.feedback_gain);
  g.mu = s.number("mu", g.mu);
  g.alpha = s.number("alpha", g.alpha);
  g.beta = s.number("beta", g.beta);
  g.xi1 = s.number("xi1", g.xi1);
  g.xi2 = s.number("xi2", g.xi2);
  return g;
}

TrackingConfig parse_track(const json& j, const NeuralConfig& solver, const NoiseModel& noise,
                           std::uint64_t seed, const std::string& base_dir)
{
  const Section s(j, "track",
                  {"scheme", "chain", "theta0", "path", "gains", "duration", "log_stride",
                   "initial_perturbation"});
  TrackingConfig cfg;
  cfg.solver = solver;
  cfg.noise = noise;
  cfg.rng_seed = seed;
  cfg.scheme = within(s.where("scheme"),
                      [&] { return parse_scheme(s.text("scheme", "repetitive_motion")); });
  if (s.has("chain")) cfg.chain = parse_chain_ref(s.at("chain"), base_dir);
  cfg.theta0 = s.vector("theta0");
  cfg.path = parse_path(s.has("path") ? s.at("path") : json::object(), cfg.chain.task_dim(),
                        cfg.anchor_path);
  if (s.has("gains")) cfg.gains = parse_gains(s.at("gains"));
  cfg.duration = s.number("duration", cfg.duration);
  cfg.log_stride = s.integer("log_stride", cfg.log_stride);
  cfg.initial_perturbation = s.number("initial_perturbation", cfg.initial_perturbation);
  within("track", [&] {
    cfg.validate();
    return 0;
  });
  return cfg;
}

NoiseCase parse_noise_case(const json& j, const std::string& where)
{
  const Section s(j, where,
                  {"kind", "variant", "amplitude", "nu1", "nu2", "horizon", "window_start"});
  NoiseCase c;
  const std::string kind = s.text("kind", "constant");
  if (kind == "constant") c.kind = NoiseKind::constant;
  else if (kind == "ramp") c.kind = NoiseKind::ramp;
  else fail(s.where("kind"), "expected constant or ramp");
  c.variant = parse_variant_name(s.text("variant", "ie"), s.where("variant"));
  c.amplitude = s.number("amplitude", c.amplitude);
  c.nu1 = s.number("nu1", c.nu1);
  c.nu2 = s.number("nu2", c.nu2);
  c.horizon = s.number("horizon", c.horizon);
  c.window_start = s.number("window_start", c.window_start);
  return c;
}

VerifyPlan parse_verify(const json& j)
{
  const Section s(j, "verify",
                  {"gains", "noise_cases", "dt", "closed_form_horizon", "closed_form_tolerance",
                   "floor_tolerance"});
  VerifyPlan plan;
  if (s.has("gains")) {
    const json& g = s.at("gains");
    if (!g.is_array()) fail(s.where("gains"), "expected an array of [nu1, nu2] pairs");
    plan.gains.clear();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string at = indexed(s.where("gains"), i);
      const Vec pair = Section::as_vector(g[i], at);
      if (pair.size() != 2) fail(at, "expected [nu1, nu2]");
      plan.gains.emplace_back(pair(0), pair(1));
    }
  }
  if (s.has("noise_cases")) {
    const json& nc = s.at("noise_cases");
    if (!nc.is_array()) fail(s.where("noise_cases"), "expected an array");
    plan.noise_cases.clear();
    for (std::size_t i = 0; i < nc.size(); ++i) {
      plan.noise_cases.push_back(parse_noise_case(nc[i], indexed(s.where("noise_cases"), i)));
    }
  }
  plan.dt = s.number("dt", plan.dt);
  plan.closed_form_horizon = s.number("closed_form_horizon", plan.closed_form_horizon);
  plan.closed_form_tolerance = s.number("closed_form_tolerance", plan.closed_form_tolerance);
  plan.floor_tolerance = s.number("floor_tolerance", plan.floor_tolerance);
  within("verify", [&] {
    plan.validate();
    return 0;
  });
  return plan;
}

Expr parse_entry(const json& v, const std::string& where)
{
  if (v.is_number()) return Expr::constant(v.get<double>());
  if (!v.is_string()) fail(where, "expected a number or an expression string");
  try {
    return Expr::parse(v.get<std::string>());
  } catch (const ExprError& e) {
    fail(where, e.what());
  }
}

std::vector<Expr> parse_expr_vector(const Section& s, const char* key, int size)
{
  if (!s.has(key)) fail(s.where(key), "missing required key");
  const json& v = s.at(key);
  if (!v.is_array() || static_cast<int>(v.size()) != size) {
    fail(s.where(key), "expected an array of " + std::to_string(size) + " entries");
  }
  std::vector<Expr> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(parse_entry(v[i], indexed(s.where(key), i)));
  }
  return out;
}

std::vector<std::vector<Expr>> parse_expr_matrix(const Section& s, const char* key, int rows,
                                                 int cols)
{
  if (!s.has(key)) fail(s.where(key), "missing required key");
  const json& v = s.at(key);
  if (!v.is_array() || static_cast<int>(v.size()) != rows) {
    fail(s.where(key), "expected " + std::to_string(rows) + " rows");
  }
  std::vector<std::vector<Expr>> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string row_at = indexed(s.where(key), i);
    if (!v[i].is_array() || static_cast<int>(v[i].size()) != cols) {
      fail(row_at, "expected a row of " + std::to_string(cols) + " entries");
    }
    std::vector<Expr> row;
    for (std::size_t k = 0; k < v[i].size(); ++k) {
      row.push_back(parse_entry(v[i][k], indexed(row_at, k)));
    }
    out.push_back(std::move(row));
  }
  return out;
}

SolveConfig parse_solve(const json& j, std::uint64_t seed)
{
  const Section s(j, "solve",
                  {"n", "m", "Q", "P", "J", "B", "duration", "sample_every", "y0", "y0_spread"});
  SolveConfig c;
  c.seed = seed;
  c.n = static_cast<int>(s.integer("n", 0));
  c.m = static_cast<int>(s.integer("m", 0));
  if (c.n < 1) fail(s.where("n"), "must be a positive integer");
  if (c.m < 1) fail(s.where("m"), "must be a positive integer");
  if (c.m > c.n) fail(s.where("m"), "must not exceed n");
  c.Q = parse_expr_matrix(s, "Q", c.n, c.n);
  c.P = parse_expr_vector(s, "P", c.n);
  c.J = parse_expr_matrix(s, "J", c.m, c.n);
  c.B = parse_expr_vector(s, "B", c.m);
  c.duration = s.number("duration", c.duration);
  c.sample_every = s.integer("sample_every", c.sample_every);
  if (!(c.duration > 0.0)) fail(s.where("duration"), "must be > 0 s");
  if (c.sample_every < 1) fail(s.where("sample_every"), "must be at least 1");
  c.start_spread = s.number("y0_spread", c.start_spread);
  if (!(c.start_spread >= 0.0)) fail(s.where("y0_spread"), "must be >= 0");
  if (s.has("y0")) {
    const json& y0 = s.at("y0");
    if (y0.is_string()) {
      const std::string mode = y0.get<std::string>();
      if (mode == "random") c.start = SolveConfig::Start::random;
      else if (mode == "solution") c.start = SolveConfig::Start::solution;
      else fail(s.where("y0"), "expected \"random\", \"solution\" or an explicit vector");
    } else {
      c.start = SolveConfig::Start::given;
      c.y0 = Section::as_vector(y0, s.where("y0"));
      if (c.y0.size() != c.n + c.m) {
        fail(s.where("y0"), "expected " + std::to_string(c.n + c.m) + " entries");
      }
    }
  }
  return c;
}

OutputConfig parse_output(const json& j)
{
  const Section s(j, "output", {"dir", "plot_script"});
  OutputConfig o;
  o.dir = s.text("dir", "");
  o.plot_script = s.boolean("plot_script", true);
  return o;
}

}  // namespace

TimeVaryingQP SolveConfig::qp() const
{
  auto matrix = [](std::vector<std::vector<Expr>> e) {
    return [e = std::move(e)](double t) {
      Mat M(e.size(), e.empty() ? 0 : e.front().size());
      for (std::size_t i = 0; i < e.size(); ++i) {
        for (std::size_t k = 0; k < e[i].size(); ++k) {
          M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = e[i][k](t);
        }
      }
      return M;
    };
  };
  auto vector = [](std::vector<Expr> e) {
    return [e = std::move(e)](double t) {
      Vec v(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) v(static_cast<Eigen::Index>(i)) = e[i](t);
      return v;
    };
  };
  TimeVaryingQP qp;
  qp.n = n;
  qp.m = m;
  qp.sample_Q = matrix(Q);
  qp.sample_P = vector(P);
  qp.sample_J = matrix(J);
  qp.sample_B = vector(B);
  return qp;
}

void RunConfig::set_seed(std::uint64_t seed)
{
  if (track) track->rng_seed = seed;
  if (solve) solve->seed = seed;
}

std::vector<Variant> parse_variants(const std::string& s)
{
  if (s == "both") return {Variant::ie_rnn, Variant::z_rnn};
  return {parse_variant_name(s, "variant")};
}

std::string variant_tag(Variant v) { return v == Variant::ie_rnn ? "ie" : "z"; }

RunConfig parse_run_config(const std::string& text, const std::string& base_dir)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<document>: invalid JSON: ") + e.what());
  }
  const Section root(doc, "",
                     {"schema_version", "name", "variant", "seed", "solver", "noise", "track",
                      "verify", "solve", "output"});
  RunConfig cfg;
  if (!root.has("schema_version")) fail("schema_version", "missing required key");
  cfg.schema_version = static_cast<int>(root.integer("schema_version", 0));
  if (cfg.schema_version != kSchemaVersion) {
    fail("schema_version", "unsupported version " + std::to_string(cfg.schema_version) +
                               " (expected " + std::to_string(kSchemaVersion) + ")");
  }
  cfg.name = root.text("name", cfg.name);
  cfg.variants = parse_variants(root.text("variant", "ie"));
  const long seed = root.integer("seed", 1);
  if (seed < 0) fail("seed", "must be non-negative");

  if (root.has("solver")) cfg.solver = parse_solver(root.at("solver"));
  const NeuralConfig& solver = cfg.solver;

  double period = 8.0;
  if (root.has("track") && root.at("track").is_object() && root.at("track").contains("path") &&
      root.at("track").at("path").is_object()) {
    const json& p = root.at("track").at("path");
    if (p.contains("period") && p.at("period").is_number()) period = p.at("period").get<double>();
  }
  if (root.has("noise")) cfg.noise = parse_noise(root.at("noise"), period);
  const NoiseModel& noise = cfg.noise;

  if (root.has("track")) {
    cfg.track = parse_track(root.at("track"), solver, noise, static_cast<std::uint64_t>(seed),
                            base_dir);
  }
  if (root.has("verify")) cfg.verify = parse_verify(root.at("verify"));
  if (root.has("solve")) {
    cfg.solve = parse_solve(root.at("solve"), static_cast<std::uint64_t>(seed));
  }
  if (root.has("output")) cfg.output = parse_output(root.at("output"));
  return cfg;
}

RunConfig load_run_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto base = std::filesystem::path(path).parent_path();
  return parse_run_config(ss.str(), base.empty() ? "." : base.string());
}

}  // namespace iernn
