// iernn: verify | track | solve
//
// Exit codes: 0 success, 1 runtime abort or failed verification, 2 bad
// configuration or usage. Output goes to --out, else output.dir from the
// config, else $IERNN_OUT_DIR, else ./iernn-out.

#include "iernn/config.hpp"
#include "iernn/plot_script.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace iernn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAbort = 1;
constexpr int kExitConfig = 2;
constexpr const char* kOutEnv = "IERNN_OUT_DIR";

struct Options
{
  std::vector<std::string> configs;
  std::string out;
  std::string variant;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

std::mutex g_print;

void say(const std::string& line)
{
  const std::lock_guard lock(g_print);
  std::cout << line << '\n' << std::flush;
}

void warn(const std::string& line)
{
  const std::lock_guard lock(g_print);
  std::cerr << line << '\n' << std::flush;
}

RunConfig load(const Options& o, const std::string& path)
{
  RunConfig cfg = load_run_config(path);
  if (!o.variant.empty()) cfg.variants = parse_variants(o.variant);
  if (o.seed) cfg.set_seed(*o.seed);
  return cfg;
}

fs::path output_dir(const Options& o, const RunConfig& cfg)
{
  fs::path dir;
  if (!o.out.empty()) dir = o.out;
  else if (!cfg.output.dir.empty()) dir = cfg.output.dir;
  else if (const char* env = std::getenv(kOutEnv); env && *env) dir = env;
  else dir = "iernn-out";
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& p)
{
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads; returns the worst exit code.
template <typename F>
int run_parallel(std::size_t count, unsigned jobs, F fn)
{
  std::vector<int> codes(count, kExitOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        codes[i] = fn(i);
      } catch (const std::invalid_argument& e) {
        warn(std::string("config error: ") + e.what());
        codes[i] = kExitConfig;
      } catch (const DynamicsUnavailable& e) {
        warn(std::string("config error: ") + e.what());
        codes[i] = kExitConfig;
      } catch (const std::exception& e) {
        warn(std::string("error: ") + e.what());
        codes[i] = kExitAbort;
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return codes.empty() ? kExitOk : *std::max_element(codes.begin(), codes.end());
}

// ---- verify ---------------------------------------------------------------

int cmd_verify(const Options& o)
{
  RunConfig cfg;
  if (!o.configs.empty()) cfg = load(o, o.configs.front());
  const fs::path dir = output_dir(o, cfg);
  const VerifyReport report = verify_theorems(cfg.verify);

  std::ostringstream text;
  write_report_text(report, text);
  std::cout << text.str();
  {
    auto os = open_out(dir / "verify_report.txt");
    os << text.str();
  }
  {
    auto os = open_out(dir / "verify_summary.json");
    write_report_json(report, os);
  }
  say(std::string("verify: ") + (report.all_passed() ? "all cases passed" : "FAILED") +
      " (report in " + dir.string() + ")");
  return report.all_passed() ? kExitOk : kExitAbort;
}

// ---- track ----------------------------------------------------------------

struct TrackJob
{
  const RunConfig* cfg;
  fs::path dir;
  Variant variant;
};

struct TrackResult
{
  bool done = false;
  double max_rms = 0.0;
};

int run_track_job(const TrackJob& job, TrackResult& result)
{
  TrackingConfig tc = *job.cfg->track;
  tc.solver.variant = job.variant;
  for (const auto& w : tc.solver.validate()) warn("warning: " + w);
  const std::string tag = job.cfg->name + "_" + variant_tag(job.variant);
  const fs::path csv = job.dir / (tag + ".csv");

  TrajectoryLog log;
  int code = kExitOk;
  try {
    log = run_tracking(tc);
  } catch (const RunAborted& e) {
    warn(tag + ": aborted: " + e.what());
    log = e.partial();
    code = kExitAbort;
  }
  {
    auto os = open_out(csv);
    write_log_csv(log, os);
  }
  if (code != kExitOk || log.rows.empty()) {
    warn(tag + ": partial log (" + std::to_string(log.rows.size()) + " rows) in " + csv.string());
    return kExitAbort;
  }
  const ErrorMetrics em = compute_error_metrics(log, effective_path(tc));
  result.done = true;
  result.max_rms = em.max_rms;
  say(tag + ": max_rms=" + fmt(em.max_rms) + " m, final_rms=" + fmt(em.rms.back()) +
      " m, joint_drift=" + fmt(em.joint_drift) + " rad -> " + csv.string());
  return kExitOk;
}

int cmd_track(const Options& o)
{
  std::vector<RunConfig> cfgs;
  for (const auto& path : o.configs) {
    cfgs.push_back(load(o, path));
    if (!cfgs.back().track) throw ConfigError(path + ": track: section required by 'track'");
  }
  std::vector<TrackJob> jobs;
  for (const auto& cfg : cfgs) {
    const fs::path dir = output_dir(o, cfg);
    {
      auto os = open_out(dir / (cfg.name + "_path.csv"));
      const TrackingConfig& tc = *cfg.track;
      write_path_csv(effective_path(tc), static_cast<int>(step_count(tc.duration, 0.01)) + 1, os);
    }
    if (cfg.output.plot_script) {
      std::vector<PlotRun> runs;
      for (Variant v : cfg.variants) {
        runs.push_back({std::string(v == Variant::ie_rnn ? "IE-RNN" : "Z-RNN"),
                        cfg.name + "_" + variant_tag(v) + ".csv"});
      }
      auto os = open_out(dir / (cfg.name + "_plot.py"));
      write_plot_script(runs, cfg.name, os);
    }
    for (Variant v : cfg.variants) jobs.push_back({&cfg, dir, v});
  }

  std::vector<TrackResult> results(jobs.size());
  const int code =
      run_parallel(jobs.size(), o.jobs, [&](std::size_t i) { return run_track_job(jobs[i], results[i]); });

  for (std::size_t i = 0; i + 1 < jobs.size(); ++i) {
    const auto& a = jobs[i];
    const auto& b = jobs[i + 1];
    if (a.cfg == b.cfg && a.variant == Variant::ie_rnn && b.variant == Variant::z_rnn &&
        results[i].done && results[i + 1].done) {
      say(a.cfg->name + ": max_rms ratio z/ie = " +
          fmt(results[i + 1].max_rms / results[i].max_rms));
    }
  }
  return code;
}

// ---- solve ----------------------------------------------------------------

int run_solve(const RunConfig& cfg, const fs::path& dir, Variant variant)
{
  const SolveConfig& sc = *cfg.solve;
  NeuralConfig nc = cfg.solver;
  nc.variant = variant;
  for (const auto& w : nc.validate()) warn("warning: " + w);
  const AugmentedSystem aug = assemble_augmented(sc.qp());
  const std::string tag = cfg.name + "_" + variant_tag(variant);

  Vec y0;
  switch (sc.start) {
    case SolveConfig::Start::given: y0 = sc.y0; break;
    case SolveConfig::Start::solution: y0 = theoretical_solution(aug, 0.0).stacked(); break;
    case SolveConfig::Start::random: {
      y0 = theoretical_solution(aug, 0.0).stacked();
      std::mt19937_64 rng(sc.seed);
      std::uniform_real_distribution<double> u(-sc.start_spread, sc.start_spread);
      for (Eigen::Index i = 0; i < y0.size(); ++i) y0(i) += u(rng);
      break;
    }
  }

  std::vector<TrajectorySample> samples;
  int code = kExitOk;
  try {
    samples = solve_trajectory(aug, y0, nc, cfg.noise, sc.duration, sc.sample_every);
  } catch (const DivergenceError& e) {
    warn(tag + ": aborted: " + e.what());
    samples.push_back(e.last_finite());
    code = kExitAbort;
  }

  const int dim = aug.dim();
  const fs::path csv = dir / (tag + ".csv");
  auto os = open_out(csv);
  os << "t";
  for (int i = 1; i <= dim; ++i) os << ",y_" << i;
  for (int i = 1; i <= dim; ++i) os << ",ystar_" << i;
  os << ",eps_norm,oracle_gap\n";
  os.precision(17);
  double gap = 0.0, eps = 0.0;
  for (const auto& s : samples) {
    const Vec ystar = theoretical_solution(aug, s.t).stacked();
    gap = (s.y - ystar).norm();
    eps = s.eps.norm();
    os << s.t;
    for (int i = 0; i < dim; ++i) os << ',' << s.y(i);
    for (int i = 0; i < dim; ++i) os << ',' << ystar(i);
    os << ',' << eps << ',' << gap << '\n';
  }
  if (code == kExitOk) {
    const Eigen::IOFormat compact(6, Eigen::DontAlignCols, " ", " ", "", "", "[", "]");
    std::ostringstream y;
    y << samples.back().y.transpose().format(compact);
    say(tag + ": y(T)=" + y.str() + ", |eps(T)|=" + fmt(eps) + ", |y(T)-y*(T)|=" + fmt(gap) +
        " -> " + csv.string());
  }
  return code;
}

int cmd_solve(const Options& o)
{
  const RunConfig cfg = load(o, o.configs.front());
  if (!cfg.solve) throw ConfigError(o.configs.front() + ": solve: section required by 'solve'");
  const fs::path dir = output_dir(o, cfg);
  return run_parallel(cfg.variants.size(), o.jobs,
                      [&](std::size_t i) { return run_solve(cfg, dir, cfg.variants[i]); });
}

void add_common(CLI::App* cmd, Options& o, bool config_required, bool many_configs)
{
  auto* c = cmd->add_option("--config", o.configs, "JSON run configuration");
  if (config_required) c->required();
  if (!many_configs) c->expected(1);
  cmd->add_option("--out", o.out, std::string("output directory (default: $") + kOutEnv + ")");
  cmd->add_option("--variant", o.variant, "solver variant: ie, z or both")
      ->check(CLI::IsMember({"ie", "z", "both"}));
  cmd->add_option("--seed", o.seed, "override the run seed");
  cmd->add_option("--jobs", o.jobs, "independent runs executed concurrently")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Time-varying QP solving with integration-enhanced recurrent networks"};
  app.require_subcommand(1);
  Options o;
  auto* verify = app.add_subcommand("verify", "check residual dynamics against closed forms");
  auto* track = app.add_subcommand("track", "closed-loop manipulator tracking (one or more configs)");
  auto* solve = app.add_subcommand("solve", "solve a time-varying QP given by expressions");
  add_common(verify, o, false, false);
  add_common(track, o, true, true);
  add_common(solve, o, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*verify) return cmd_verify(o);
    if (*track) return cmd_track(o);
    return cmd_solve(o);
  } catch (const std::invalid_argument& e) {  // ConfigError, DimensionError
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DynamicsUnavailable& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAbort;
  }
}
