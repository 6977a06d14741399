// Acceptance suite. Each criterion prints one line:
//   PASS <id>: <measurements>
//   FAIL <id>: <measurements>
// Run all criteria, or one by passing its id. Exit status is 0 only when every
// selected criterion passes.

#include "iernn/config.hpp"
#include "iernn/harness.hpp"
#include "iernn/integrator.hpp"
#include "iernn/neural.hpp"
#include "iernn/theorems.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace iernn;

namespace {

// Tolerances and time budgets.
constexpr double kClosedFormRelTol = 1e-5;
constexpr double kClosedFormBudget = 1.0;  // s
constexpr double kConstantNoiseLimit = 1e-4;
constexpr double kConstantNoiseBy = 1.0;  // s
constexpr double kFloorRatio = 10.0;
constexpr double kNoiseBudget = 5.0;  // s
constexpr double kRampRelTol = 0.05;
constexpr double kShadowTol = 1e-4;
constexpr double kShadowFrom = 0.05;   // s
constexpr double kShadowBudget = 30.0;  // s per run
constexpr double kRatioMin = 5.0;
constexpr double kScenarioBudget = 60.0;  // s per scenario
constexpr double kDriftTol = 0.01;        // rad
constexpr double kJacobianTol = 1e-6;
constexpr double kPowerBalanceTol = 1e-4;
constexpr double kGridTol = 1e-6;
constexpr double kMinOrder = 3.5;

const std::string kPresets = std::string(IERNN_SOURCE_DIR) + "/presets/";

struct Outcome
{
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok) { passed = passed && ok; }
  template <typename T>
  Outcome& operator<<(const T& v)
  {
    detail << v;
    return *this;
  }
};

class Stopwatch
{
public:
  double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

KktProvider identity_provider(int dim)
{
  return [dim](double) {
    KktSnapshot k;
    k.A = Mat::Identity(dim, dim);
    k.Z = Vec::Zero(dim);
    k.dA = Mat::Zero(dim, dim);
    k.dZ = Vec::Zero(dim);
    return k;
  };
}

NeuralConfig gains(double nu1, double nu2, Variant v, ActivationKind act)
{
  NeuralConfig c;
  c.nu1 = nu1;
  c.nu2 = nu2;
  c.variant = v;
  c.activation.kind = act;
  return c;
}

double tail_mean_norm(const std::vector<TrajectorySample>& s, double from)
{
  double sum = 0.0;
  long count = 0;
  for (const auto& x : s) {
    if (x.t >= from - 1e-9) {
      sum += x.eps.norm();
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

TrackingConfig preset_track(const std::string& file, Variant v, bool noise_free)
{
  TrackingConfig tc = *load_run_config(kPresets + file).track;
  tc.solver.variant = v;
  if (noise_free) tc.noise = NoiseModel::none();
  return tc;
}

const char* tag(Variant v) { return v == Variant::ie_rnn ? "ie" : "z"; }

// ---------------------------------------------------------------------------

Outcome closed_forms()
{
  Outcome o;
  const Stopwatch clock;
  for (auto [nu1, nu2] : {std::pair{3.0, 2.0}, {2.0, 1.0}, {2.0, 4.0}}) {
    const auto s = solve_kkt_trajectory(identity_provider(1), Vec::Ones(1),
                                        gains(nu1, nu2, Variant::ie_rnn, ActivationKind::linear),
                                        NoiseModel::none(), 2.0, 1);
    double diff = 0.0, peak = 0.0;
    for (const auto& x : s) {
      const double ref = oracle::scalar_residual(nu1, nu2, 1.0, x.t);
      diff = std::max(diff, std::abs(x.eps(0) - ref));
      peak = std::max(peak, std::abs(ref));
    }
    const double rel = diff / peak;
    o.require(rel <= kClosedFormRelTol);
    o << "(" << nu1 << "," << nu2 << ") rel " << sci(rel) << "; ";
  }
  const double t = clock.seconds();
  o.require(t < kClosedFormBudget);
  o << "runtime " << sci(t) << " s";
  return o;
}

Outcome constant_noise()
{
  Outcome o;
  const Stopwatch clock;
  // Norm-10 disturbances; the linear response scales with the amplitude, so
  // smaller norms are covered.
  const std::vector<Vec> deltas = {Vec::Constant(1, 10.0), Vec::Constant(1, -10.0),
                                   (Vec(3) << 6.0, -6.0, 5.2915026221291814).finished()};
  double worst_ratio = INFINITY;
  for (auto act : {ActivationKind::linear, ActivationKind::power_sigmoid}) {
    double worst_ie_at = 0.0;
    for (const Vec& d : deltas) {
      const int dim = static_cast<int>(d.size());
      const auto ie = solve_kkt_trajectory(identity_provider(dim), Vec::Zero(dim),
                                           gains(500, 2500, Variant::ie_rnn, act),
                                           NoiseModel::constant(d), 8.0, 100);
      const auto z = solve_kkt_trajectory(identity_provider(dim), Vec::Zero(dim),
                                          gains(500, 2500, Variant::z_rnn, act),
                                          NoiseModel::constant(d), 8.0, 100);
      for (const auto& x : ie) {
        if (x.t >= kConstantNoiseBy - 1e-9) worst_ie_at = std::max(worst_ie_at, x.eps.norm());
      }
      const double ie_floor = tail_mean_norm(ie, 6.0);
      const double z_floor = tail_mean_norm(z, 6.0);
      worst_ratio = std::min(worst_ratio, z_floor / std::max(ie_floor, 1e-300));
      o.require(z_floor > kFloorRatio * ie_floor && z_floor > 0.0);
    }
    o.require(worst_ie_at < kConstantNoiseLimit);
    o << (act == ActivationKind::linear ? "linear" : "power-sigmoid") << " max IE |eps| for t >= "
      << kConstantNoiseBy << " s " << sci(worst_ie_at) << " (limit " << sci(kConstantNoiseLimit)
      << "); ";
  }
  const double t = clock.seconds();
  o.require(t < kNoiseBudget);
  o << "min Z/IE floor ratio " << sci(worst_ratio) << "; runtime " << sci(t) << " s";
  return o;
}

Outcome ramp_noise()
{
  Outcome o;
  const Stopwatch clock;
  const Vec slope = (Vec(3) << 5.0, -3.0, 1.5).finished();
  double worst = 0.0;
  for (auto act : {ActivationKind::linear, ActivationKind::power_sigmoid}) {
    const auto s = solve_kkt_trajectory(identity_provider(3), Vec::Zero(3),
                                        gains(500, 2500, Variant::ie_rnn, act),
                                        NoiseModel::ramp(slope), 8.0, 10);
    Vec sum = Vec::Zero(3);
    long count = 0;
    for (const auto& x : s) {
      if (x.t >= 6.0 - 1e-9) {
        sum += x.eps;
        ++count;
      }
    }
    const Vec mean = sum / static_cast<double>(count);
    for (int i = 0; i < 3; ++i) {
      const double expected = slope(i) / 2500.0;
      const double rel = std::abs(mean(i) - expected) / std::abs(expected);
      worst = std::max(worst, rel);
      o.require(rel <= kRampRelTol);
    }
    if (act == ActivationKind::linear) o << "slope 5 -> " << sci(mean(0)) << " (0.002); ";
  }
  const double t = clock.seconds();
  o.require(t < kNoiseBudget);
  o << "max relative deviation " << sci(worst) << "; runtime " << sci(t) << " s";
  return o;
}

oracle::PlanarArm arm_of(const SerialChain& chain)
{
  const auto& dyn = *chain.dynamics();
  oracle::PlanarArm arm;
  for (const auto& r : chain.rows()) arm.lengths.push_back(r.a);
  arm.masses = dyn.masses;
  arm.coms = dyn.com_offsets;
  arm.inertias = dyn.inertias;
  arm.gravity = dyn.gravity;
  return arm;
}

Outcome oracle_shadowing()
{
  Outcome o;
  for (const char* file : {"circle-rm.json", "starfish-rm.json", "butterfly-ht.json"}) {
    for (Variant v : {Variant::ie_rnn, Variant::z_rnn}) {
      const Stopwatch clock;
      const TrackingConfig tc = preset_track(file, v, true);
      const TrajectoryLog log = run_tracking(tc);
      const PathSpec path = effective_path(tc);
      const bool hybrid = tc.scheme == Scheme::hybrid_torque;
      double worst = 0.0;
      for (const auto& row : log.rows) {
        if (row.t < kShadowFrom - 1e-9) continue;
        const Vec ref =
            hybrid ? oracle::hybrid_torque_solution(
                         tc.chain, arm_of(tc.chain), path,
                         {tc.gains.mu, tc.gains.alpha, tc.gains.beta, tc.gains.xi1, tc.gains.xi2},
                         tc.theta0, row.t, row.theta, row.dtheta)
                   : oracle::repetitive_motion_solution(tc.chain, path, tc.gains.kappa,
                                                        tc.gains.feedback_gain, tc.theta0, row.t,
                                                        row.theta);
        worst = std::max(worst, (row.y - ref).norm());
      }
      const double t = clock.seconds();
      o.require(worst <= kShadowTol && t < kShadowBudget);
      o << file << "/" << tag(v) << " " << sci(worst) << " (" << sci(t) << " s); ";
    }
  }
  return o;
}

double quarter_mean(const std::vector<double>& rms, int quarter)
{
  const std::size_t q = rms.size() / 4;
  const std::size_t begin = quarter == 0 ? 0 : rms.size() - q;
  double sum = 0.0;
  for (std::size_t i = begin; i < begin + q; ++i) sum += rms[i];
  return sum / static_cast<double>(q);
}

Outcome comparative_tracking()
{
  Outcome o;
  for (const char* file : {"starfish-rm.json", "butterfly-ht.json"}) {
    const Stopwatch clock;
    ErrorMetrics m[2];
    for (Variant v : {Variant::ie_rnn, Variant::z_rnn}) {
      const TrackingConfig tc = preset_track(file, v, false);
      m[v == Variant::z_rnn] = compute_error_metrics(run_tracking(tc), effective_path(tc));
    }
    const double ratio = m[1].max_rms / m[0].max_rms;
    const double ie_first = quarter_mean(m[0].rms, 0), ie_last = quarter_mean(m[0].rms, 3);
    const double z_first = quarter_mean(m[1].rms, 0), z_last = quarter_mean(m[1].rms, 3);
    const double t = clock.seconds();
    o.require(ratio >= kRatioMin && ie_last <= ie_first && z_last >= z_first &&
              t < kScenarioBudget);
    o << file << " ratio " << sci(ratio) << ", IE quarters " << sci(ie_first) << " -> "
      << sci(ie_last) << ", Z quarters " << sci(z_first) << " -> " << sci(z_last) << " ("
      << sci(t) << " s); ";
  }
  return o;
}

Outcome joint_drift()
{
  Outcome o;
  for (const char* file : {"circle-rm.json", "starfish-rm.json"}) {
    for (Variant v : {Variant::ie_rnn, Variant::z_rnn}) {
      const TrackingConfig tc = preset_track(file, v, true);
      const double drift = compute_error_metrics(run_tracking(tc), effective_path(tc)).joint_drift;
      o.require(drift <= kDriftTol);
      o << file << "/" << tag(v) << " " << sci(drift) << " rad; ";
    }
  }
  return o;
}

Outcome kinematics_oracles()
{
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);

  double jac = 0.0;
  for (const auto& chain : {presets::planar_three_link(), presets::spatial_6r()}) {
    for (int k = 0; k < 100; ++k) {
      Vec th(chain.n_joints());
      for (auto& x : th) x = angle(rng);
      jac = std::max(jac, (jacobian(chain, th) - oracle::fd_jacobian(chain, th)).cwiseAbs().maxCoeff());
    }
  }
  o.require(jac <= kJacobianTol);
  o << "Jacobian vs FD " << sci(jac) << "; ";

  // Free swing: with zero torque the mechanical energy must stay constant.
  const auto c = presets::planar_three_link();
  const auto arm = arm_of(c);
  const int n = 3;
  const auto f = [&](double, const Vec& s) {
    const auto d = dynamics_terms(c, JointState{s.head(n), s.tail(n), Vec::Zero(n)});
    Vec ds(2 * n);
    ds.head(n) = s.tail(n);
    ds.tail(n) = d.inertia.ldlt().solve(-(d.coriolis_centrifugal + d.gravity_vec));
    return ds;
  };
  Vec s(2 * n);
  s << 0.3, -0.5, 0.9, 0.0, 1.0, -1.0;
  const double e0 = oracle::arm_energy(arm, s.head(n), s.tail(n));
  double worst = 0.0, ke_max = 0.0;
  for (int k = 0; k < 1000; ++k) {
    s = integrate_step(IntegratorKind::rk4, f, k * 1e-3, s, 1e-3);
    const double e = oracle::arm_energy(arm, s.head(n), s.tail(n));
    ke_max = std::max(ke_max, e - potential_energy(c, s.head(n)));
    worst = std::max(worst, std::abs(e - e0));
  }
  const double balance = worst / ke_max;
  o.require(balance <= kPowerBalanceTol);
  o << "power balance " << sci(balance) << "; ";

  // Planar 3-link scheme QP against a nullspace grid search.
  const TrackingConfig tc = preset_track("circle-rm.json", Variant::ie_rnn, true);
  const PathSpec path = effective_path(tc);
  double grid = 0.0;
  for (int k = 0; k < 5; ++k) {
    Vec th = tc.theta0;
    for (auto& x : th) x += 0.3 * angle(rng) / std::numbers::pi;
    auto feed = std::make_shared<JointState>(JointState::at_rest(th));
    const auto qp = build_repetitive_motion_qp(
        {tc.gains.kappa, tc.gains.feedback_gain, tc.theta0, path, tc.chain}, feed);
    const double t = 1.6 * k;
    const Vec x = theoretical_solution(assemble_augmented(qp), t).x;
    const Vec g = oracle::nullspace_grid_minimize(qp.sample_Q(t), qp.sample_P(t), qp.sample_J(t),
                                                  qp.sample_B(t));
    grid = std::max(grid, (x - g).norm());
  }
  o.require(grid <= kGridTol);
  o << "QP vs grid " << sci(grid);
  return o;
}

Outcome determinism_order()
{
  Outcome o;
  bool identical = true;
  for (const char* file : {"circle-rm.json", "butterfly-ht.json"}) {
    TrackingConfig tc = preset_track(file, Variant::z_rnn, false);
    tc.duration = 1.0;
    tc.initial_perturbation = 1e-3;
    tc.rng_seed = 7;
    std::ostringstream a, b;
    write_log_csv(run_tracking(tc), a);
    write_log_csv(run_tracking(tc), b);
    identical = identical && a.str() == b.str() && !a.str().empty();
  }
  o.require(identical);
  o << (identical ? "logs bit-identical" : "logs differ") << "; rk4 orders";

  double prev = 0.0;
  for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
    NeuralConfig cfg = gains(3.0, 2.0, Variant::ie_rnn, ActivationKind::linear);
    cfg.dt = dt;
    const auto s = solve_kkt_trajectory(identity_provider(1), Vec::Ones(1), cfg,
                                        NoiseModel::none(), 2.0, step_count(2.0, dt));
    const double err = std::abs(s.back().eps(0) - oracle::scalar_residual(3.0, 2.0, 1.0, 2.0));
    if (prev > 0.0) {
      const double order = std::log2(prev / err);
      o.require(order >= kMinOrder);
      o << " " << sci(order);
    }
    prev = err;
  }
  return o;
}

struct Criterion
{
  const char* id;
  std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria = {
    {"closed_forms", closed_forms},
    {"constant_noise", constant_noise},
    {"ramp_noise", ramp_noise},
    {"oracle_shadowing", oracle_shadowing},
    {"comparative_tracking", comparative_tracking},
    {"joint_drift", joint_drift},
    {"kinematics_oracles", kinematics_oracles},
    {"determinism_order", determinism_order},
};

}  // namespace

int main(int argc, char** argv)
{
  const std::string only = argc > 1 ? argv[1] : "";
  if (only == "--list") {
    for (const auto& c : kCriteria) std::cout << c.id << '\n';
    return 0;
  }
  bool all = true, matched = false;
  for (const auto& c : kCriteria) {
    if (!only.empty() && only != c.id) continue;
    matched = true;
    bool ok = false;
    std::string detail;
    try {
      Outcome out = c.run();
      ok = out.passed;
      detail = out.detail.str();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS " : "FAIL ") << c.id << ": " << detail << std::endl;
    all = all && ok;
  }
  if (!matched) {
    std::cerr << "unknown criterion '" << only << "'; use --list\n";
    return 2;
  }
  return all ? 0 : 1;
}
