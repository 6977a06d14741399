#include "iernn/harness.hpp"
#include "iernn/neural.hpp"

#include <benchmark/benchmark.h>

using namespace iernn;

namespace {

TimeVaryingQP repetitive_qp(const SerialChain& chain, const Vec& theta0, const PathSpec& path,
                            std::shared_ptr<JointState> feed)
{
  return build_repetitive_motion_qp({4.0, 10.0, theta0, path, chain}, std::move(feed));
}

struct Planar3
{
  SerialChain chain = presets::planar_three_link();
  Vec theta0 = (Vec(3) << 0.4, 0.8, 0.9).finished();
  std::shared_ptr<JointState> feed = std::make_shared<JointState>(JointState::at_rest(theta0));
  AugmentedSystem aug =
      assemble_augmented(repetitive_qp(chain, theta0, default_path().anchored_at(
                                                          forward_kinematics(chain, theta0)),
                                       feed));
};

void BM_TheoreticalSolution(benchmark::State& state)
{
  const Planar3 p;
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(theoretical_solution(p.aug, t));
    t += 1e-4;
  }
}
BENCHMARK(BM_TheoreticalSolution);

void BM_NetworkRate(benchmark::State& state)
{
  const Planar3 p;
  const KktSnapshot kkt = KktSnapshot::sample(p.aug, 0.5);
  const Vec y = theoretical_solution(p.aug, 0.5).stacked();
  const Vec integral = Vec::Zero(y.size());
  NeuralConfig cfg;
  cfg.variant = state.range(0) ? Variant::z_rnn : Variant::ie_rnn;
  const NoiseModel noise = NoiseModel::paper_sinusoid(8.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(network_rate(kkt, y, integral, 0.5, cfg, noise, cfg.variant));
  }
}
BENCHMARK(BM_NetworkRate)->Arg(0)->Arg(1);

void BM_Jacobian(benchmark::State& state)
{
  const SerialChain chain = state.range(0) ? presets::spatial_6r() : presets::planar_three_link();
  const Vec theta = Vec::LinSpaced(chain.n_joints(), 0.2, 1.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jacobian(chain, theta));
  }
}
BENCHMARK(BM_Jacobian)->Arg(0)->Arg(1);

// Closed-loop tracking for 0.1 s (1000 RK4 steps).
void BM_TrackingShortRun(benchmark::State& state)
{
  TrackingConfig cfg;
  cfg.theta0 = (Vec(3) << 0.4, 0.8, 0.9).finished();
  cfg.duration = 0.1;
  cfg.scheme = state.range(0) ? Scheme::hybrid_torque : Scheme::repetitive_motion;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_tracking(cfg));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_TrackingShortRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
