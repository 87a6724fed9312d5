// Microbenchmarks for the hot paths: the explicit three-point update, the
// implicit phase-space step, whole-trajectory integration, the rigidity
// rank test, and one end-to-end attraction-sweep sample.

#include <benchmark/benchmark.h>

#include <utility>

#include "dvi/campaign.hpp"
#include "dvi/extended_energy.hpp"
#include "dvi/formation.hpp"
#include "dvi/hamiltonian.hpp"
#include "dvi/integrator.hpp"
#include "dvi/model.hpp"

using dvi::DampedLagrangianModel;
using dvi::IntegratorConfig;
using dvi::Vector;

namespace {

const DampedLagrangianModel& pyramid_model() {
  static const DampedLagrangianModel model =
      dvi::make_formation_model(dvi::reference_formation_shape(), 13.0);
  return model;
}

IntegratorConfig pyramid_config(double h, long long steps) {
  IntegratorConfig config;
  config.step = h;
  config.steps = steps;
  config.initial_position = dvi::reference_formation_start();
  config.initial_velocity = Vector::Zero(12);
  return config;
}

// ===== Single-step kernels =====

void BM_ExplicitStep(benchmark::State& state) {
  const auto& model = pyramid_model();
  const Vector q0 = dvi::reference_formation_start();
  const Vector q1 = q0 + Vector::Constant(12, 0.01);
  for (auto _ : state) {
    Vector q2 = dvi::explicit_step(model, 3, 0.005, q0, q1);
    benchmark::DoNotOptimize(q2);
  }
}
BENCHMARK(BM_ExplicitStep);

void BM_HamiltonianStep(benchmark::State& state) {
  const auto& model = pyramid_model();
  const Vector q = dvi::reference_formation_start();
  const Vector p = Vector::Constant(12, 0.05);
  for (auto _ : state) {
    auto next = dvi::hamiltonian_step(model, 3, 0.005, q, p);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(BM_HamiltonianStep);

// ===== Whole trajectories =====

void BM_PyramidTrajectory(benchmark::State& state) {
  const auto& model = pyramid_model();
  const auto config = pyramid_config(0.005, state.range(0));
  for (auto _ : state) {
    auto trajectory = dvi::integrate(model, config);
    benchmark::DoNotOptimize(trajectory);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PyramidTrajectory)->Arg(400)->Arg(1600);

void BM_EulerTrajectory(benchmark::State& state) {
  const auto& model = pyramid_model();
  const auto config = pyramid_config(0.005, state.range(0));
  for (auto _ : state) {
    auto trajectory = dvi::euler_trajectory(model, config);
    benchmark::DoNotOptimize(trajectory);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EulerTrajectory)->Arg(400);

void BM_ExtendedEnergyMonitor(benchmark::State& state) {
  const auto model = dvi::make_quadratic_model(1, 1.0);
  IntegratorConfig config;
  config.step = 0.01;
  config.steps = state.range(0);
  config.initial_position = Vector::Ones(1);
  config.initial_velocity = Vector::Zero(1);
  for (auto _ : state) {
    auto drift = dvi::extended_energy_drift(model, config);
    benchmark::DoNotOptimize(drift);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExtendedEnergyMonitor)->Arg(10000);

// ===== Formation analysis =====

void BM_RigidityRank(benchmark::State& state) {
  const auto shape = dvi::reference_formation_shape();
  const Vector q = dvi::reference_formation_target();
  for (auto _ : state) {
    auto report = dvi::is_infinitesimally_rigid(shape, q);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_RigidityRank);

// ===== Campaign =====

// One sweep sample end to end: integrate over the five-second horizon at
// the bound-limited step and classify the outcome, matching the per-sample
// cost of a full attraction campaign.
void BM_CampaignSample(benchmark::State& state) {
  dvi::SweepPlan plan;
  plan.shape = dvi::reference_formation_shape();
  plan.base_configuration = dvi::reference_formation_target();
  plan.displaced_agent = 1;
  plan.region.min = Vector::Constant(3, -0.1);
  plan.region.max = Vector::Constant(3, 0.1);
  plan.sampling = dvi::SamplingMode::uniform_random;
  plan.sample_count = 1;
  plan.seed = 7;
  plan.kappa = 13.0;
  plan.horizon = 5.0;
  plan.enforce_alpha = true;
  plan.finalize();
  for (auto _ : state) {
    auto outcomes = dvi::run_campaign(plan);
    benchmark::DoNotOptimize(outcomes);
  }
}
BENCHMARK(BM_CampaignSample);

}  // namespace

BENCHMARK_MAIN();
