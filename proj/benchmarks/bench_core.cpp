#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include <Eigen/Core>

#include "mvip/allocation.hpp"
#include "mvip/errcor.hpp"
#include "mvip/fxlms.hpp"
#include "mvip/hafimc.hpp"
#include "mvip/inversion.hpp"
#include "mvip/plant.hpp"
#include "mvip/rbf_network.hpp"
#include "mvip/scenario.hpp"

namespace {

mvip::RbfNetwork random_network(int neurons, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  mvip::RbfNetwork net(12, 6);
  for (int i = 0; i < neurons; ++i) {
    Eigen::VectorXd c(12);
    Eigen::VectorXd w(6);
    for (auto& v : c) v = u(rng);
    for (auto& v : w) v = u(rng);
    net.add_neuron(c, 0.5 + 0.5 * std::abs(u(rng)), w);
  }
  return net;
}

}  // namespace

static void BM_Allocate(benchmark::State& state) {
  const auto params = mvip::payload_platform();
  const mvip::Matrix68 map = mvip::actuation_map(params);
  const auto coils = mvip::coil_positions(mvip::Vector6::Constant(0.001), params);
  const mvip::Vector8 q = mvip::stiffness_at(coils, params);
  mvip::Wrench w{{1.0, -2.0, 3.0}, {0.1, 0.2, -0.3}};
  for (auto _ : state) {
    auto f = mvip::allocate(w, q, map);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_Allocate);

static void BM_DriveActuators(benchmark::State& state) {
  const auto params = mvip::payload_platform();
  const mvip::Matrix68 map = mvip::actuation_map(params);
  const mvip::Vector6 pose = mvip::Vector6::Constant(0.001);
  mvip::Wrench w{{1.0, -2.0, 3.0}, {0.1, 0.2, -0.3}};
  for (auto _ : state) {
    auto coils = mvip::drive_actuators(w, pose, params, map);
    benchmark::DoNotOptimize(coils);
  }
}
BENCHMARK(BM_DriveActuators);

static void BM_AnalyticInverse(benchmark::State& state) {
  const auto params = mvip::payload_platform();
  mvip::Vector6 a;
  a << 0.1, -0.2, 0.3, 0.01, -0.02, 0.03;
  for (auto _ : state) {
    auto u = mvip::analytic_inverse(a, params);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_AnalyticInverse);

static void BM_StepDynamics(benchmark::State& state) {
  const auto params = mvip::payload_platform();
  mvip::StateVector s;
  s.rates << 0.01, 0.0, 0.0, 0.0, 0.02, 0.0;
  mvip::Wrench w{{1.0, 0.0, 0.0}, {0.0, 0.1, 0.0}};
  for (auto _ : state) {
    s = mvip::step_dynamics(s, w, params, 1e-4);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_StepDynamics);

static void BM_RbfForward(benchmark::State& state) {
  const auto net = random_network(static_cast<int>(state.range(0)), 3);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(12, 0.1);
  for (auto _ : state) {
    auto y = mvip::rbf_forward(net, x);
    benchmark::DoNotOptimize(y);
  }
}
BENCHMARK(BM_RbfForward)->Arg(6)->Arg(12)->Arg(20);

static void BM_LmTerms(benchmark::State& state) {
  const auto net = random_network(static_cast<int>(state.range(0)), 5);
  const Eigen::Index n = state.range(1);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd x(n, 12);
  Eigen::MatrixXd t(n, 6);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = u(rng);
  for (auto _ : state) {
    auto terms = mvip::lm_terms(net, x, t);
    benchmark::DoNotOptimize(terms);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_LmTerms)->Args({6, 4096})->Args({20, 4096})->Args({20, 32768})
    ->Unit(benchmark::kMillisecond);

static void BM_FxLmsStep(benchmark::State& state) {
  mvip::FxLmsParams p;
  p.filter_length = static_cast<int>(state.range(0));
  mvip::FxLmsChannel ch(p, mvip::feedforward_band(10.0, 300.0, 2000.0));
  double t = 0.0;
  for (auto _ : state) {
    const double x = std::sin(2.0 * 3.141592653589793 * 50.0 * t);
    benchmark::DoNotOptimize(ch.step(x, 0.1 * x));
    t += 5e-4;
  }
}
BENCHMARK(BM_FxLmsStep)->Arg(65)->Arg(256);

static void BM_ScenarioSecond(benchmark::State& state) {
  mvip::ScenarioConfig c;
  c.controller = state.range(0) ? mvip::ControllerMode::Hafimc : mvip::ControllerMode::Imc;
  c.disturbance.tones = {{50.0, 0.05}};
  c.duration = 1.0;
  for (auto _ : state) {
    auto r = mvip::run_scenario(c);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_ScenarioSecond)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
