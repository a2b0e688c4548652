#include <benchmark/benchmark.h>

#include <array>
#include <cstddef>
#include <random>
#include <vector>

#include "reluinv/instance_lab.hpp"
#include "reluinv/lp.hpp"
#include "reluinv/network.hpp"
#include "reluinv/ogo.hpp"
#include "reluinv/pgd.hpp"
#include "reluinv/region.hpp"

namespace {

using namespace reluinv;

Vector uniform(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = unit(rng);
  return x;
}

Network net_of_width(std::size_t input, std::size_t width, std::size_t output) {
  const std::array<std::size_t, 4> arch{input, width, width, output};
  return generate_network(arch, 7);
}

void BM_Forward(benchmark::State& state) {
  const auto width = static_cast<std::size_t>(state.range(0));
  const Network net = net_of_width(4, width, 8);
  std::mt19937_64 rng(1);
  const Vector x = uniform(rng, 4);
  for (auto _ : state) benchmark::DoNotOptimize(forward(net, x));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Forward)->Arg(16)->Arg(64)->Arg(256);

void BM_LossGradient(benchmark::State& state) {
  const auto width = static_cast<std::size_t>(state.range(0));
  const Network net = net_of_width(4, width, 8);
  std::mt19937_64 rng(2);
  const Vector x = uniform(rng, 4);
  const LossSpec loss{uniform(rng, 8), LossKind::MeanSquaredError};
  for (auto _ : state) benchmark::DoNotOptimize(loss_and_gradient(net, loss, x));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LossGradient)->Arg(16)->Arg(64)->Arg(256);

// Random dense LP in the unit box with rows through an interior point.
void BM_SimplexDense(benchmark::State& state) {
  const auto vars = static_cast<std::size_t>(state.range(0));
  const std::size_t rows = 2 * vars;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  LinearProgram lp;
  lp.objective = Vector(static_cast<Eigen::Index>(vars));
  for (Eigen::Index i = 0; i < lp.objective.size(); ++i) lp.objective[i] = normal(rng);
  lp.lower = Vector::Zero(static_cast<Eigen::Index>(vars));
  lp.upper = Vector::Ones(static_cast<Eigen::Index>(vars));
  const Vector mid = 0.5 * lp.upper;
  for (std::size_t r = 0; r < rows; ++r) {
    LinearConstraint c;
    c.coeffs = Vector(static_cast<Eigen::Index>(vars));
    for (Eigen::Index i = 0; i < c.coeffs.size(); ++i) c.coeffs[i] = normal(rng);
    c.rhs = c.coeffs.dot(mid) + 0.1;
    lp.rows.push_back(std::move(c));
  }
  for (auto _ : state) benchmark::DoNotOptimize(solve(lp));
}
BENCHMARK(BM_SimplexDense)->Arg(8)->Arg(32)->Arg(64);

void BM_RegionSystem(benchmark::State& state) {
  const Network net = net_of_width(4, 64, 8);
  std::mt19937_64 rng(4);
  const ActivationPattern pattern = pattern_of(net, uniform(rng, 4)).pattern;
  for (auto _ : state) benchmark::DoNotOptimize(region_system(net, pattern));
}
BENCHMARK(BM_RegionSystem);

void BM_OgoToy(benchmark::State& state) {
  const Network net = toy_network_1d();
  const FeasibleSet dom = toy_domain_1d();
  const LossSpec loss{Vector::Zero(1), LossKind::MeanSquaredError};
  Vector x0(1);
  x0[0] = 2.7;
  OgoConfig cfg;
  cfg.epsilon = 1e-9;
  for (auto _ : state) benchmark::DoNotOptimize(run_ogo(net, loss, dom, x0, cfg));
}
BENCHMARK(BM_OgoToy)->Unit(benchmark::kMicrosecond);

void BM_OgoRandom(benchmark::State& state) {
  const std::array<std::size_t, 4> arch{2, 32, 32, 4};
  const Network net = normalize_outputs(generate_network(arch, 11), 1000, 11).network;
  const RandomInstance inst = random_instance(net, 1, 11);
  const LossSpec loss{inst.target, LossKind::MeanSquaredError};
  OgoConfig cfg;
  cfg.epsilon = 1e-4;
  cfg.max_iterations = 200;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_ogo(net, loss, inst.domain, inst.starts.front(), cfg));
  }
}
BENCHMARK(BM_OgoRandom)->Unit(benchmark::kMillisecond);

void BM_PgdRandom(benchmark::State& state) {
  const std::array<std::size_t, 4> arch{2, 32, 32, 4};
  const Network net = normalize_outputs(generate_network(arch, 11), 1000, 11).network;
  const RandomInstance inst = random_instance(net, 1, 11);
  const LossSpec loss{inst.target, LossKind::MeanSquaredError};
  PgdConfig cfg;
  cfg.max_iterations = 2000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_pgd(net, loss, inst.domain, inst.starts.front(), cfg));
  }
}
BENCHMARK(BM_PgdRandom)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
