// Serial reference vs OpenMP path for the data-parallel kernels.

#include <benchmark/benchmark.h>

#include "iwal/convex_solver.hpp"
#include "iwal/kernels.hpp"
#include "iwal/random.hpp"

using namespace iwal;
using kernels::Execution;

namespace {

struct Fixture {
  std::vector<Hypothesis> members;
  std::vector<Vector> points;
  std::vector<double> weights;
  std::vector<WeightedExample> sample;
  LossFunction loss{LossKind::logistic, 2.0};

  Fixture(std::size_t hypotheses, std::size_t n, std::size_t d) {
    Rng rng(1);
    for (std::size_t i = 0; i < hypotheses; ++i) {
      Vector w(static_cast<Eigen::Index>(d));
      for (auto& v : w) v = standard_normal(rng);
      members.push_back(LinearPredictor{w});
    }
    for (std::size_t i = 0; i < n; ++i) {
      Vector x(static_cast<Eigen::Index>(d));
      for (auto& v : x) v = 2.0 * uniform01(rng) - 1.0;
      points.push_back(x);
      weights.push_back(1.0 / static_cast<double>(n));
      sample.push_back({x, bernoulli(rng, 0.5) ? 1.0 : -1.0, 1.0 + uniform01(rng)});
    }
  }
};

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_WeightedLossSums(benchmark::State& state) {
  static const Fixture f(2000, 1000, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::weighted_loss_sums(f.members, f.sample, f.loss, mode(state)));
  }
}
BENCHMARK(BM_WeightedLossSums)->Arg(0)->Arg(1)->ArgName("parallel");

void BM_PrefixSupDeviation(benchmark::State& state) {
  static const Fixture f(2000, 2000, 5);
  const std::vector<std::size_t> cuts{10, 100, 500, 1000, 2000};
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::prefix_sup_deviation(f.members, f.members[0], f.points, f.weights,
                                                           cuts, f.loss, mode(state)));
  }
}
BENCHMARK(BM_PrefixSupDeviation)->Arg(0)->Arg(1)->ArgName("parallel");

void BM_WeightedDeviation(benchmark::State& state) {
  static const Fixture f(2000, 2000, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::weighted_deviation_to_center(f.members, f.members[0], f.points,
                                                                   f.weights, f.loss, mode(state)));
  }
}
BENCHMARK(BM_WeightedDeviation)->Arg(0)->Arg(1)->ArgName("parallel");

void BM_PredictionsAndSpread(benchmark::State& state) {
  static const Fixture f(100000, 1, 10);
  for (auto _ : state) {
    const auto z = kernels::predictions(f.members, f.points[0], f.loss, mode(state));
    benchmark::DoNotOptimize(kernels::loss_spread(z, f.loss, mode(state)));
  }
}
BENCHMARK(BM_PredictionsAndSpread)->Arg(0)->Arg(1)->ArgName("parallel");

void BM_WeightedErm(benchmark::State& state) {
  static const Fixture f(1, 1000, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimize_weighted_loss(f.loss, f.sample, 5, 4.0));
  }
}
BENCHMARK(BM_WeightedErm);

}  // namespace

BENCHMARK_MAIN();
