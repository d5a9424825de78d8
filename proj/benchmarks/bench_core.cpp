#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "reeb321/jacobi.hpp"
#include "reeb321/knots.hpp"
#include "reeb321/model.hpp"
#include "reeb321/orbits.hpp"

using namespace reeb;

static void BM_JacobiRandom(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) A(i, j) = A(j, i) = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigen(A).values.data());
}
BENCHMARK(BM_JacobiRandom)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_ReebFlowOnePeriod(benchmark::State& state) {
  const HamiltonianParams p = preset("validated");
  const SpecialOrbits so = special_orbits(p);
  const State4 z0 = so.P3.initial_point() + Vec4(0, 0, 1e-3, 0);
  const State4 z = surface_project(p, z0);
  for (auto _ : state) benchmark::DoNotOptimize(flow_point(p, z, so.P3.reeb_period, TimeKind::reeb));
}
BENCHMARK(BM_ReebFlowOnePeriod)->Unit(benchmark::kMicrosecond);

static void BM_GaussLinking(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<State4> a, b;
  for (int j = 0; j < n; ++j) {
    const double t = kTwoPi * j / n;
    a.emplace_back(std::cos(t), std::sin(t), 0, 0);
    b.emplace_back(0, 0, std::cos(t), std::sin(t));
  }
  const ClosedCurve ca = curve_from_loop(a), cb = curve_from_loop(b);
  const Projection pr = stereographic_project({ca, cb});
  for (auto _ : state) benchmark::DoNotOptimize(gauss_linking(pr.curves[0], pr.curves[1]).raw);
}
BENCHMARK(BM_GaussLinking)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
