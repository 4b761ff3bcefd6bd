#include <benchmark/benchmark.h>

#include <numeric>
#include <string>

#include "gnbp/dist.hpp"
#include "gnbp/eppf.hpp"
#include "gnbp/gibbs.hpp"
#include "gnbp/io.hpp"

namespace {

using namespace gnbp;

void BM_StirlingTriangle(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(StirlingTriangle::build(m, 0.5));
}
BENCHMARK(BM_StirlingTriangle)->Arg(100)->Arg(1000)->Arg(4000);

void BM_LogEppf(benchmark::State& state) {
  const auto tri = StirlingTriangle::build(200, 0.5);
  std::vector<int> sizes(20, 10);
  const ModelParams params{1.0, 0.5, 0.9, Parameterization::Original};
  for (auto _ : state) benchmark::DoNotOptimize(log_eppf(sizes, params, tri));
}
BENCHMARK(BM_LogEppf);

void BM_TnbSample(benchmark::State& state) {
  Rng rng(1);
  const double p = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(tnb_sample(0.5, p, rng));
}
BENCHMARK(BM_TnbSample)->Arg(50)->Arg(99);

void BM_GalaxySweep(benchmark::State& state) {
  const auto galaxy = load_dataset(std::string(GNBP_DATA_DIR) + "/galaxy.csv");
  ChainConfig config;
  config.discount = Setting::fixed(0.5);
  auto s = initial_state(galaxy.points, config);
  Rng rng(2);
  for (int i = 0; i < 50; ++i) assign_sweep(s, galaxy.points, rng);
  for (auto _ : state) {
    assign_sweep(s, galaxy.points, rng);
    update_atoms(s, rng);
    update_hypers(s, galaxy.points, config.priors, rng);
  }
}
BENCHMARK(BM_GalaxySweep);

void BM_DiscountUpdate(benchmark::State& state) {
  const DiscountGrid grid(9999, 82, Variant::Gnbp);
  std::vector<int> sizes{20, 15, 10, 10, 7, 5, 3, 3, 2, 2, 1, 1, 1, 1, 1};
  const ModelParams params{1.0, 0.5, 0.9, Parameterization::Original};
  for (auto _ : state) benchmark::DoNotOptimize(discount_log_weights(sizes, params, grid));
}
BENCHMARK(BM_DiscountUpdate);

}  // namespace

BENCHMARK_MAIN();
