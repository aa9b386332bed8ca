#include <benchmark/benchmark.h>

#include <map>

#include "smoothsc/experiment.hpp"
#include "smoothsc/postprocess.hpp"
#include "smoothsc/smoothers.hpp"

using namespace smoothsc;

namespace {

// One assembled hexagon system per (k, level), built on first use.
const LevelSystem<double>& hex_system(int k, int level) {
  static std::map<std::pair<int, int>, LevelSystem<double>> cache;
  auto it = cache.find({k, level});
  if (it == cache.end()) {
    const Problem p = make_problem(CaseId::poisson_hex, k);
    it = cache.emplace(std::pair{k, level}, build_level<double>(p, problem_mesh(p, level))).first;
  }
  return it->second;
}

void BM_Assemble(benchmark::State& state) {
  const Problem p = make_problem(CaseId::poisson_hex, 1);
  const auto mesh = problem_mesh(p, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_level<double>(p, mesh));
}
BENCHMARK(BM_Assemble)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Spmv(benchmark::State& state) {
  const auto& L = hex_system(1, static_cast<int>(state.range(0)));
  const Vector<double> x(L.A_fine.cols(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(L.A_fine * x);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(L.A_fine.nnz()));
}
BENCHMARK(BM_Spmv)->Arg(4)->Arg(5)->Arg(6);

void BM_SmootherApply(benchmark::State& state) {
  const auto& L = hex_system(1, 5);
  const auto kind = static_cast<SmootherKind>(state.range(0));
  const Problem p = make_problem(CaseId::poisson_hex, 1);
  SmootherChoice choice = resolve_smoother("sgs", 1.0);
  choice.kind = kind;
  const Smoother<double> S(make_smoother_spec(choice, p, L), L.A_fine);
  const Vector<double> r(L.A_fine.rows(), 1.0);
  Vector<double> z;
  for (auto _ : state) {
    S.apply(r, z);
    benchmark::DoNotOptimize(z.data());
  }
}
BENCHMARK(BM_SmootherApply)
    ->Arg(static_cast<int>(SmootherKind::jacobi))
    ->Arg(static_cast<int>(SmootherKind::gs_symmetric))
    ->Arg(static_cast<int>(SmootherKind::block_gs_symmetric));

void BM_Postprocess(benchmark::State& state) {
  const auto& L = hex_system(1, 5);
  const Smoother<double> S(SmootherSpec::point(SmootherKind::gs_symmetric), L.A_fine);
  const PostprocessConfig cfg{Method::pcg, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(smooth_postprocess(L.u_h, cfg, L.A_fine, L.f_fine, L.iota, S));
}
BENCHMARK(BM_Postprocess)->Arg(1)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
