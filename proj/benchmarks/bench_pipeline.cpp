#include <benchmark/benchmark.h>

#include <bonnet/surface_embed.hpp>

#ifdef BONNET_BENCH_CLI
#include "bonnet_cli/commands.hpp"
#include "bonnet_cli/config.hpp"
#endif

using namespace bonnet;

namespace {

const QFamily kFam{QKind::Rational, 1, 1.0};
const HInitialData kIcs{1.0, 0.0, 1.0, 0.0, 1.0};

PsiBranch demo_branch() {
  PsiBranch b;
  b.kind = PsiCase::RationalUpper;
  b.family = kFam;
  return b;
}

Grid grid(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  return Grid(1.0, 2.0, 0.0, 1.0, n, n);
}

void BM_IntegrateQ(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(integrate_q_ode(1.0, -1.0, 1.0, 2.0, 1e-3));
}
BENCHMARK(BM_IntegrateQ);

void BM_IntegrateH(benchmark::State& st) {
  const double step = 1.0 / static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(integrate_h(kIcs, kFam, 2.0, step));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_IntegrateH)->Arg(1000)->Arg(10000);

void BM_IntegrateLax(benchmark::State& st) {
  const Grid g = grid(st);
  for (auto _ : st) benchmark::DoNotOptimize(integrate_lax(kFam, g, 0.0));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_IntegrateLax)->Arg(64)->Arg(256);

void BM_BuildCoframes(benchmark::State& st) {
  const Grid g = grid(st);
  const auto profile = integrate_h_on_grid(kIcs, kFam, g);
  const auto psi = sample_psi(demo_branch(), g);
  for (auto _ : st) benchmark::DoNotOptimize(build_coframes(profile, psi, g));
}
BENCHMARK(BM_BuildCoframes)->Arg(64)->Arg(256);

void BM_StructureResiduals(benchmark::State& st) {
  const Grid g = grid(st);
  const auto profile = integrate_h_on_grid(kIcs, kFam, g);
  const auto cf = build_coframes(profile, sample_psi(demo_branch(), g), g);
  for (auto _ : st) benchmark::DoNotOptimize(structure_residuals(cf, profile));
}
BENCHMARK(BM_StructureResiduals)->Arg(64)->Arg(256);

void BM_IntegrateFrame(benchmark::State& st) {
  const Grid g = grid(st);
  const auto profile = integrate_h_on_grid(kIcs, kFam, g);
  const auto psi = sample_psi(demo_branch(), g);
  const auto forms = frame_forms(build_coframes(profile, psi, g), psi, profile);
  for (auto _ : st) benchmark::DoNotOptimize(integrate_frame(forms));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_IntegrateFrame)->Arg(64)->Arg(256);

void BM_Deformation(benchmark::State& st) {
  const Grid g = grid(st);
  const auto profile = integrate_h_on_grid(kIcs, kFam, g);
  const auto psi = sample_psi(demo_branch(), g);
  const auto cf = build_coframes(profile, psi, g);
  for (auto _ : st) {
    auto dp = integrate_deformation(cf, 1.0);
    benchmark::DoNotOptimize(build_deformed_surface(profile, psi, dp, g));
  }
}
BENCHMARK(BM_Deformation)->Arg(64)->Arg(128);

#ifdef BONNET_BENCH_CLI
void BM_VerifyDemo(benchmark::State& st) {
  const auto cfg = cli::load_config(BONNET_DEMO_CONFIG);
  for (auto _ : st) benchmark::DoNotOptimize(cli::verify_report(cfg, ""));
}
BENCHMARK(BM_VerifyDemo)->Unit(benchmark::kMillisecond)->Iterations(1);
#endif

}  // namespace

BENCHMARK_MAIN();
