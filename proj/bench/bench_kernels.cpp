// Serial reference vs OpenMP kernel timings.

#include <benchmark/benchmark.h>

#include "nrep/blindness.hpp"
#include "nrep/fermion.hpp"
#include "nrep/lattice.hpp"
#include "nrep/marginals.hpp"
#include "nrep/spectral.hpp"
#include "nrep/symplectic.hpp"

namespace {

const nrep::GroundSpace& compass_ground() {
  static const nrep::GroundSpace gs = [] {
    nrep::GroundSpaceOptions opts;
    opts.gauge.push_back(nrep::compass_gauge(3));
    return nrep::ground_space(nrep::build_compass({}), opts);
  }();
  return gs;
}

std::vector<nrep::PauliTerm> column_parities() {
  std::vector<nrep::PauliTerm> ops;
  for (int k = 0; k < 3; ++k) ops.push_back(nrep::build_column_parity(k, 3));
  return ops;
}

void BM_MarginalVector_Serial(benchmark::State& st) {
  const auto& c0 = compass_ground().basis[0];
  for (auto _ : st) benchmark::DoNotOptimize(nrep::serial::marginal_vector(c0, 9));
}
void BM_MarginalVector_Parallel(benchmark::State& st) {
  const auto& c0 = compass_ground().basis[0];
  for (auto _ : st) benchmark::DoNotOptimize(nrep::marginal_vector(c0, 9));
}

void BM_Blindness_Serial(benchmark::State& st) {
  const auto& gs = compass_ground();
  for (auto _ : st) benchmark::DoNotOptimize(nrep::serial::certify_blindness(gs.basis, 9, static_cast<int>(st.range(0))));
}
void BM_Blindness_Parallel(benchmark::State& st) {
  const auto& gs = compass_ground();
  for (auto _ : st) benchmark::DoNotOptimize(nrep::certify_blindness(gs.basis, 9, static_cast<int>(st.range(0))));
}

void BM_Fermionic2RDM_Serial(benchmark::State& st) {
  const auto f = nrep::map_state(compass_ground().basis[0], 9);
  for (auto _ : st) benchmark::DoNotOptimize(nrep::serial::fermionic_2rdm(f));
}
void BM_Fermionic2RDM_Parallel(benchmark::State& st) {
  const auto f = nrep::map_state(compass_ground().basis[0], 9);
  for (auto _ : st) benchmark::DoNotOptimize(nrep::fermionic_2rdm(f));
}

void BM_SectorSplit_Serial(benchmark::State& st) {
  const auto h = nrep::build_compass({});
  const auto ops = column_parities();
  for (auto _ : st) benchmark::DoNotOptimize(nrep::serial::sector_split(h, ops));
}
void BM_SectorSplit_Parallel(benchmark::State& st) {
  const auto h = nrep::build_compass({});
  const auto ops = column_parities();
  for (auto _ : st) benchmark::DoNotOptimize(nrep::sector_split(h, ops));
}

void BM_StabilizerScan_Serial(benchmark::State& st) {
  const auto g = nrep::toric_generators(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(nrep::serial::certify_stabilizer_blindness(g, 3));
}
void BM_StabilizerScan_Parallel(benchmark::State& st) {
  const auto g = nrep::toric_generators(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(nrep::certify_stabilizer_blindness(g, 3));
}

}  // namespace

BENCHMARK(BM_MarginalVector_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MarginalVector_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Blindness_Serial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Blindness_Parallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fermionic2RDM_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fermionic2RDM_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SectorSplit_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SectorSplit_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StabilizerScan_Serial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StabilizerScan_Parallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
