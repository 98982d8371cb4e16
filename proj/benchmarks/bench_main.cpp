#include <benchmark/benchmark.h>

#include "dlseries/oracle.hpp"
#include "dlseries/series.hpp"

using namespace dls;

namespace {

void BM_WeylGenerate(benchmark::State& state) {
  RootDatum d = state.range(0) == 0
                    ? RootDatum::named(Family::B, 2, Isogeny::Adjoint)
                    : state.range(0) == 1
                          ? RootDatum::named(Family::A, 3, Isogeny::SimplyConnected)
                          : RootDatum::named(Family::D, 4, Isogeny::SimplyConnected);
  for (auto _ : state) {
    WeylGroup w = WeylGroup::generate(d);
    benchmark::DoNotOptimize(w.size());
  }
}
BENCHMARK(BM_WeylGenerate)->Arg(0)->Arg(1)->Arg(2);

void BM_LittleGroups(benchmark::State& state) {
  RootDatum d = RootDatum::named(Family::B, 2, Isogeny::SimplyConnected);
  WeylGroup w = WeylGroup::generate(d);
  SheafParam l = make_param(RatVec{Rat(1, 2), Rat(1, 4)}, d, 7);
  for (auto _ : state) {
    LittleGroups lg = little_groups(w, l);
    benchmark::DoNotOptimize(lg.omega.size());
  }
}
BENCHMARK(BM_LittleGroups);

void BM_RationalPartition(benchmark::State& state) {
  RootDatum sl2 = RootDatum::named(Family::A, 1, Isogeny::SimplyConnected);
  FrobeniusTwist eps = FrobeniusTwist::split(sl2, 3);
  SheafParam l = make_param(RatVec{Rat(1, 2)}, sl2, 3);
  for (auto _ : state) {
    auto ctx = rational_partition(sl2, eps, l);
    benchmark::DoNotOptimize(ctx.partition.series.size());
  }
}
BENCHMARK(BM_RationalPartition);

void BM_CensusPGL2F5(benchmark::State& state) {
  for (auto _ : state) {
    auto c = oracle::census({oracle::MatrixFamily::PGL, 2, 5});
    benchmark::DoNotOptimize(c.classes.size());
  }
}
BENCHMARK(BM_CensusPGL2F5);

void BM_CompareSL2F3(benchmark::State& state) {
  for (auto _ : state) {
    auto r = oracle::compare(Family::A, 1, Isogeny::SimplyConnected, 3, 12,
                             {oracle::MatrixFamily::PGL, 2, 3});
    benchmark::DoNotOptimize(r.match);
  }
}
BENCHMARK(BM_CompareSL2F3);

void BM_RegularEmbedding(benchmark::State& state) {
  RootDatum d = RootDatum::named(Family::C, 2, Isogeny::SimplyConnected);
  for (auto _ : state) {
    RegularEmbedding emb = regular_embedding(d);
    benchmark::DoNotOptimize(emb.big.rank);
  }
}
BENCHMARK(BM_RegularEmbedding);

}  // namespace

BENCHMARK_MAIN();
