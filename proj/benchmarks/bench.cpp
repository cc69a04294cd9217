#include <benchmark/benchmark.h>

#include <random>

#include <vker/bisim.hpp>
#include <vker/correct.hpp>
#include <vker/gen.hpp>
#include <vker/translate.hpp>

using namespace vker;

namespace {

// fixed-seed sample whose size is actually close to the requested budget
Term sample_term(int size) {
  std::mt19937_64 rng(12345);
  GenOptions opt;
  opt.size = size;
  for (;;) {
    Term t = gen_term(rng, opt);
    auto n = static_cast<int>(term_size(t));
    if (n >= size / 2 && n <= size) return t;
  }
}

void BM_parse(benchmark::State& state) {
  std::string text = show(sample_term(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(parse_term(text));
}
BENCHMARK(BM_parse)->Arg(20)->Arg(50);

void BM_translate(benchmark::State& state) {
  Term t = sample_term(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(translate(t, {}));
}
BENCHMARK(BM_translate)->Arg(20)->Arg(50)->Arg(100);

void BM_net_iso(benchmark::State& state) {
  Term t = sample_term(static_cast<int>(state.range(0)));
  Net g = translate(t, {});
  Net h = translate(t, {});
  for (auto _ : state) benchmark::DoNotOptimize(net_iso(g, h));
}
BENCHMARK(BM_net_iso)->Arg(20)->Arg(50)->Arg(100);

void BM_validate(benchmark::State& state) {
  Net g = translate(sample_term(static_cast<int>(state.range(0))), {});
  for (auto _ : state) benchmark::DoNotOptimize(validate_net(g));
}
BENCHMARK(BM_validate)->Arg(20)->Arg(50);

void BM_check_correct(benchmark::State& state) {
  Net g = translate(sample_term(static_cast<int>(state.range(0))), {});
  for (auto _ : state) benchmark::DoNotOptimize(check_correct(g));
}
BENCHMARK(BM_check_correct)->Arg(20)->Arg(50);

void BM_sequentialize(benchmark::State& state) {
  Net g = translate(sample_term(static_cast<int>(state.range(0))), {});
  for (auto _ : state) benchmark::DoNotOptimize(sequentialize(g));
}
BENCHMARK(BM_sequentialize)->Arg(20)->Arg(50);

void BM_step_net(benchmark::State& state) {
  Net g = translate(sample_term(static_cast<int>(state.range(0))), {});
  auto cuts = find_cuts(g);
  if (cuts.empty()) {
    state.SkipWithError("no cuts in sample");
    return;
  }
  for (auto _ : state) benchmark::DoNotOptimize(step_net(g, cuts.front()));
}
BENCHMARK(BM_step_net)->Arg(20)->Arg(50);

void BM_normalize(benchmark::State& state) {
  Term t = sample_term(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(normalize(t, Strategy::Leftmost, 200));
}
BENCHMARK(BM_normalize)->Arg(20)->Arg(50);

void BM_cosimulate(benchmark::State& state) {
  Term t = sample_term(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cosimulate(t, {}, Strategy::Leftmost, 50));
}
BENCHMARK(BM_cosimulate)->Arg(20)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
