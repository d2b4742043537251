#include <benchmark/benchmark.h>

#include <map>

#include "pathmine/miner.hpp"
#include "pathmine/query.hpp"
#include "pathmine/synth.hpp"

namespace {

using namespace pathmine;

struct Fixture {
  SynthCohort cohort;
  MiningTask task;
  CaseCrossoverDatabase db;
};

const Fixture& fixture(std::size_t patients, double events_per_window) {
  static std::map<std::pair<std::size_t, double>, Fixture> cache;
  auto it = cache.find({patients, events_per_window});
  if (it == cache.end()) {
    SynthOptions options;
    options.patients = patients;
    options.events_per_window = events_per_window;
    options.plant = default_plant(patients / 40);
    auto cohort = generate_cohort(options);
    auto task = compile(parse_query(seizure_switch_query(static_cast<int>(patients / 50))),
                        cohort.kb);
    auto db = build_database(cohort.raw, task, cohort.kb);
    it = cache.emplace(std::make_pair(patients, events_per_window),
                       Fixture{std::move(cohort), std::move(task), std::move(db)})
             .first;
  }
  return it->second;
}

void BM_StudyQuery(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)),
                          static_cast<double>(state.range(1)));
  MiningOptions options;
  options.embeddings = EmbeddingMode::kWitness;
  options.threads = static_cast<unsigned>(state.range(2));
  std::size_t patterns = 0;
  for (auto _ : state) {
    auto result = mine(f.task, f.db, options);
    patterns = result.patterns.size();
    benchmark::DoNotOptimize(result);
  }
  state.counters["patterns"] = static_cast<double>(patterns);
}
BENCHMARK(BM_StudyQuery)
    ->Args({1000, 6, 1})
    ->Args({1000, 20, 1})
    ->Args({10000, 20, 1})
    ->Args({10000, 20, 4})
    ->Unit(benchmark::kMillisecond);

void BM_MinSupportOnly(benchmark::State& state) {
  const auto& f = fixture(1000, 6);
  MiningTask task = f.task;
  task.negative.reset();
  task.constraints = {make_constraint(MinSupportConstraint{f.task.min_support()})};
  MiningOptions options;
  options.embeddings = EmbeddingMode::kNone;
  options.pruning = state.range(0) != 0;
  options.max_length = 4;
  for (auto _ : state) benchmark::DoNotOptimize(mine(task, f.db, options));
}
BENCHMARK(BM_MinSupportOnly)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BuildDatabase(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)), 20);
  for (auto _ : state) benchmark::DoNotOptimize(build_database(f.cohort.raw, f.task, f.cohort.kb));
}
BENCHMARK(BM_BuildDatabase)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
