#include <benchmark/benchmark.h>

#include <stickcert/diagram.hpp>
#include <stickcert/geom.hpp>
#include <stickcert/invariants.hpp>
#include <stickcert/quotients.hpp>
#include <stickcert/store.hpp>

#include <filesystem>

namespace sc = stickcert;

namespace {

std::filesystem::path fixture(const std::string& rel) { return std::filesystem::path(STICKCERT_FIXTURE_DIR) / rel; }

const sc::diagram::Diagram& labeled_diagram() {
  static const auto d = sc::diagram::parse_pd(sc::store::read_text_file(fixture("labeled/15n41127.pd")));
  return d;
}

void BM_ProjectToDiagram(benchmark::State& state) {
  const auto poly = sc::store::read_coordinate_file(fixture("15n41127.tsv"));
  const auto dir = sc::geom::find_regular_direction(poly, 0).first;
  for (auto _ : state) benchmark::DoNotOptimize(sc::geom::project_to_diagram(poly, dir));
}
BENCHMARK(BM_ProjectToDiagram);

void BM_DirectionSweep(benchmark::State& state) {
  const auto poly = sc::store::read_coordinate_file(fixture("13n592.tsv"));
  for (auto _ : state) benchmark::DoNotOptimize(sc::geom::direction_sweep(poly, static_cast<std::uint64_t>(state.range(0)), 1, 1));
}
BENCHMARK(BM_DirectionSweep)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_HomSearchS5(benchmark::State& state) {
  const auto pres = sc::diagram::wirtinger(labeled_diagram());
  for (auto _ : state) benchmark::DoNotOptimize(sc::quotients::search_homomorphisms(pres, 5, 1));
}
BENCHMARK(BM_HomSearchS5)->Unit(benchmark::kMillisecond);

void BM_HomSearchS6Empty(benchmark::State& state) {
  const auto pres = sc::diagram::wirtinger(labeled_diagram());
  for (auto _ : state) benchmark::DoNotOptimize(sc::quotients::search_homomorphisms(pres, 6, 1));
}
BENCHMARK(BM_HomSearchS6Empty)->Unit(benchmark::kMillisecond);

void BM_Alexander(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sc::invariants::alexander(labeled_diagram()));
}
BENCHMARK(BM_Alexander)->Unit(benchmark::kMillisecond);

void BM_KauffmanBracket(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sc::invariants::kauffman_bracket(labeled_diagram()));
}
BENCHMARK(BM_KauffmanBracket)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
