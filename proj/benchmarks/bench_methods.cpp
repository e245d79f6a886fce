#include "medcast/backtest.hpp"
#include "medcast/base_methods.hpp"
#include "medcast/features.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

using namespace medcast;

namespace {

// AR(1) around a positive level, long enough for every estimator
std::vector<double> sample_series(std::size_t n, std::uint64_t seed = 42) {
	std::mt19937_64 rng(seed);
	std::normal_distribution<double> z;
	std::vector<double> x(n);
	double prev = 0.0;
	for (auto &v : x) {
		prev = 0.5 * prev + z(rng);
		v = 100.0 + 10.0 * prev;
	}
	return x;
}

void BM_Ses(benchmark::State &state) {
	const auto x = sample_series(80);
	for (auto _ : state) {
		benchmark::DoNotOptimize(fit_ses(x).forecast());
	}
}
BENCHMARK(BM_Ses);

void BM_Ces(benchmark::State &state) {
	const auto x = sample_series(80);
	for (auto _ : state) {
		benchmark::DoNotOptimize(fit_ces(x).forecast());
	}
}
BENCHMARK(BM_Ces)->Unit(benchmark::kMillisecond);

void BM_Arfima(benchmark::State &state) {
	const auto x = sample_series(static_cast<std::size_t>(state.range(0)));
	for (auto _ : state) {
		benchmark::DoNotOptimize(fit_arfima(x).forecast());
	}
}
BENCHMARK(BM_Arfima)->Arg(80)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_Trend(benchmark::State &state) {
	const auto x = sample_series(80);
	for (auto _ : state) {
		benchmark::DoNotOptimize(fit_trend(x).forecast());
	}
}
BENCHMARK(BM_Trend)->Unit(benchmark::kMicrosecond);

void BM_FitFgn(benchmark::State &state) {
	const auto x = sample_series(90);
	for (auto _ : state) {
		benchmark::DoNotOptimize(fit_fgn(x).hurst);
	}
}
BENCHMARK(BM_FitFgn)->Unit(benchmark::kMicrosecond);

void BM_Supersmoother(benchmark::State &state) {
	const auto x = sample_series(90);
	for (auto _ : state) {
		benchmark::DoNotOptimize(supersmooth(x).back());
	}
}
BENCHMARK(BM_Supersmoother)->Unit(benchmark::kMicrosecond);

void BM_Features(benchmark::State &state) {
	const auto x = sample_series(90);
	for (auto _ : state) {
		benchmark::DoNotOptimize(compute_features(x).spectral_entropy);
	}
}
BENCHMARK(BM_Features)->Unit(benchmark::kMicrosecond);

void BM_EvaluateSeries(benchmark::State &state) {
	AnnualSeries s;
	s.station_id = "B1";
	s.values = sample_series(90);
	for (auto _ : state) {
		benchmark::DoNotOptimize(evaluate_series(s).base_fits);
	}
}
BENCHMARK(BM_EvaluateSeries)->Unit(benchmark::kSecond)->Iterations(1);

} // namespace

BENCHMARK_MAIN();
