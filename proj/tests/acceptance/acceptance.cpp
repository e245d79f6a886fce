// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Tolerances and runtime limits are fixed below; the exit status is non-zero
// if any criterion fails.

#include "medcast/accuracy.hpp"
#include "medcast/backtest.hpp"
#include "medcast/base_methods.hpp"
#include "medcast/combine.hpp"
#include "medcast/features.hpp"
#include "medcast/relate.hpp"

#include "oracles.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace medcast;
namespace fs = std::filesystem;

namespace {

constexpr double kMetricTol = 1e-12;     // relative to max(1, |value|)
constexpr double kRegressionTol = 1e-10; // absolute
constexpr double kSesTol = 0.15;
constexpr double kArfimaTol = 0.08;
constexpr double kHurstTol = 0.10;
constexpr double kEntropyNoiseMin = 0.90;
constexpr double kEntropySineMax = 0.1;
constexpr double kTrendLineTol = 1e-9;
constexpr double kTrendNoiseMax = 0.35;
constexpr double kPlantedSlopeTol = 0.2;
constexpr double kAggregationTol = 1e-12;

struct Outcome {
	bool pass = true;
	std::string detail;

	void require(bool ok, const std::string &what) {
		if (!ok) {
			pass = false;
			detail += (detail.empty() ? "" : "; ") + what;
		}
	}
	void info(const std::string &what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v, int precision = 4) {
	char buf[64];
	std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
	return buf;
}

int run_criterion(int number, const std::string &title, double limit_seconds, const std::function<Outcome()> &body) {
	const auto start = std::chrono::steady_clock::now();
	Outcome outcome;
	try {
		outcome = body();
	} catch (const std::exception &e) {
		outcome.require(false, std::string("exception: ") + e.what());
	}
	const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	if (limit_seconds > 0.0) {
		outcome.require(seconds < limit_seconds, "runtime above " + fmt(limit_seconds) + " s");
	}
	std::printf("criterion %2d %s: %s (%s; %.1f s)\n", number, title.c_str(), outcome.pass ? "PASS" : "FAIL",
	            outcome.detail.c_str(), seconds);
	std::fflush(stdout);
	return outcome.pass ? 0 : 1;
}

double median_of(std::vector<double> v) { return oracle::sorted_median(std::move(v)); }

// ------------------------------------------------------------------ 1

Outcome metric_oracle() {
	Outcome out;
	std::mt19937_64 rng(101);
	std::uniform_int_distribution<int> len(1, 50);
	std::uniform_real_distribution<double> u(0.1, 100.0);
	double worst = 0.0;
	for (int r = 0; r < 1000; ++r) {
		const auto n = static_cast<std::size_t>(len(rng));
		std::vector<double> f(n), x(n);
		for (std::size_t i = 0; i < n; ++i) {
			f[i] = u(rng);
			x[i] = u(rng);
		}
		const double want[] = {oracle::mae(f, x), oracle::mape(f, x), oracle::mdae(f, x), oracle::mdape(f, x),
		                       oracle::rmse(f, x)};
		for (Metric m : kAllMetrics) {
			const double w = want[static_cast<int>(m)];
			const double err = std::fabs(compute_metric(m, f, x) - w) / std::max(1.0, std::fabs(w));
			worst = std::max(worst, err);
		}
	}
	out.require(worst <= kMetricTol, "max relative deviation " + fmt(worst));
	out.info("5000 metric values, max relative deviation " + fmt(worst));
	return out;
}

// ------------------------------------------------------------------ 2

Outcome combiner_correctness() {
	Outcome out;
	std::mt19937_64 rng(202);
	std::uniform_real_distribution<double> u(-100.0, 100.0);
	std::size_t mismatches = 0;
	std::size_t bound_violations = 0;
	std::size_t rule_violations = 0;
	for (int r = 0; r < 10000; ++r) {
		const std::size_t n = 2 + static_cast<std::size_t>(r % 4);
		std::vector<double> f(n);
		for (auto &v : f) {
			v = u(rng);
		}
		const double x = u(rng);
		const double m = median_combine(f);
		if (m != oracle::sorted_median(f)) {
			++mismatches;
		}
		double worst = 0.0;
		for (double v : f) {
			worst = std::max(worst, std::fabs(v - x));
		}
		if (std::fabs(m - x) > worst) {
			++bound_violations;
		}
		auto s = f;
		std::sort(s.begin(), s.end());
		if (n == 2 && m != (f[0] + f[1]) / 2.0) {
			++rule_violations;
		}
		if (n == 4 && m != (s[1] + s[2]) / 2.0) {
			++rule_violations;
		}
	}
	out.require(mismatches == 0, std::to_string(mismatches) + " oracle mismatches");
	out.require(bound_violations == 0, std::to_string(bound_violations) + " boundedness violations");
	out.require(rule_violations == 0, std::to_string(rule_violations) + " n=2/n=4 rule violations");
	out.info("10000 inputs, sizes 2-5");
	return out;
}

// ------------------------------------------------------------------ 3

Outcome variant_enumeration() {
	Outcome out;
	const std::vector<BaseMethod> bases{BaseMethod::Naive, BaseMethod::Ses, BaseMethod::Ces, BaseMethod::Arfima,
	                                    BaseMethod::Trend};
	const auto variants = enumerate_variants(bases);
	std::map<int, int> sizes;
	for (const auto &v : variants) {
		++sizes[v.size()];
	}
	out.require(variants.size() == 26, "variants " + std::to_string(variants.size()));
	out.require(sizes[2] == 10 && sizes[3] == 10 && sizes[4] == 5 && sizes[5] == 1, "size counts differ");
	out.info(std::to_string(variants.size()) + " variants, sizes " + std::to_string(sizes[2]) + "/" +
	         std::to_string(sizes[3]) + "/" + std::to_string(sizes[4]) + "/" + std::to_string(sizes[5]));
	return out;
}

// ------------------------------------------------------------------ 4

Outcome workflow_counts() {
	Outcome out;
	std::mt19937_64 rng(404);
	const oracle::ToeplitzSampler sampler(oracle::fgn_acvf(0.7, 90));
	AnnualSeries s;
	s.station_id = "W1";
	for (double z : sampler.draw(rng)) {
		s.values.push_back(100.0 + 15.0 * z);
	}
	const auto origins = make_origins(s);
	bool segments_ok = origins.size() == 10;
	for (const auto &o : origins) {
		segments_ok = segments_ok && o.segment.values.size() == 80;
	}
	const auto ev = evaluate_series(s);
	const auto &rep = ev.report;
	std::size_t values = 0;
	std::size_t ri = 0;
	for (std::size_t m = 0; m < rep.methods.size(); ++m) {
		for (std::size_t k = 0; k < rep.metrics.size(); ++k) {
			values += std::isfinite(rep.values[m][k]) ? 1 : 0;
			ri += std::isfinite(rep.relative_improvements[m][k]) ? 1 : 0;
		}
	}
	bool rank_sums_ok = true;
	for (std::size_t k = 0; k < rep.metrics.size(); ++k) {
		double sum = 0.0;
		for (std::size_t m = 0; m < rep.methods.size(); ++m) {
			sum += rep.ranks[m][k];
		}
		rank_sums_ok = rank_sums_ok && sum == 496.0;
	}
	out.require(segments_ok, "origins are not 10 segments of 80 values");
	out.require(ev.base_fits == 50, "base fits " + std::to_string(ev.base_fits));
	out.require(values == 155, "metric values " + std::to_string(values));
	out.require(ri == 90 && rep.relative_improvement_count() == 90, "relative improvements " + std::to_string(ri));
	out.require(rank_sums_ok, "rank sum per metric differs from 496");
	out.info("10 origins x 80 values, 50 fits, " + std::to_string(values) + " metric values, " + std::to_string(ri) +
	         " RIs, rank sums 496");
	return out;
}

// ------------------------------------------------------------------ 5

Outcome clamping() {
	Outcome out;
	// a steady decline that reaches 0.25 at the end of the first training
	// segment, so a line extrapolation crosses zero
	AnnualSeries s;
	s.station_id = "C1";
	for (int t = 0; t < 90; ++t) {
		s.values.push_back(t < 80 ? 99.0 - 1.25 * t : 0.1);
	}
	const auto ev = evaluate_series(s);
	std::size_t negatives = 0;
	bool stored_zero = true;
	for (std::size_t b = 0; b < kBaseMethodCount; ++b) {
		const auto &row = ev.forecasts.row(MethodId::base(static_cast<BaseMethod>(b)));
		for (std::size_t o = 0; o < ev.raw_base_forecasts[b].size(); ++o) {
			if (ev.raw_base_forecasts[b][o] < 0.0) {
				++negatives;
				stored_zero = stored_zero && row[o] == 0.0;
			}
		}
	}
	bool combos_nonnegative = true;
	for (std::size_t m = 0; m < ev.forecasts.methods.size(); ++m) {
		for (double f : ev.forecasts.forecasts[m]) {
			combos_nonnegative = combos_nonnegative && f >= 0.0;
		}
	}
	out.require(negatives > 0, "planted series produced no negative base forecast");
	out.require(stored_zero, "a negative base forecast was not stored as 0");
	out.require(combos_nonnegative, "a stored forecast is negative");
	out.info(std::to_string(negatives) + " negative base forecasts clamped to 0, all 310 stored forecasts >= 0");
	return out;
}

// ------------------------------------------------------------------ 6

Outcome estimator_recovery() {
	Outcome out;
	std::mt19937_64 rng(606);

	std::vector<double> ses_err;
	for (int r = 0; r < 200; ++r) {
		const auto x = oracle::simulate_ses(80, 0.3, 50.0, 1.0, rng);
		ses_err.push_back(std::fabs(fit_ses(x).alpha - 0.3));
	}
	const double ses_med = median_of(ses_err);
	out.require(ses_med <= kSesTol, "SES median |alpha-0.3| " + fmt(ses_med));

	const oracle::ToeplitzSampler frac(oracle::fractional_noise_acvf(0.3, 1000));
	std::vector<double> d_err;
	for (int r = 0; r < 50; ++r) {
		d_err.push_back(std::fabs(fit_arfima(frac.draw(rng)).d - 0.3));
	}
	const double d_med = median_of(d_err);
	out.require(d_med <= kArfimaTol, "ARFIMA median |d-0.3| " + fmt(d_med));

	std::vector<double> wn_err;
	for (int r = 0; r < 50; ++r) {
		wn_err.push_back(std::fabs(fit_arfima(oracle::iid_normal(1000, 0.0, 1.0, rng)).d));
	}
	const double wn_med = median_of(wn_err);
	out.require(wn_med <= kArfimaTol, "ARFIMA white-noise median |d| " + fmt(wn_med));

	const oracle::ToeplitzSampler fgn(oracle::fgn_acvf(0.7, 90));
	std::vector<double> h_err;
	std::vector<double> h_iid;
	for (int r = 0; r < 100; ++r) {
		h_err.push_back(std::fabs(fit_fgn(fgn.draw(rng)).hurst - 0.7));
		h_iid.push_back(std::fabs(fit_fgn(oracle::iid_normal(90, 0.0, 1.0, rng)).hurst - 0.5));
	}
	const double h_med = median_of(h_err);
	const double h_iid_med = median_of(h_iid);
	out.require(h_med <= kHurstTol, "fGn median |H-0.7| " + fmt(h_med));
	out.require(h_iid_med <= kHurstTol, "iid median |H-0.5| " + fmt(h_iid_med));

	out.info("SES |alpha-0.3| " + fmt(ses_med) + " (200 reps), ARFIMA |d-0.3| " + fmt(d_med) +
	         " (50 reps, n=1000), white-noise |d| " + fmt(wn_med) + " (50 reps), fGn |H-0.7| " + fmt(h_med) +
	         ", iid |H-0.5| " + fmt(h_iid_med) + " (100 reps each)");
	return out;
}

// ------------------------------------------------------------------ 7

Outcome feature_sanity() {
	Outcome out;
	std::mt19937_64 rng(707);
	std::vector<double> entropy;
	std::vector<double> trend;
	for (int r = 0; r < 200; ++r) {
		const auto x = oracle::iid_normal(90, 0.0, 1.0, rng);
		entropy.push_back(spectral_entropy(x));
		trend.push_back(trend_strength(x));
	}
	const double entropy_med = median_of(entropy);
	const double trend_med = median_of(trend);

	std::vector<double> sine(90);
	std::vector<double> line(90);
	for (std::size_t t = 0; t < 90; ++t) {
		sine[t] = std::sin(2.0 * std::numbers::pi * 9.0 * static_cast<double>(t) / 90.0);
		line[t] = 3.0 + 0.5 * static_cast<double>(t);
	}
	const double sine_entropy = spectral_entropy(sine);
	const double line_trend = trend_strength(line);
	const double alt = acf1(std::vector<double>{1.0, -1.0, 1.0, -1.0});

	out.require(entropy_med >= kEntropyNoiseMin, "iid entropy median " + fmt(entropy_med));
	out.require(sine_entropy <= kEntropySineMax, "sinusoid entropy " + fmt(sine_entropy));
	out.require(std::fabs(line_trend - 1.0) <= kTrendLineTol, "line trend strength " + fmt(line_trend, 12));
	out.require(trend_med <= kTrendNoiseMax, "iid trend strength median " + fmt(trend_med));
	out.require(alt == -0.75, "alternating acf1 " + fmt(alt, 17));
	out.info("iid entropy median " + fmt(entropy_med) + ", sinusoid entropy " + fmt(sine_entropy) +
	         ", line trend " + fmt(line_trend, 12) + ", iid trend median " + fmt(trend_med) + ", acf1 " + fmt(alt));
	return out;
}

// ------------------------------------------------------------------ 8

Outcome combination_benefit() {
	Outcome out;
	std::mt19937_64 rng(808);
	const oracle::ToeplitzSampler sampler(oracle::fgn_acvf(0.7, 90));
	std::vector<EvaluationReport> reports;
	std::vector<ForecastMatrix> matrices;
	std::map<std::string, Region> regions;
	for (int i = 0; i < 100; ++i) {
		AnnualSeries s;
		char id[16];
		std::snprintf(id, sizeof(id), "F%03d", i);
		s.station_id = id;
		for (double z : sampler.draw(rng)) {
			s.values.push_back(100.0 + 15.0 * z);
		}
		auto ev = evaluate_series(s);
		reports.push_back(std::move(ev.report));
		matrices.push_back(std::move(ev.forecasts));
		regions[id] = i % 2 == 0 ? Region::A : Region::B;
	}
	const auto summary = summarize(reports, regions);

	// independent aggregation: RMSE from the stored forecasts, RI against the
	// Naive row, averaged over stations
	const auto methods = all_methods();
	std::map<MethodId, double> mean_ri;
	double worst_gap = 0.0;
	for (const auto &m : methods) {
		double sum = 0.0;
		for (const auto &fm : matrices) {
			const double bench = oracle::rmse(fm.row(MethodId::base(BaseMethod::Naive)), fm.targets);
			sum += (bench - oracle::rmse(fm.row(m), fm.targets)) / bench;
		}
		mean_ri[m] = sum / static_cast<double>(matrices.size());
		const auto *row = summary.find("Globe", m, Metric::RMSE);
		const double reported = m.is_base() && m.base_method() == BaseMethod::Naive ? 0.0
		                        : row                                              ? row->mean_relative_improvement
		                                                                           : std::nan("");
		worst_gap = std::max(worst_gap, std::fabs(reported - mean_ri[m]));
	}
	out.require(worst_gap <= kAggregationTol, "harness vs independent aggregation gap " + fmt(worst_gap));

	std::size_t checked = 0;
	std::size_t violations = 0;
	for (const auto &m : methods) {
		if (m.size() < 3) {
			continue;
		}
		double floor = std::numeric_limits<double>::infinity();
		for (BaseMethod b : m.members()) {
			floor = std::min(floor, mean_ri[MethodId::base(b)]);
		}
		++checked;
		if (mean_ri[m] < floor) {
			++violations;
			out.require(false, m.code() + " mean RI " + fmt(mean_ri[m]) + " < base minimum " + fmt(floor));
		}
	}

	const auto pred = predictability_summary(reports, regions);
	const double best_mean = pred.by_region.at("Globe").mean;
	double best_single = -std::numeric_limits<double>::infinity();
	MethodId best_single_id = methods.front();
	for (const auto &[m, v] : mean_ri) {
		if (v > best_single) {
			best_single = v;
			best_single_id = m;
		}
	}
	out.require(best_mean >= best_single, "best-per-station mean RI " + fmt(best_mean) + " < " + fmt(best_single));
	out.info(std::to_string(checked - violations) + "/" + std::to_string(checked) +
	         " size>=3 combiners at or above their weakest base; best-per-station mean RI " + fmt(best_mean) +
	         " vs best single method " + best_single_id.code() + " at " + fmt(best_single) +
	         "; aggregation gap " + fmt(worst_gap));
	return out;
}

// ------------------------------------------------------------------ 9

int run_cli(const std::string &args) {
	const std::string cmd = std::string(MEDCAST_CLI_PATH) + " " + args + " > /dev/null 2>&1";
	const int status = std::system(cmd.c_str());
	return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &path) {
	std::ifstream in(path, std::ios::binary);
	std::stringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

Outcome determinism() {
	Outcome out;
	const fs::path data = MEDCAST_SYNTHETIC_DIR;
	const fs::path a = fs::temp_directory_path() / "medcast_acceptance_run_a";
	const fs::path b = fs::temp_directory_path() / "medcast_acceptance_run_b";
	fs::remove_all(a);
	fs::remove_all(b);
	const std::string common = "run --data " + (data / "series.csv").string() + " --meta " +
	                           (data / "meta.csv").string() + " --seed 20231 --json --out ";
	const int status_a = run_cli(common + a.string() + " --jobs 1");
	const int status_b = run_cli(common + b.string() + " --jobs 4");
	out.require(status_a == 0 && status_b == 0,
	            "exit status " + std::to_string(status_a) + "/" + std::to_string(status_b));
	std::size_t files = 0;
	std::size_t differing = 0;
	if (status_a == 0 && status_b == 0) {
		for (const auto &entry : fs::directory_iterator(a)) {
			++files;
			const auto other = b / entry.path().filename();
			if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
				++differing;
				out.require(false, entry.path().filename().string() + " differs");
			}
		}
		std::size_t files_b = 0;
		for ([[maybe_unused]] const auto &entry : fs::directory_iterator(b)) {
			++files_b;
		}
		out.require(files == files_b, "artifact sets differ");
		out.require(files > 0, "no artifacts written");
	}
	out.info(std::to_string(files - differing) + "/" + std::to_string(files) +
	         " artifacts byte-identical between --jobs 1 and --jobs 4");
	fs::remove_all(a);
	fs::remove_all(b);
	return out;
}

// ------------------------------------------------------------------ 10

Outcome regression_oracle() {
	Outcome out;
	std::mt19937_64 rng(1010);
	std::uniform_int_distribution<int> len(2, 100);
	std::uniform_real_distribution<double> slope(-5.0, 5.0);
	double worst = 0.0;
	for (int r = 0; r < 1000; ++r) {
		const auto n = static_cast<std::size_t>(len(rng));
		const auto x = oracle::iid_normal(n, 0.0, 3.0, rng);
		auto y = oracle::iid_normal(n, 1.0, 2.0, rng);
		const double b = slope(rng);
		for (std::size_t i = 0; i < n; ++i) {
			y[i] += b * x[i];
		}
		const auto got = linear_regression(x, y);
		const auto want = oracle::normal_equations(x, y);
		worst = std::max({worst, std::fabs(got.slope - want.slope), std::fabs(got.intercept - want.intercept),
		                  std::fabs(got.pearson_r - want.r)});
	}
	out.require(worst <= kRegressionTol, "max deviation " + fmt(worst));

	// planted RI = -2 CV + noise, pooled over 30 methods per station
	std::normal_distribution<double> noise(0.0, 0.05);
	std::uniform_real_distribution<double> cv(0.1, 0.8);
	FeatureTable features;
	std::vector<EvaluationReport> reports;
	const auto methods = all_methods();
	for (int i = 0; i < 50; ++i) {
		const std::string id = "P" + std::to_string(100 + i);
		const double c = cv(rng);
		features[id].cv = c;
		EvaluationReport rep;
		rep.station_id = id;
		rep.methods = methods;
		rep.metrics = {Metric::RMSE};
		for (std::size_t m = 0; m < methods.size(); ++m) {
			const double ri = m == 0 ? std::nan("") : 0.9 - 2.0 * c + noise(rng);
			rep.values.push_back({m == 0 ? 10.0 : 10.0 * (1.0 - ri)});
			rep.ranks.push_back({1.0});
			rep.relative_improvements.push_back({ri});
		}
		reports.push_back(std::move(rep));
	}
	const auto fit = ri_vs_feature(reports, features, Feature::CV);
	out.require(std::fabs(fit.slope + 2.0) <= kPlantedSlopeTol, "planted slope " + fmt(fit.slope));
	out.require(fit.n == 30 * 50, "pooled points " + std::to_string(fit.n));
	out.info("1000 datasets, max deviation " + fmt(worst) + "; planted slope -2 recovered as " + fmt(fit.slope) +
	         " from " + std::to_string(fit.n) + " points");
	return out;
}

} // namespace

int main() {
	int failures = 0;
	failures += run_criterion(1, "metric oracle equivalence", 5.0, metric_oracle);
	failures += run_criterion(2, "combiner correctness", 5.0, combiner_correctness);
	failures += run_criterion(3, "variant enumeration", 0.0, variant_enumeration);
	failures += run_criterion(4, "workflow counts", 0.0, workflow_counts);
	failures += run_criterion(5, "clamping and nonnegativity", 0.0, clamping);
	failures += run_criterion(6, "estimator recovery", 600.0, estimator_recovery);
	failures += run_criterion(7, "feature sanity", 0.0, feature_sanity);
	failures += run_criterion(8, "combination benefit", 900.0, combination_benefit);
	failures += run_criterion(9, "determinism", 0.0, determinism);
	failures += run_criterion(10, "regression oracle", 0.0, regression_oracle);
	std::printf("%d of 10 criteria passed\n", 10 - failures);
	return failures == 0 ? 0 : 1;
}
