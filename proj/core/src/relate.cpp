#include "medcast/relate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace medcast {

namespace {

const MethodId kBenchmark = MethodId::base(BaseMethod::Naive);

double mean_of(std::span<const double> v) {
	double s = 0.0;
	for (double x : v) {
		s += x;
	}
	return s / static_cast<double>(v.size());
}

double pearson(std::span<const double> x, std::span<const double> y, double &sxx, double &syy) {
	const double mx = mean_of(x);
	const double my = mean_of(y);
	double sxy = 0.0;
	sxx = 0.0;
	syy = 0.0;
	for (std::size_t i = 0; i < x.size(); ++i) {
		const double dx = x[i] - mx;
		const double dy = y[i] - my;
		sxx += dx * dx;
		syy += dy * dy;
		sxy += dx * dy;
	}
	if (sxx <= 0.0 || syy <= 0.0) {
		return 0.0;
	}
	return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// all values equal, judged relative to their magnitude
bool is_constant(std::span<const double> v) {
	const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
	return *hi - *lo <= 1e-14 * std::max(std::abs(*lo), std::abs(*hi));
}

std::size_t rmse_index(const EvaluationReport &report) {
	return report.metric_index(Metric::RMSE);
}

void collect_points(std::span<const EvaluationReport> reports, const std::map<std::string, double> &x_by_station,
                    Diagnostics *diag, std::vector<RiPoint> &points) {
	for (const auto &report : reports) {
		const auto it = x_by_station.find(report.station_id);
		if (it == x_by_station.end()) {
			note(diag, report.station_id + ": no explanatory value; station skipped");
			continue;
		}
		const std::size_t k = rmse_index(report);
		for (std::size_t m = 0; m < report.methods.size(); ++m) {
			if (report.methods[m] == kBenchmark) {
				continue;
			}
			const double ri = report.relative_improvements[m][k];
			if (std::isnan(ri)) {
				continue;
			}
			points.push_back({report.station_id, report.methods[m], it->second, ri});
		}
	}
}

RegressionResult regress_points(const std::vector<RiPoint> &points, Diagnostics *diag) {
	std::vector<double> x;
	std::vector<double> y;
	x.reserve(points.size());
	y.reserve(points.size());
	for (const auto &p : points) {
		x.push_back(p.x);
		y.push_back(p.ri);
	}
	return linear_regression(x, y, diag);
}

} // namespace

RegressionResult linear_regression(std::span<const double> x, std::span<const double> y, Diagnostics *diag) {
	if (x.size() != y.size()) {
		throw std::invalid_argument("linear_regression: length mismatch");
	}
	if (x.size() < 2) {
		throw std::invalid_argument("linear_regression: need at least 2 points");
	}
	for (std::size_t i = 0; i < x.size(); ++i) {
		if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
			throw std::invalid_argument("linear_regression: non-finite value");
		}
	}
	if (is_constant(x)) {
		throw std::invalid_argument("linear_regression: explanatory variable has zero variance");
	}
	RegressionResult out;
	out.n = x.size();
	const double mx = mean_of(x);
	const double my = mean_of(y);
	if (is_constant(y)) {
		note(diag, "linear_regression: response has zero variance; r reported as 0");
		out.slope = 0.0;
		out.intercept = my;
		out.pearson_r = 0.0;
		return out;
	}
	double sxx = 0.0;
	double sxy = 0.0;
	for (std::size_t i = 0; i < x.size(); ++i) {
		sxx += (x[i] - mx) * (x[i] - mx);
		sxy += (x[i] - mx) * (y[i] - my);
	}
	out.slope = sxy / sxx;
	out.intercept = my - out.slope * mx;
	double a = 0.0;
	double b = 0.0;
	out.pearson_r = pearson(x, y, a, b);
	return out;
}

CorrelationMatrix correlation_matrix(const FeatureTable &features, Diagnostics *diag) {
	if (features.size() < 2) {
		throw std::invalid_argument("correlation_matrix: need at least 2 stations");
	}
	std::array<std::vector<double>, 5> cols;
	for (const auto &[id, f] : features) {
		for (std::size_t j = 0; j < kAllFeatures.size(); ++j) {
			cols[j].push_back(feature_value(f, kAllFeatures[j]));
		}
	}
	std::array<bool, 5> flat{};
	for (std::size_t j = 0; j < 5; ++j) {
		flat[j] = is_constant(cols[j]);
		if (flat[j]) {
			note(diag, "correlation_matrix: " + std::string(feature_name(kAllFeatures[j])) +
			               " has zero variance; its correlations set to 0");
		}
	}
	CorrelationMatrix out{};
	for (std::size_t i = 0; i < 5; ++i) {
		out[i][i] = 1.0;
		for (std::size_t j = i + 1; j < 5; ++j) {
			double a = 0.0;
			double b = 0.0;
			const double r = (flat[i] || flat[j]) ? 0.0 : pearson(cols[i], cols[j], a, b);
			out[i][j] = r;
			out[j][i] = r;
		}
	}
	return out;
}

RegressionResult ri_vs_feature(std::span<const EvaluationReport> reports, const FeatureTable &features, Feature feature,
                               Diagnostics *diag, std::vector<RiPoint> *points) {
	std::map<std::string, double> x;
	for (const auto &[id, f] : features) {
		x.emplace(id, feature_value(f, feature));
	}
	std::vector<RiPoint> pts;
	collect_points(reports, x, diag, pts);
	const auto result = regress_points(pts, diag);
	if (points) {
		*points = std::move(pts);
	}
	return result;
}

std::map<MethodId, RegressionResult> ri_vs_feature_per_method(std::span<const EvaluationReport> reports,
                                                              const FeatureTable &features, Feature feature,
                                                              Diagnostics *diag) {
	std::map<std::string, double> x;
	for (const auto &[id, f] : features) {
		x.emplace(id, feature_value(f, feature));
	}
	std::vector<RiPoint> pts;
	collect_points(reports, x, diag, pts);
	std::map<MethodId, std::vector<RiPoint>> grouped;
	for (const auto &p : pts) {
		grouped[p.method].push_back(p);
	}
	std::map<MethodId, RegressionResult> out;
	for (const auto &[method, group] : grouped) {
		out.emplace(method, regress_points(group, diag));
	}
	return out;
}

double sample_quantile(std::vector<double> values, double p) {
	if (values.empty()) {
		throw std::invalid_argument("sample_quantile: empty input");
	}
	if (!(p >= 0.0 && p <= 1.0)) {
		throw std::invalid_argument("sample_quantile: p outside [0, 1]");
	}
	std::sort(values.begin(), values.end());
	const double h = p * static_cast<double>(values.size() - 1);
	const auto lo = static_cast<std::size_t>(std::floor(h));
	const std::size_t hi = std::min(lo + 1, values.size() - 1);
	return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

DistributionSummary describe(std::span<const double> values) {
	if (values.empty()) {
		throw std::invalid_argument("describe: empty input");
	}
	std::vector<double> v(values.begin(), values.end());
	DistributionSummary s;
	s.n = v.size();
	s.mean = mean_of(v);
	s.median = sample_quantile(v, 0.5);
	s.q1 = sample_quantile(v, 0.25);
	s.q3 = sample_quantile(v, 0.75);
	const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
	s.min = *lo;
	s.max = *hi;
	return s;
}

CovariateAnalysis ri_vs_covariate(std::span<const EvaluationReport> reports,
                                  const std::map<std::string, StationMeta> &meta, const std::string &covariate,
                                  Diagnostics *diag) {
	CovariateAnalysis out;
	out.covariate = covariate;

	std::map<std::string, double> numeric;
	std::map<std::string, std::string> categorical;
	for (const auto &[id, m] : meta) {
		if (covariate == "longitude") {
			numeric.emplace(id, m.longitude);
		} else if (covariate == "latitude") {
			numeric.emplace(id, m.latitude);
		} else if (covariate == "country") {
			if (m.country) {
				categorical.emplace(id, *m.country);
			}
		} else if (const auto n = m.numeric.find(covariate); n != m.numeric.end()) {
			numeric.emplace(id, n->second);
		} else if (const auto c = m.categorical.find(covariate); c != m.categorical.end()) {
			categorical.emplace(id, c->second);
		}
	}
	if (numeric.empty() && categorical.empty()) {
		throw std::invalid_argument("ri_vs_covariate: covariate '" + covariate + "' is missing for every station");
	}
	if (!numeric.empty() && !categorical.empty()) {
		throw std::invalid_argument("ri_vs_covariate: covariate '" + covariate + "' mixes numeric and text values");
	}

	if (!numeric.empty()) {
		std::vector<RiPoint> pts;
		collect_points(reports, numeric, diag, pts);
		out.regression = regress_points(pts, diag);
		return out;
	}

	out.categorical = true;
	std::map<std::string, std::vector<double>> by_class;
	for (const auto &report : reports) {
		const auto it = categorical.find(report.station_id);
		if (it == categorical.end()) {
			note(diag, report.station_id + ": covariate '" + covariate + "' missing; station skipped");
			continue;
		}
		const std::size_t k = rmse_index(report);
		for (std::size_t m = 0; m < report.methods.size(); ++m) {
			const double ri = report.relative_improvements[m][k];
			if (report.methods[m] == kBenchmark || std::isnan(ri)) {
				continue;
			}
			by_class[it->second].push_back(ri);
		}
	}
	if (by_class.empty()) {
		throw std::invalid_argument("ri_vs_covariate: no relative improvements for covariate '" + covariate + "'");
	}
	for (const auto &[label, ris] : by_class) {
		const auto d = describe(ris);
		out.groups.push_back({label, d.n, d.mean, d.median, d.q1, d.q3});
	}
	return out;
}

PredictabilitySummary predictability_summary(std::span<const EvaluationReport> reports,
                                             const std::map<std::string, Region> &regions, Diagnostics *diag) {
	if (reports.empty()) {
		throw std::invalid_argument("predictability_summary: no reports");
	}
	PredictabilitySummary out;
	std::map<std::string, std::vector<double>> ri_by_region;
	for (const auto &report : reports) {
		const std::size_t k = rmse_index(report);
		const std::size_t bench = report.method_index(kBenchmark);
		// methods are stored in MethodId order, so the first minimum is the smallest id
		std::size_t best = 0;
		std::size_t tied = 0;
		for (std::size_t m = 0; m < report.methods.size(); ++m) {
			const double v = report.values[m][k];
			if (v < report.values[best][k]) {
				best = m;
				tied = 0;
			} else if (v == report.values[best][k] && m != best) {
				++tied;
			}
		}
		if (tied > 0) {
			note(diag, report.station_id + ": " + std::to_string(tied + 1) + " methods tie for best RMSE; chose " +
			               report.methods[best].code());
		}
		StationPredictability sp;
		sp.station_id = report.station_id;
		const auto reg = regions.find(report.station_id);
		sp.region = reg == regions.end() ? Region::Other : reg->second;
		sp.best = report.methods[best];
		sp.best_rmse = report.values[best][k];
		sp.benchmark_rmse = report.values[bench][k];
		sp.benchmark_best = sp.benchmark_rmse == sp.best_rmse;
		if (sp.benchmark_rmse == 0.0) {
			note(diag, report.station_id + ": benchmark RMSE is zero; best RI set to 0");
			sp.best_relative_improvement = 0.0;
		} else {
			sp.best_relative_improvement = relative_improvement(sp.benchmark_rmse, sp.best_rmse);
		}
		ri_by_region["Globe"].push_back(sp.best_relative_improvement);
		if (sp.region != Region::Other) {
			ri_by_region[std::string(to_string(sp.region))].push_back(sp.best_relative_improvement);
		}
		if (sp.benchmark_best) {
			++out.benchmark_best_count["Globe"];
			if (sp.region != Region::Other) {
				++out.benchmark_best_count[std::string(to_string(sp.region))];
			}
		}
		++out.best_method_counts[sp.best];
		out.stations.push_back(std::move(sp));
	}
	for (const auto &[region, ris] : ri_by_region) {
		out.by_region.emplace(region, describe(ris));
		out.benchmark_best_count.try_emplace(region, 0);
	}
	return out;
}

} // namespace medcast
