#include "medcast/accuracy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace medcast {

std::string_view metric_name(Metric metric) {
	switch (metric) {
	case Metric::MAE:
		return "MAE";
	case Metric::MAPE:
		return "MAPE";
	case Metric::MdAE:
		return "MdAE";
	case Metric::MdAPE:
		return "MdAPE";
	case Metric::RMSE:
		return "RMSE";
	}
	return "?";
}

std::optional<Metric> parse_metric(std::string_view name) {
	for (Metric m : kAllMetrics) {
		if (metric_name(m) == name) {
			return m;
		}
	}
	return std::nullopt;
}

double sample_median(std::span<const double> values) {
	if (values.empty()) {
		throw std::invalid_argument("sample_median: empty input");
	}
	std::vector<double> v(values.begin(), values.end());
	const std::size_t mid = v.size() / 2;
	std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
	const double upper = v[mid];
	if (v.size() % 2 == 1) {
		return upper;
	}
	const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
	return 0.5 * (lower + upper);
}

double compute_metric(Metric metric, std::span<const double> f, std::span<const double> x) {
	if (f.size() != x.size()) {
		throw std::invalid_argument("compute_metric: forecasts and targets differ in length (" +
		                            std::to_string(f.size()) + " vs " + std::to_string(x.size()) + ")");
	}
	if (f.empty()) {
		throw std::invalid_argument("compute_metric: empty input");
	}
	const std::size_t n = f.size();
	const bool percent = !is_scale_dependent(metric);
	std::vector<double> err(n);
	for (std::size_t i = 0; i < n; ++i) {
		if (percent) {
			if (x[i] == 0.0) {
				throw std::invalid_argument(std::string(metric_name(metric)) + ": zero target at index " +
				                            std::to_string(i));
			}
			err[i] = std::abs(100.0 * (f[i] - x[i]) / x[i]);
		} else {
			err[i] = std::abs(f[i] - x[i]);
		}
	}
	switch (metric) {
	case Metric::MAE:
	case Metric::MAPE: {
		double s = 0.0;
		for (double e : err) {
			s += e;
		}
		return s / static_cast<double>(n);
	}
	case Metric::MdAE:
	case Metric::MdAPE:
		return sample_median(err);
	case Metric::RMSE: {
		double s = 0.0;
		for (double e : err) {
			s += e * e;
		}
		return std::sqrt(s / static_cast<double>(n));
	}
	}
	throw std::logic_error("unknown metric");
}

double relative_improvement(double benchmark, double method) {
	if (benchmark == 0.0) {
		throw std::domain_error("benchmark metric zero; improvement undefined");
	}
	return (benchmark - method) / benchmark;
}

} // namespace medcast
