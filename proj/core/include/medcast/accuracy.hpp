#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace medcast {

enum class Metric { MAE = 0, MAPE = 1, MdAE = 2, MdAPE = 3, RMSE = 4 };

inline constexpr std::array<Metric, 5> kAllMetrics{Metric::MAE, Metric::MAPE, Metric::MdAE, Metric::MdAPE,
                                                   Metric::RMSE};

std::string_view metric_name(Metric metric);
std::optional<Metric> parse_metric(std::string_view name);

/// MAE, MdAE and RMSE are in data units; MAPE and MdAPE are percentages.
constexpr bool is_scale_dependent(Metric metric) {
	return metric == Metric::MAE || metric == Metric::MdAE || metric == Metric::RMSE;
}

/// Accuracy of forecasts `f` against targets `x`. Throws std::invalid_argument
/// on a length mismatch, empty input, or (percentage metrics) a zero target,
/// naming the offending index.
double compute_metric(Metric metric, std::span<const double> f, std::span<const double> x);

/// (benchmark - method) / benchmark as a fraction. Throws std::domain_error
/// when the benchmark value is zero.
double relative_improvement(double benchmark, double method);

/// Median with the two-middle mean for even counts. Copies its input.
double sample_median(std::span<const double> values);

} // namespace medcast
