#pragma once

#include "medcast/accuracy.hpp"
#include "medcast/base_methods.hpp"
#include "medcast/combine.hpp"
#include "medcast/diagnostics.hpp"
#include "medcast/series.hpp"

#include <array>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace medcast {

inline constexpr std::size_t kOriginCount = 10;

struct Origin {
	TrainingSegment segment;
	double target = 0.0;
};

/// Segment i (0-based) covers values i .. i + train_len - 1 and targets value
/// i + train_len. Throws std::invalid_argument if the series is shorter than
/// train_len + n_origins.
std::vector<Origin> make_origins(const AnnualSeries &series, std::size_t n_origins = kOriginCount,
                                 std::size_t train_len = kTrainingLength);

/// One-step base forecaster; replaceable for testing.
using BaseForecaster = std::function<double(BaseMethod, std::span<const double>, Diagnostics *)>;

struct EvaluationOptions {
	std::size_t n_origins = kOriginCount;
	std::size_t train_len = kTrainingLength;
	std::vector<MethodId> methods = all_methods(); ///< the Naive benchmark is always added
	std::vector<Metric> metrics{kAllMetrics.begin(), kAllMetrics.end()};
	BaseForecaster forecaster; ///< empty: forecast_one_step
};

/// Forecasts after clamping: rows follow `methods`, columns follow origins.
struct ForecastMatrix {
	std::string station_id;
	std::vector<MethodId> methods;
	std::vector<double> targets;
	std::vector<std::vector<double>> forecasts;

	/// Throws std::out_of_range for a method not in the matrix.
	const std::vector<double> &row(const MethodId &method) const;
};

/// Per-station accuracy table. Entries are indexed [method][metric] in the
/// order of `methods` and `metrics`. Ranks average over ties. NaN marks
/// undefined entries: percentage metrics with a zero target, and relative
/// improvements that are not computed (benchmark row, percentage metrics) or
/// undefined (zero benchmark metric).
struct EvaluationReport {
	std::string station_id;
	std::vector<MethodId> methods;
	std::vector<Metric> metrics;
	std::vector<std::vector<double>> values;
	std::vector<std::vector<double>> ranks;
	std::vector<std::vector<double>> relative_improvements;

	std::size_t method_index(const MethodId &method) const;
	std::size_t metric_index(Metric metric) const;
	double value(const MethodId &method, Metric metric) const;
	double rank(const MethodId &method, Metric metric) const;
	double relative_improvement(const MethodId &method, Metric metric) const;
	/// Number of (non-benchmark method, scale-dependent metric) pairs.
	std::size_t relative_improvement_count() const;
};

struct SeriesEvaluation {
	ForecastMatrix forecasts;
	EvaluationReport report;
	/// Base forecasts before clamping, [base method][origin].
	std::array<std::vector<double>, kBaseMethodCount> raw_base_forecasts;
	std::size_t base_fits = 0;
	std::size_t clamped = 0;
	Diagnostics diagnostics;
};

/// Steps 1-7 for one station. Never throws for a valid series: base-fit
/// failures fall back to the Naive forecast and are logged.
SeriesEvaluation evaluate_series(const AnnualSeries &series, const EvaluationOptions &options = {});

/// Ranks (1 = smallest) with ties sharing the mean of the covered positions.
/// Throws std::invalid_argument on non-finite input.
std::vector<double> rank_methods(std::span<const double> values);

struct SummaryRow {
	std::string region; ///< "Globe", "A" or "B"
	MethodId method = MethodId::base(BaseMethod::Naive);
	Metric metric = Metric::RMSE;
	std::size_t stations = 0;
	double mean_rank = 0.0;
	double mean_relative_improvement = 0.0; ///< NaN for percentage metrics
	double mean_value = 0.0;                ///< mean metric value (reported for percentage metrics)
	std::array<std::size_t, 3> top_counts{}; ///< ranks <= 5, 10, 15
};

inline constexpr std::array<std::size_t, 3> kTopK{5, 10, 15};

struct SummaryReport {
	std::vector<SummaryRow> rows;
	Diagnostics diagnostics;

	const SummaryRow *find(std::string_view region, const MethodId &method, Metric metric) const;
};

/// Aggregates per (region, method, metric). Averages skip NaN entries. Regions
/// without stations are omitted with a diagnostic. Throws
/// std::invalid_argument on an empty report list or inconsistent reports.
SummaryReport summarize(std::span<const EvaluationReport> reports, const std::map<std::string, Region> &regions);

} // namespace medcast
