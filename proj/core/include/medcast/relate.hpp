#pragma once

#include "medcast/backtest.hpp"
#include "medcast/diagnostics.hpp"
#include "medcast/features.hpp"
#include "medcast/series.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace medcast {

struct RegressionResult {
	double slope = 0.0;
	double intercept = 0.0;
	double pearson_r = 0.0;
	std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope x. Throws std::invalid_argument
/// on a length mismatch, fewer than 2 points, non-finite input, or Var(x) = 0.
/// Var(y) = 0 gives slope 0 and r = 0 with a diagnostic.
RegressionResult linear_regression(std::span<const double> x, std::span<const double> y,
                                   Diagnostics *diag = nullptr);

using FeatureTable = std::map<std::string, SeriesFeatures>;

using CorrelationMatrix = std::array<std::array<double, 5>, 5>;

/// Pairwise Pearson correlations between the five features, indexed in
/// kAllFeatures order; unit diagonal. A zero-variance column gets zero
/// off-diagonal entries and a diagnostic. Throws std::invalid_argument with
/// fewer than 2 stations.
CorrelationMatrix correlation_matrix(const FeatureTable &features, Diagnostics *diag = nullptr);

/// (x, y) points behind an RI regression: one per station and non-benchmark
/// method with a defined RMSE relative improvement.
struct RiPoint {
	std::string station_id;
	MethodId method = MethodId::base(BaseMethod::Naive);
	double x = 0.0;
	double ri = 0.0;
};

/// Pools the RMSE relative improvements of all non-benchmark methods against
/// the station's feature value. Stations missing from `features` are skipped
/// with a diagnostic. Throws std::invalid_argument if fewer than 2 points
/// remain or the feature has zero variance.
RegressionResult ri_vs_feature(std::span<const EvaluationReport> reports, const FeatureTable &features, Feature feature,
                               Diagnostics *diag = nullptr, std::vector<RiPoint> *points = nullptr);

/// The same regression run separately for each non-benchmark method.
std::map<MethodId, RegressionResult> ri_vs_feature_per_method(std::span<const EvaluationReport> reports,
                                                              const FeatureTable &features, Feature feature,
                                                              Diagnostics *diag = nullptr);

struct GroupSummary {
	std::string label;
	std::size_t count = 0;
	double mean = 0.0;
	double median = 0.0;
	double q1 = 0.0;
	double q3 = 0.0;
};

struct CovariateAnalysis {
	std::string covariate;
	bool categorical = false;
	std::optional<RegressionResult> regression; ///< numeric covariates
	std::vector<GroupSummary> groups;           ///< categorical covariates, sorted by label
};

/// Pools RMSE relative improvements against a station covariate. Besides the
/// covariates in StationMeta::numeric / categorical, "longitude", "latitude"
/// and "country" are recognised. Throws std::invalid_argument if no station has
/// the covariate or a numeric covariate has zero variance.
CovariateAnalysis ri_vs_covariate(std::span<const EvaluationReport> reports,
                                  const std::map<std::string, StationMeta> &meta, const std::string &covariate,
                                  Diagnostics *diag = nullptr);

/// Type-7 sample quantile (linear interpolation), p in [0, 1].
double sample_quantile(std::vector<double> values, double p);

struct DistributionSummary {
	std::size_t n = 0;
	double mean = 0.0;
	double median = 0.0;
	double q1 = 0.0;
	double q3 = 0.0;
	double min = 0.0;
	double max = 0.0;
};

/// Summarises `values`; throws std::invalid_argument if empty.
DistributionSummary describe(std::span<const double> values);

struct StationPredictability {
	std::string station_id;
	Region region = Region::Other;
	MethodId best = MethodId::base(BaseMethod::Naive);
	double best_rmse = 0.0;
	double benchmark_rmse = 0.0;
	double best_relative_improvement = 0.0;
	bool benchmark_best = false;
};

struct PredictabilitySummary {
	std::vector<StationPredictability> stations;
	/// "Globe", "A", "B" (regions without stations are omitted).
	std::map<std::string, DistributionSummary> by_region;
	std::map<std::string, std::size_t> benchmark_best_count;
	std::map<MethodId, std::size_t> best_method_counts;
};

/// Best method by RMSE per station (ties: the smallest MethodId), its RI
/// against the benchmark and regional summaries. Stations whose benchmark RMSE
/// is zero get RI 0 with a diagnostic. Throws std::invalid_argument for an
/// empty report list.
PredictabilitySummary predictability_summary(std::span<const EvaluationReport> reports,
                                             const std::map<std::string, Region> &regions,
                                             Diagnostics *diag = nullptr);

} // namespace medcast
