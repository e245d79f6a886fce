#pragma once

// Hand-built EvaluationReports for aggregation tests: RMSE only, ranks and
// relative improvements computed directly from the supplied values.

#include "medcast/backtest.hpp"

#include <limits>
#include <string>
#include <vector>

namespace testing_support {

inline medcast::EvaluationReport rmse_report(const std::string &station_id, const std::vector<double> &rmse) {
	using namespace medcast;
	EvaluationReport r;
	r.station_id = station_id;
	r.methods = all_methods();
	r.metrics = {Metric::RMSE};
	const auto ranks = rank_methods(rmse);
	for (std::size_t m = 0; m < rmse.size(); ++m) {
		r.values.push_back({rmse[m]});
		r.ranks.push_back({ranks[m]});
		r.relative_improvements.push_back({m == 0 ? std::numeric_limits<double>::quiet_NaN()
		                                          : (rmse[0] - rmse[m]) / rmse[0]});
	}
	return r;
}

/// RMSE values chosen so that every non-benchmark method has relative
/// improvement `ri[m - 1]` against a benchmark RMSE of `bench`.
inline medcast::EvaluationReport report_from_ri(const std::string &station_id, double bench,
                                                const std::vector<double> &ri) {
	std::vector<double> rmse{bench};
	for (double v : ri) {
		rmse.push_back(bench * (1.0 - v));
	}
	return rmse_report(station_id, rmse);
}

} // namespace testing_support
