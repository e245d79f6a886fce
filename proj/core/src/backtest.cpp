#include "medcast/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace medcast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const MethodId kBenchmark = MethodId::base(BaseMethod::Naive);

std::vector<MethodId> normalized_methods(std::vector<MethodId> methods) {
	methods.push_back(kBenchmark);
	std::sort(methods.begin(), methods.end());
	methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
	return methods;
}

std::vector<Metric> normalized_metrics(std::vector<Metric> metrics) {
	if (metrics.empty()) {
		throw std::invalid_argument("evaluate_series: no metrics requested");
	}
	std::sort(metrics.begin(), metrics.end());
	metrics.erase(std::unique(metrics.begin(), metrics.end()), metrics.end());
	return metrics;
}

double mean_skipping_nan(const std::vector<double> &v) {
	double s = 0.0;
	std::size_t k = 0;
	for (double x : v) {
		if (!std::isnan(x)) {
			s += x;
			++k;
		}
	}
	return k ? s / static_cast<double>(k) : kNaN;
}

} // namespace

std::vector<Origin> make_origins(const AnnualSeries &series, std::size_t n_origins, std::size_t train_len) {
	if (n_origins == 0 || train_len == 0) {
		throw std::invalid_argument("make_origins: n_origins and train_len must be positive");
	}
	if (series.values.size() < train_len + n_origins) {
		throw std::invalid_argument("make_origins: series of length " + std::to_string(series.values.size()) +
		                            " is shorter than " + std::to_string(train_len + n_origins));
	}
	std::vector<Origin> out;
	out.reserve(n_origins);
	for (std::size_t i = 0; i < n_origins; ++i) {
		Origin o;
		o.segment.origin = i;
		o.segment.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(i),
		                        series.values.begin() + static_cast<std::ptrdiff_t>(i + train_len));
		o.target = series.values[i + train_len];
		out.push_back(std::move(o));
	}
	return out;
}

const std::vector<double> &ForecastMatrix::row(const MethodId &method) const {
	const auto it = std::lower_bound(methods.begin(), methods.end(), method);
	if (it == methods.end() || !(*it == method)) {
		throw std::out_of_range("ForecastMatrix: method " + method.code() + " not evaluated");
	}
	return forecasts[static_cast<std::size_t>(it - methods.begin())];
}

std::size_t EvaluationReport::method_index(const MethodId &method) const {
	const auto it = std::lower_bound(methods.begin(), methods.end(), method);
	if (it == methods.end() || !(*it == method)) {
		throw std::out_of_range("EvaluationReport: method " + method.code() + " not evaluated");
	}
	return static_cast<std::size_t>(it - methods.begin());
}

std::size_t EvaluationReport::metric_index(Metric metric) const {
	const auto it = std::find(metrics.begin(), metrics.end(), metric);
	if (it == metrics.end()) {
		throw std::out_of_range("EvaluationReport: metric " + std::string(metric_name(metric)) + " not evaluated");
	}
	return static_cast<std::size_t>(it - metrics.begin());
}

double EvaluationReport::value(const MethodId &method, Metric metric) const {
	return values[method_index(method)][metric_index(metric)];
}

double EvaluationReport::rank(const MethodId &method, Metric metric) const {
	return ranks[method_index(method)][metric_index(metric)];
}

double EvaluationReport::relative_improvement(const MethodId &method, Metric metric) const {
	return relative_improvements[method_index(method)][metric_index(metric)];
}

std::size_t EvaluationReport::relative_improvement_count() const {
	const auto scale = static_cast<std::size_t>(std::count_if(metrics.begin(), metrics.end(), is_scale_dependent));
	return (methods.size() - 1) * scale;
}

std::vector<double> rank_methods(std::span<const double> values) {
	const std::size_t n = values.size();
	for (double v : values) {
		if (!std::isfinite(v)) {
			throw std::invalid_argument("rank_methods: non-finite value");
		}
	}
	std::vector<std::size_t> order(n);
	std::iota(order.begin(), order.end(), std::size_t{0});
	std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
	std::vector<double> ranks(n);
	std::size_t i = 0;
	while (i < n) {
		std::size_t j = i;
		while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
			++j;
		}
		const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
		for (std::size_t k = i; k <= j; ++k) {
			ranks[order[k]] = avg;
		}
		i = j + 1;
	}
	return ranks;
}

SeriesEvaluation evaluate_series(const AnnualSeries &series, const EvaluationOptions &options) {
	SeriesEvaluation out;
	const auto origins = make_origins(series, options.n_origins, options.train_len);
	const auto methods = normalized_methods(options.methods);
	const auto metrics = normalized_metrics(options.metrics);
	const BaseForecaster forecaster =
	    options.forecaster ? options.forecaster
	                       : BaseForecaster([](BaseMethod m, std::span<const double> x, Diagnostics *d) {
		                         return forecast_one_step(m, x, d);
	                         });

	// bases needed by any requested method
	std::uint32_t needed = 0;
	for (const auto &m : methods) {
		needed |= m.mask();
	}

	const std::size_t n_orig = origins.size();
	std::array<std::vector<double>, kBaseMethodCount> clamped;
	for (std::size_t b = 0; b < kBaseMethodCount; ++b) {
		if (!(needed & (1u << b))) {
			continue;
		}
		const auto method = static_cast<BaseMethod>(b);
		out.raw_base_forecasts[b].resize(n_orig);
		clamped[b].resize(n_orig);
		for (std::size_t o = 0; o < n_orig; ++o) {
			Diagnostics local;
			double f = forecaster(method, origins[o].segment.values, &local);
			++out.base_fits;
			if (!std::isfinite(f)) {
				local.add("non-finite forecast replaced by the Naive forecast");
				f = forecast_naive(origins[o].segment.values);
			}
			for (const auto &msg : local.messages()) {
				out.diagnostics.add(series.station_id + " origin " + std::to_string(o + 1) + " " +
				                    std::string(base_method_name(method)) + ": " + msg);
			}
			out.raw_base_forecasts[b][o] = f;
			if (f < 0.0) {
				++out.clamped;
				f = 0.0;
			}
			clamped[b][o] = f;
		}
	}

	ForecastMatrix &fm = out.forecasts;
	fm.station_id = series.station_id;
	fm.methods = methods;
	fm.targets.resize(n_orig);
	for (std::size_t o = 0; o < n_orig; ++o) {
		fm.targets[o] = origins[o].target;
	}
	fm.forecasts.resize(methods.size());
	for (std::size_t m = 0; m < methods.size(); ++m) {
		const auto members = methods[m].members();
		auto &row = fm.forecasts[m];
		row.resize(n_orig);
		if (members.size() == 1) {
			row = clamped[static_cast<std::size_t>(members.front())];
			continue;
		}
		std::vector<double> buf(members.size());
		for (std::size_t o = 0; o < n_orig; ++o) {
			for (std::size_t k = 0; k < members.size(); ++k) {
				buf[k] = clamped[static_cast<std::size_t>(members[k])][o];
			}
			row[o] = median_combine(buf);
		}
	}

	EvaluationReport &rep = out.report;
	rep.station_id = series.station_id;
	rep.methods = methods;
	rep.metrics = metrics;
	const std::size_t nm = methods.size();
	const std::size_t nk = metrics.size();
	rep.values.assign(nm, std::vector<double>(nk, kNaN));
	rep.ranks.assign(nm, std::vector<double>(nk, kNaN));
	rep.relative_improvements.assign(nm, std::vector<double>(nk, kNaN));

	const std::size_t bench = rep.method_index(kBenchmark);
	for (std::size_t k = 0; k < nk; ++k) {
		const Metric metric = metrics[k];
		bool defined = true;
		for (std::size_t m = 0; m < nm; ++m) {
			try {
				rep.values[m][k] = compute_metric(metric, fm.forecasts[m], fm.targets);
			} catch (const std::invalid_argument &) {
				defined = false;
				break;
			}
		}
		if (!defined) {
			for (std::size_t m = 0; m < nm; ++m) {
				rep.values[m][k] = kNaN;
			}
			out.diagnostics.add(series.station_id + ": " + std::string(metric_name(metric)) +
			                    " undefined (zero target value); reported as NA");
			continue;
		}
		std::vector<double> column(nm);
		for (std::size_t m = 0; m < nm; ++m) {
			column[m] = rep.values[m][k];
		}
		const auto r = rank_methods(column);
		for (std::size_t m = 0; m < nm; ++m) {
			rep.ranks[m][k] = r[m];
		}
		if (!is_scale_dependent(metric)) {
			continue;
		}
		const double reference = rep.values[bench][k];
		if (reference == 0.0) {
			out.diagnostics.add(series.station_id + ": benchmark " + std::string(metric_name(metric)) +
			                    " is zero; relative improvements reported as NA");
			continue;
		}
		for (std::size_t m = 0; m < nm; ++m) {
			if (m != bench) {
				rep.relative_improvements[m][k] = medcast::relative_improvement(reference, rep.values[m][k]);
			}
		}
	}
	return out;
}

const SummaryRow *SummaryReport::find(std::string_view region, const MethodId &method, Metric metric) const {
	for (const auto &row : rows) {
		if (row.region == region && row.method == method && row.metric == metric) {
			return &row;
		}
	}
	return nullptr;
}

SummaryReport summarize(std::span<const EvaluationReport> reports, const std::map<std::string, Region> &regions) {
	if (reports.empty()) {
		throw std::invalid_argument("summarize: no reports");
	}
	const auto &methods = reports.front().methods;
	const auto &metrics = reports.front().metrics;
	for (const auto &r : reports) {
		if (r.methods != methods || r.metrics != metrics) {
			throw std::invalid_argument("summarize: reports cover different methods or metrics");
		}
	}

	SummaryReport out;
	const std::array<std::string, 3> region_names{"Globe", "A", "B"};
	for (const auto &region : region_names) {
		std::vector<const EvaluationReport *> members;
		for (const auto &r : reports) {
			if (region == "Globe") {
				members.push_back(&r);
				continue;
			}
			const auto it = regions.find(r.station_id);
			if (it != regions.end() && to_string(it->second) == region) {
				members.push_back(&r);
			}
		}
		if (members.empty()) {
			out.diagnostics.add("summarize: region " + region + " has no stations; omitted");
			continue;
		}
		for (std::size_t m = 0; m < methods.size(); ++m) {
			for (std::size_t k = 0; k < metrics.size(); ++k) {
				SummaryRow row;
				row.region = region;
				row.method = methods[m];
				row.metric = metrics[k];
				row.stations = members.size();
				std::vector<double> rk;
				std::vector<double> ri;
				std::vector<double> val;
				for (const auto *r : members) {
					rk.push_back(r->ranks[m][k]);
					ri.push_back(r->relative_improvements[m][k]);
					val.push_back(r->values[m][k]);
				}
				row.mean_rank = mean_skipping_nan(rk);
				row.mean_relative_improvement = is_scale_dependent(metrics[k]) ? mean_skipping_nan(ri) : kNaN;
				row.mean_value = mean_skipping_nan(val);
				for (std::size_t t = 0; t < kTopK.size(); ++t) {
					row.top_counts[t] = static_cast<std::size_t>(std::count_if(
					    rk.begin(), rk.end(), [&](double x) { return x <= static_cast<double>(kTopK[t]); }));
				}
				out.rows.push_back(row);
			}
		}
	}
	return out;
}

} // namespace medcast
