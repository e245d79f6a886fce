#include "pipeline.hpp"

#include "medcast/backtest.hpp"
#include "medcast/errors.hpp"
#include "medcast/features.hpp"
#include "medcast/relate.hpp"
#include "medcast/table.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

namespace medcast::tools {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct NamedTable {
	std::string name; ///< file stem
	Table table;
};

struct Outputs {
	std::vector<NamedTable> tables;
	Diagnostics diagnostics;
	ordered_json counts = ordered_json::object();
};

std::string hex64(std::uint64_t v) {
	char buf[17];
	std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
	return buf;
}

std::string read_file(const std::filesystem::path &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw DataError("cannot read " + path.string());
	}
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

std::string num(double v) {
	return format_number(v);
}

std::string count(std::size_t v) {
	return std::to_string(v);
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results land in index
// order; the first failing index (in index order) rethrows.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned jobs, F fn) {
	std::vector<T> results(n);
	std::vector<std::exception_ptr> errors(n);
	std::atomic<std::size_t> next{0};
	auto worker = [&] {
		for (std::size_t i = next++; i < n; i = next++) {
			try {
				results[i] = fn(i);
			} catch (...) {
				errors[i] = std::current_exception();
			}
		}
	};
	const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
	if (threads == 1) {
		worker();
	} else {
		std::vector<std::thread> pool;
		pool.reserve(threads);
		for (unsigned t = 0; t < threads; ++t) {
			pool.emplace_back(worker);
		}
		for (auto &th : pool) {
			th.join();
		}
	}
	for (auto &e : errors) {
		if (e) {
			std::rethrow_exception(e);
		}
	}
	return results;
}

// ------------------------------------------------------------ ingest

struct Ingested {
	Dataset dataset;
	std::map<std::string, Region> regions;
	std::map<std::string, StationMeta> meta;
};

Ingested ingest(const RunConfig &config, Outputs &out, bool emit_tables) {
	const RegionConfig regions =
	    config.region_config.empty() ? RegionConfig{} : RegionConfig::from_json_file(config.region_config);
	RawDataset raw = load_dataset(config.data, config.meta);
	out.diagnostics.append(raw.diagnostics);
	SelectionResult selected = select_series(raw, config.selection);
	out.diagnostics.append(selected.diagnostics);

	Ingested result;
	result.dataset = with_regions(selected.dataset, regions);
	for (const auto &station : result.dataset) {
		result.regions.emplace(station.meta.station_id, station.meta.region);
		result.meta.emplace(station.meta.station_id, station.meta);
	}
	out.counts["stations_selected"] = result.dataset.size();
	out.counts["stations_rejected"] = selected.rejected_stations.size();
	if (!emit_tables) {
		return result;
	}

	Table table({"station_id", "status", "reason", "region", "year_start", "year_end", "longitude", "latitude",
	             "country"},
	            {false, false, false, false, true, true, true, true, false});
	std::map<std::string, std::vector<std::string>> rows;
	for (const auto &station : result.dataset) {
		const auto &m = station.meta;
		const int end = station.series.year_start + static_cast<int>(station.series.values.size()) - 1;
		rows[m.station_id] = {m.station_id,
		                      "selected",
		                      "",
		                      std::string(to_string(m.region)),
		                      std::to_string(station.series.year_start),
		                      std::to_string(end),
		                      num(m.longitude),
		                      num(m.latitude),
		                      m.country.value_or("NA")};
	}
	std::map<std::string, const StationRecord *> records;
	for (const auto &r : raw.records) {
		records.emplace(r.station_id, &r);
	}
	for (const auto &[id, reason] : selected.rejected_stations) {
		std::vector<std::string> row{id, "rejected", reason, "NA", "NA", "NA", "NA", "NA", "NA"};
		if (const auto it = records.find(id); it != records.end()) {
			const auto &m = it->second->meta;
			row[4] = std::to_string(it->second->year_start);
			row[5] = std::to_string(it->second->year_start + static_cast<int>(it->second->values.size()) - 1);
			row[6] = num(m.longitude);
			row[7] = num(m.latitude);
			row[8] = m.country.value_or("NA");
		}
		rows[id] = std::move(row);
	}
	for (auto &[id, row] : rows) {
		table.add_row(std::move(row));
	}
	out.tables.push_back({"selected_dataset", std::move(table)});

	Table report({"reason", "stations"}, {false, true});
	report.add_row({"selected", count(result.dataset.size())});
	for (const auto &[reason, n] : selected.rejected) {
		report.add_row({reason, count(n)});
	}
	out.tables.push_back({"selection_report", std::move(report)});
	return result;
}

// ------------------------------------------------------------ evaluate

std::vector<EvaluationReport> evaluate(const Ingested &in, const RunConfig &config, Outputs &out) {
	const auto &stations = in.dataset.stations();
	EvaluationOptions options;
	options.methods = config.methods;
	options.metrics = config.metrics;
	auto results = parallel_map<SeriesEvaluation>(stations.size(), config.jobs, [&](std::size_t i) {
		return evaluate_series(stations[i].series, options);
	});

	Table forecasts({"station_id", "method", "method_label", "origin", "target", "forecast"},
	                {false, false, false, true, true, true});
	Table evaluation({"station_id", "method", "method_label", "metric", "value", "rank", "relative_improvement",
	                   "relative_improvement_pct"},
	                 {false, false, false, false, true, true, true, true});
	std::vector<EvaluationReport> reports;
	std::size_t fits = 0;
	std::size_t clamped = 0;
	for (auto &r : results) {
		out.diagnostics.append(r.diagnostics);
		fits += r.base_fits;
		clamped += r.clamped;
		const auto &fm = r.forecasts;
		for (std::size_t m = 0; m < fm.methods.size(); ++m) {
			for (std::size_t o = 0; o < fm.targets.size(); ++o) {
				forecasts.add_row({fm.station_id, fm.methods[m].code(), fm.methods[m].label(), count(o + 1),
				                   num(fm.targets[o]), num(fm.forecasts[m][o])});
			}
		}
		const auto &rep = r.report;
		for (std::size_t m = 0; m < rep.methods.size(); ++m) {
			for (std::size_t k = 0; k < rep.metrics.size(); ++k) {
				evaluation.add_row({rep.station_id, rep.methods[m].code(), rep.methods[m].label(),
				                    std::string(metric_name(rep.metrics[k])), num(rep.values[m][k]),
				                    num(rep.ranks[m][k]), num(rep.relative_improvements[m][k]),
				                    num(100.0 * rep.relative_improvements[m][k])});
			}
		}
		reports.push_back(std::move(r.report));
	}
	out.counts["base_fits"] = fits;
	out.counts["clamped_forecasts"] = clamped;
	out.tables.push_back({"forecasts", std::move(forecasts)});
	out.tables.push_back({"evaluation", std::move(evaluation)});

	Table summary({"region", "method", "method_label", "metric", "stations", "mean_rank", "mean_relative_improvement",
	               "mean_relative_improvement_pct", "mean_value", "top5", "top10", "top15"},
	              {false, false, false, false, true, true, true, true, true, true, true, true});
	if (reports.empty()) {
		out.diagnostics.add("summary: no stations evaluated; summary table left empty");
	} else {
		const auto s = summarize(reports, in.regions);
		out.diagnostics.append(s.diagnostics);
		for (const auto &row : s.rows) {
			summary.add_row({row.region, row.method.code(), row.method.label(), std::string(metric_name(row.metric)),
			                 count(row.stations), num(row.mean_rank), num(row.mean_relative_improvement),
			                 num(100.0 * row.mean_relative_improvement), num(row.mean_value), count(row.top_counts[0]), count(row.top_counts[1]),
			                 count(row.top_counts[2])});
		}
	}
	out.tables.push_back({"summary", std::move(summary)});
	return reports;
}

// ------------------------------------------------------------ features

FeatureTable features(const Ingested &in, const RunConfig &config, Outputs &out) {
	const auto &stations = in.dataset.stations();
	struct Result {
		std::optional<SeriesFeatures> features;
		Diagnostics diagnostics;
	};
	auto results = parallel_map<Result>(stations.size(), config.jobs, [&](std::size_t i) {
		Result r;
		try {
			r.features = compute_features(stations[i].series.values, &r.diagnostics);
		} catch (const std::exception &e) {
			r.diagnostics.add(std::string("features failed: ") + e.what());
		}
		return r;
	});

	Table table({"station_id", "region", "cv", "acf1", "hurst", "trend_strength", "spectral_entropy"},
	            {false, false, true, true, true, true, true});
	FeatureTable out_table;
	for (std::size_t i = 0; i < stations.size(); ++i) {
		const auto &id = stations[i].meta.station_id;
		for (const auto &msg : results[i].diagnostics.messages()) {
			out.diagnostics.add("station " + id + ": " + msg);
		}
		std::vector<std::string> row{id, std::string(to_string(stations[i].meta.region))};
		for (Feature f : kAllFeatures) {
			row.push_back(results[i].features ? num(feature_value(*results[i].features, f)) : num(kNaN));
		}
		table.add_row(std::move(row));
		if (results[i].features) {
			out_table.emplace(id, *results[i].features);
		}
	}
	out.tables.push_back({"features", std::move(table)});
	return out_table;
}

// ------------------------------------------------------------ analyze

void analyze(std::span<const EvaluationReport> reports, const FeatureTable &feats, const Ingested &in, Outputs &out) {
	Table regressions({"variable", "kind", "slope", "intercept", "pearson_r", "n"},
	                  {false, false, true, true, true, true});
	Table per_method({"feature", "method", "method_label", "slope", "intercept", "pearson_r", "n"},
	                 {false, false, false, true, true, true, true});
	Table points({"variable", "station_id", "method", "x", "relative_improvement"},
	             {false, false, false, true, true});
	Table grouped({"covariate", "class", "count", "mean", "median", "q1", "q3"},
	              {false, false, true, true, true, true, true});
	Table correlations({"feature_x", "feature_y", "pearson_r"}, {false, false, true});
	Table predictability({"station_id", "region", "best_method", "best_method_label", "best_rmse", "benchmark_rmse",
	                      "best_relative_improvement", "benchmark_best"},
	                     {false, false, false, false, true, true, true, false});
	Table pred_summary({"region", "stations", "mean", "median", "q1", "q3", "min", "max", "benchmark_best"},
	                   {false, true, true, true, true, true, true, true, true});
	Table best_counts({"method", "method_label", "stations"}, {false, false, true});

	auto add_regression = [&](const std::string &variable, const std::string &kind, const RegressionResult &r) {
		regressions.add_row({variable, kind, num(r.slope), num(r.intercept), num(r.pearson_r), count(r.n)});
	};

	if (reports.empty()) {
		out.diagnostics.add("analyze: no evaluation reports; analysis tables left empty");
	} else {
		for (Feature f : kAllFeatures) {
			const std::string name(feature_name(f));
			std::vector<RiPoint> pts;
			try {
				add_regression(name, "feature", ri_vs_feature(reports, feats, f, &out.diagnostics, &pts));
				for (const auto &[method, r] : ri_vs_feature_per_method(reports, feats, f)) {
					per_method.add_row({name, method.code(), method.label(), num(r.slope), num(r.intercept),
					                    num(r.pearson_r), count(r.n)});
				}
			} catch (const std::invalid_argument &e) {
				out.diagnostics.add("analyze: regression on " + name + " skipped: " + e.what());
			}
			for (const auto &p : pts) {
				points.add_row({name, p.station_id, p.method.code(), num(p.x), num(p.ri)});
			}
		}

		std::set<std::string> numeric{"longitude", "latitude"};
		std::set<std::string> categorical{"country"};
		for (const auto &[id, m] : in.meta) {
			for (const auto &[k, v] : m.numeric) {
				numeric.insert(k);
			}
			for (const auto &[k, v] : m.categorical) {
				categorical.insert(k);
			}
		}
		std::vector<std::string> covariates(numeric.begin(), numeric.end());
		covariates.insert(covariates.end(), categorical.begin(), categorical.end());
		for (const auto &name : covariates) {
			try {
				const auto a = ri_vs_covariate(reports, in.meta, name, &out.diagnostics);
				if (a.regression) {
					add_regression(name, "covariate", *a.regression);
				}
				for (const auto &g : a.groups) {
					grouped.add_row({name, g.label, count(g.count), num(g.mean), num(g.median), num(g.q1), num(g.q3)});
				}
			} catch (const std::invalid_argument &e) {
				out.diagnostics.add("analyze: covariate " + name + " skipped: " + e.what());
			}
		}

		const auto pred = predictability_summary(reports, in.regions, &out.diagnostics);
		for (const auto &s : pred.stations) {
			predictability.add_row({s.station_id, std::string(to_string(s.region)), s.best.code(), s.best.label(),
			                        num(s.best_rmse), num(s.benchmark_rmse), num(s.best_relative_improvement),
			                        s.benchmark_best ? "true" : "false"});
		}
		for (const std::string region : {"Globe", "A", "B"}) {
			const auto it = pred.by_region.find(region);
			if (it == pred.by_region.end()) {
				continue;
			}
			const auto &d = it->second;
			pred_summary.add_row({region, count(d.n), num(d.mean), num(d.median), num(d.q1), num(d.q3), num(d.min),
			                      num(d.max), count(pred.benchmark_best_count.at(region))});
		}
		for (const auto &[method, n] : pred.best_method_counts) {
			best_counts.add_row({method.code(), method.label(), count(n)});
		}
	}

	if (feats.size() >= 2) {
		const auto c = correlation_matrix(feats, &out.diagnostics);
		for (std::size_t i = 0; i < kAllFeatures.size(); ++i) {
			for (std::size_t j = 0; j < kAllFeatures.size(); ++j) {
				correlations.add_row({std::string(feature_name(kAllFeatures[i])),
				                      std::string(feature_name(kAllFeatures[j])), num(c[i][j])});
			}
		}
	} else {
		out.diagnostics.add("analyze: fewer than 2 stations with features; correlation table left empty");
	}

	out.tables.push_back({"regressions", std::move(regressions)});
	out.tables.push_back({"regressions_per_method", std::move(per_method)});
	out.tables.push_back({"grouped", std::move(grouped)});
	out.tables.push_back({"ri_points", std::move(points)});
	out.tables.push_back({"correlations", std::move(correlations)});
	out.tables.push_back({"predictability", std::move(predictability)});
	out.tables.push_back({"predictability_summary", std::move(pred_summary)});
	out.tables.push_back({"best_methods", std::move(best_counts)});
}

double read_number(const std::string &text, const std::string &where) {
	double v = 0.0;
	switch (parse_cell(text, v)) {
	case CellKind::Number:
		return v;
	case CellKind::Missing:
		return kNaN;
	case CellKind::Invalid:
		break;
	}
	throw DataError(where + ": unparseable number '" + text + "'");
}

std::vector<EvaluationReport> read_evaluation(const std::filesystem::path &path) {
	const Table t = read_delimited(path);
	const auto c_station = t.require_column("station_id");
	const auto c_method = t.require_column("method");
	const auto c_metric = t.require_column("metric");
	const auto c_value = t.require_column("value");
	const auto c_rank = t.require_column("rank");
	const auto c_ri = t.require_column("relative_improvement");

	struct Cell {
		double value, rank, ri;
	};
	std::map<std::string, std::map<MethodId, std::map<Metric, Cell>>> cells;
	std::size_t line = 1;
	for (const auto &row : t.rows) {
		++line;
		const std::string where = path.filename().string() + " line " + std::to_string(line);
		if (row.size() != t.columns.size()) {
			throw DataError(where + ": wrong number of fields");
		}
		const auto method = MethodId::from_code(row[c_method]);
		const auto metric = parse_metric(row[c_metric]);
		if (!method || !metric) {
			throw DataError(where + ": unknown method or metric");
		}
		cells[row[c_station]][*method][*metric] = {read_number(row[c_value], where), read_number(row[c_rank], where),
		                                           read_number(row[c_ri], where)};
	}
	std::vector<EvaluationReport> reports;
	for (const auto &[station, by_method] : cells) {
		EvaluationReport r;
		r.station_id = station;
		for (const auto &[m, by_metric] : by_method) {
			r.methods.push_back(m);
		}
		for (const auto &[k, cell] : by_method.begin()->second) {
			r.metrics.push_back(k);
		}
		for (const auto &m : r.methods) {
			std::vector<double> v, rk, ri;
			for (const auto k : r.metrics) {
				const auto &row = by_method.at(m);
				const auto it = row.find(k);
				if (it == row.end()) {
					throw DataError(path.filename().string() + ": station " + station + " lacks " + m.code() + "/" +
					                std::string(metric_name(k)));
				}
				v.push_back(it->second.value);
				rk.push_back(it->second.rank);
				ri.push_back(it->second.ri);
			}
			r.values.push_back(std::move(v));
			r.ranks.push_back(std::move(rk));
			r.relative_improvements.push_back(std::move(ri));
		}
		if (!std::binary_search(r.methods.begin(), r.methods.end(), MethodId::base(BaseMethod::Naive))) {
			throw DataError(path.filename().string() + ": station " + station + " lacks the benchmark method");
		}
		if (std::find(r.metrics.begin(), r.metrics.end(), Metric::RMSE) == r.metrics.end()) {
			throw DataError(path.filename().string() + ": RMSE rows are required for the analysis");
		}
		reports.push_back(std::move(r));
	}
	return reports;
}

FeatureTable read_features(const std::filesystem::path &path) {
	const Table t = read_delimited(path);
	const auto c_station = t.require_column("station_id");
	std::vector<std::size_t> cols;
	for (Feature f : kAllFeatures) {
		cols.push_back(t.require_column(feature_name(f)));
	}
	FeatureTable out;
	std::size_t line = 1;
	for (const auto &row : t.rows) {
		++line;
		const std::string where = path.filename().string() + " line " + std::to_string(line);
		if (row.size() != t.columns.size()) {
			throw DataError(where + ": wrong number of fields");
		}
		SeriesFeatures f;
		std::array<double, 5> v{};
		bool complete = true;
		for (std::size_t j = 0; j < cols.size(); ++j) {
			v[j] = read_number(row[cols[j]], where);
			complete = complete && std::isfinite(v[j]);
		}
		if (!complete) {
			continue;
		}
		f.cv = v[0];
		f.acf1 = v[1];
		f.hurst = v[2];
		f.trend_strength = v[3];
		f.spectral_entropy = v[4];
		out.emplace(row[c_station], f);
	}
	return out;
}

// ------------------------------------------------------------ manifest

ordered_json config_json(Command command, const RunConfig &config) {
	ordered_json j;
	j["command"] = command_name(command);
	j["seed"] = config.seed;
	j["selection"] = {{"required_length", config.selection.required_length},
	                  {"honor_missing_fraction", config.selection.honor_missing_fraction},
	                  {"max_missing_fraction", config.selection.max_missing_fraction},
	                  {"honor_homogeneity", config.selection.honor_homogeneity}};
	ordered_json methods = ordered_json::array();
	for (const auto &m : config.methods) {
		methods.push_back(m.code());
	}
	j["methods"] = methods;
	ordered_json metrics = ordered_json::array();
	for (const auto m : config.metrics) {
		metrics.push_back(metric_name(m));
	}
	j["metrics"] = metrics;
	j["json"] = config.json;
	return j;
}

ordered_json input_entry(const std::filesystem::path &path) {
	return {{"path", path.generic_string()}, {"fnv1a64", hex64(fnv1a64(read_file(path)))}};
}

std::string manifest_text(Command command, const RunConfig &config, const Outputs &out,
                          const std::vector<std::string> &artifacts) {
	const ordered_json cfg = config_json(command, config);
	ordered_json m;
	m["tool"] = "medcast";
	m["version"] = "0.3.0";
	m["command"] = command_name(command);
	m["seed"] = config.seed;
	ordered_json inputs;
	inputs["data"] = input_entry(config.data);
	inputs["meta"] = input_entry(config.meta);
	if (!config.region_config.empty()) {
		inputs["region_config"] = input_entry(config.region_config);
	}
	std::string hashed = cfg.dump();
	for (const auto &[k, v] : inputs.items()) {
		hashed += v["fnv1a64"].get<std::string>();
	}
	m["config_hash"] = hex64(fnv1a64(hashed));
	m["config"] = cfg;
	m["inputs"] = inputs;
	ordered_json labels = ordered_json::array();
	auto methods = config.methods;
	methods.push_back(MethodId::base(BaseMethod::Naive));
	std::sort(methods.begin(), methods.end());
	methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
	for (const auto &id : methods) {
		labels.push_back({{"code", id.code()}, {"label", id.label()}});
	}
	m["methods"] = labels;
	m["counts"] = out.counts;
	m["diagnostics"] = out.diagnostics.messages().size();
	m["artifacts"] = artifacts;
	return m.dump(2) + "\n";
}

void write_text(const std::filesystem::path &path, const std::string &text) {
	std::ofstream os(path, std::ios::binary);
	if (!os) {
		throw DataError("cannot write " + path.string());
	}
	os << text;
	if (!os) {
		throw DataError("write failed for " + path.string());
	}
}

void validate(Command command, const RunConfig &config) {
	if (config.out.empty()) {
		throw UsageError("--out is required");
	}
	if (config.data.empty() || config.meta.empty()) {
		throw UsageError("--data and --meta are required");
	}
	if (config.jobs == 0) {
		throw UsageError("--jobs must be at least 1");
	}
	if (config.metrics.empty()) {
		throw UsageError("--metrics selects no metric");
	}
	const bool needs_rmse = command == Command::Analyze || command == Command::Run;
	if (needs_rmse && std::find(config.metrics.begin(), config.metrics.end(), Metric::RMSE) == config.metrics.end()) {
		throw UsageError("the analysis needs RMSE among --metrics");
	}
	if (std::filesystem::exists(config.out) && !std::filesystem::is_directory(config.out)) {
		throw UsageError("--out exists and is not a directory: " + config.out.string());
	}
}

std::vector<std::string> split_list(std::string_view text) {
	std::vector<std::string> out;
	std::string cur;
	for (char c : text) {
		if (c == ',') {
			out.push_back(cur);
			cur.clear();
		} else if (c != ' ') {
			cur.push_back(c);
		}
	}
	out.push_back(cur);
	return out;
}

} // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for (unsigned char c : bytes) {
		h ^= c;
		h *= 0x100000001b3ULL;
	}
	return h;
}

std::string_view command_name(Command command) {
	switch (command) {
	case Command::Ingest:
		return "ingest";
	case Command::Evaluate:
		return "evaluate";
	case Command::Features:
		return "features";
	case Command::Analyze:
		return "analyze";
	case Command::Run:
		return "run";
	}
	return "unknown";
}

std::vector<MethodId> parse_method_list(std::string_view text) {
	if (text == "all") {
		return all_methods();
	}
	std::vector<MethodId> out;
	for (const auto &code : split_list(text)) {
		const auto id = MethodId::from_code(code);
		if (!id) {
			throw UsageError("unknown method code '" + code + "'");
		}
		out.push_back(*id);
	}
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

std::vector<Metric> parse_metric_list(std::string_view text) {
	if (text == "all") {
		return {kAllMetrics.begin(), kAllMetrics.end()};
	}
	std::vector<Metric> out;
	for (const auto &name : split_list(text)) {
		const auto m = parse_metric(name);
		if (!m) {
			throw UsageError("unknown metric '" + name + "'");
		}
		out.push_back(*m);
	}
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

int run_command(Command command, const RunConfig &config, std::ostream &err) {
	Outputs out;
	try {
		validate(command, config);
		const bool own_ingest_tables = command == Command::Ingest || command == Command::Run;
		const Ingested in = ingest(config, out, own_ingest_tables);

		switch (command) {
		case Command::Ingest:
			break;
		case Command::Evaluate:
			evaluate(in, config, out);
			break;
		case Command::Features:
			features(in, config, out);
			break;
		case Command::Analyze: {
			const auto dir = config.in.empty() ? config.out : config.in;
			const auto reports = read_evaluation(dir / "evaluation.csv");
			const auto feats = read_features(dir / "features.csv");
			analyze(reports, feats, in, out);
			break;
		}
		case Command::Run: {
			const auto reports = evaluate(in, config, out);
			const auto feats = features(in, config, out);
			analyze(reports, feats, in, out);
			break;
		}
		}

		std::filesystem::create_directories(config.out);
		std::vector<std::string> artifacts;
		for (const auto &t : out.tables) {
			write_csv(config.out / (t.name + ".csv"), t.table);
			artifacts.push_back(t.name + ".csv");
			if (config.json) {
				write_json_records(config.out / (t.name + ".json"), t.table);
				artifacts.push_back(t.name + ".json");
			}
		}
		const std::string name(command_name(command));
		std::string log;
		for (const auto &msg : out.diagnostics.messages()) {
			log += msg;
			log += '\n';
		}
		write_text(config.out / ("diagnostics_" + name + ".log"), log);
		artifacts.push_back("diagnostics_" + name + ".log");
		write_text(config.out / ("manifest_" + name + ".json"), manifest_text(command, config, out, artifacts));
		return 0;
	} catch (const UsageError &e) {
		err << "medcast: " << e.what() << "\n";
		return 1;
	} catch (const DataError &e) {
		err << "medcast: data error: " << e.what() << "\n";
		return 2;
	} catch (const std::filesystem::filesystem_error &e) {
		err << "medcast: " << e.what() << "\n";
		return 2;
	} catch (const std::exception &e) {
		err << "medcast: error: " << e.what() << "\n";
		return 2;
	}
}

} // namespace medcast::tools
