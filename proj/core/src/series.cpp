#include "medcast/series.hpp"

#include "medcast/errors.hpp"
#include "medcast/table.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace medcast {

std::string_view to_string(Region region) {
	switch (region) {
	case Region::A:
		return "A";
	case Region::B:
		return "B";
	case Region::Other:
		return "Other";
	}
	return "Other";
}

std::optional<Region> parse_region(std::string_view text) {
	if (text == "A") {
		return Region::A;
	}
	if (text == "B") {
		return Region::B;
	}
	if (text == "Other") {
		return Region::Other;
	}
	return std::nullopt;
}

Dataset::Dataset(std::vector<Station> stations, std::size_t length) : stations_(std::move(stations)) {
	std::sort(stations_.begin(), stations_.end(),
	          [](const Station &a, const Station &b) { return a.series.station_id < b.series.station_id; });
	for (std::size_t i = 0; i < stations_.size(); ++i) {
		const auto &s = stations_[i].series;
		if (i > 0 && stations_[i - 1].series.station_id == s.station_id) {
			throw std::invalid_argument("duplicate station_id: " + s.station_id);
		}
		if (s.values.size() != length) {
			throw std::invalid_argument("station " + s.station_id + ": expected " + std::to_string(length) +
			                            " values, got " + std::to_string(s.values.size()));
		}
		for (double v : s.values) {
			if (!std::isfinite(v) || v < 0.0) {
				throw std::invalid_argument("station " + s.station_id + ": non-finite or negative value");
			}
		}
		if (stations_[i].meta.station_id.empty()) {
			stations_[i].meta.station_id = s.station_id;
		}
	}
}

const Station *Dataset::find(std::string_view station_id) const {
	auto it = std::lower_bound(stations_.begin(), stations_.end(), station_id,
	                           [](const Station &s, std::string_view id) { return s.series.station_id < id; });
	if (it != stations_.end() && it->series.station_id == station_id) {
		return &*it;
	}
	return nullptr;
}

namespace {

std::optional<bool> parse_bool(std::string_view text) {
	std::string t(text);
	std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
	if (t == "true" || t == "1" || t == "yes" || t == "t") {
		return true;
	}
	if (t == "false" || t == "0" || t == "no" || t == "f") {
		return false;
	}
	return std::nullopt;
}

std::map<std::string, StationMeta> load_meta(const std::filesystem::path &path, const Schema &schema,
                                             Diagnostics &diag) {
	const Table table = read_delimited(path);
	const std::size_t id_col = table.require_column(schema.station_id);
	const std::size_t lon_col = table.require_column(schema.longitude);
	const std::size_t lat_col = table.require_column(schema.latitude);
	const auto country_col = table.column_index(schema.country);
	const auto homog_col = table.column_index(schema.homogeneous);
	const auto missing_col = table.column_index(schema.missing_fraction);

	std::vector<std::size_t> extra;
	for (std::size_t c = 0; c < table.columns.size(); ++c) {
		if (c == id_col || c == lon_col || c == lat_col || (country_col && c == *country_col) ||
		    (homog_col && c == *homog_col) || (missing_col && c == *missing_col)) {
			continue;
		}
		extra.push_back(c);
	}
	// a covariate column is numeric when every non-missing cell parses
	std::vector<bool> is_numeric(table.columns.size(), true);
	for (const auto &row : table.rows) {
		for (std::size_t c : extra) {
			double v = 0.0;
			if (c < row.size() && parse_cell(row[c], v) == CellKind::Invalid) {
				is_numeric[c] = false;
			}
		}
	}

	std::map<std::string, StationMeta> out;
	std::size_t line = 1;
	for (const auto &row : table.rows) {
		++line;
		const std::string where = path.filename().string() + ":" + std::to_string(line);
		if (row.size() != table.columns.size()) {
			diag.add(where + ": row has " + std::to_string(row.size()) + " fields, expected " +
			         std::to_string(table.columns.size()) + "; rejected");
			continue;
		}
		StationMeta meta;
		meta.station_id = row[id_col];
		if (meta.station_id.empty()) {
			diag.add(where + ": empty station_id; rejected");
			continue;
		}
		if (out.count(meta.station_id)) {
			throw DataError("duplicate station_id in metadata: " + meta.station_id);
		}
		if (parse_cell(row[lon_col], meta.longitude) != CellKind::Number ||
		    parse_cell(row[lat_col], meta.latitude) != CellKind::Number) {
			diag.add(where + ": station " + meta.station_id + " has unparseable coordinates; rejected");
			continue;
		}
		if (meta.longitude < -180.0 || meta.longitude > 180.0 || meta.latitude < -90.0 || meta.latitude > 90.0) {
			diag.add(where + ": station " + meta.station_id + " has out-of-range coordinates; rejected");
			continue;
		}
		if (country_col && !row[*country_col].empty() && row[*country_col] != "NA") {
			meta.country = row[*country_col];
		}
		if (homog_col && !row[*homog_col].empty() && row[*homog_col] != "NA") {
			meta.homogeneous = parse_bool(row[*homog_col]);
			if (!meta.homogeneous) {
				diag.add(where + ": unreadable homogeneity flag '" + row[*homog_col] + "'; treated as absent");
			}
		}
		if (missing_col) {
			double v = 0.0;
			const CellKind kind = parse_cell(row[*missing_col], v);
			if (kind == CellKind::Number && v >= 0.0 && v <= 1.0) {
				meta.missing_fraction = v;
			} else if (kind != CellKind::Missing) {
				diag.add(where + ": missing_fraction '" + row[*missing_col] + "' not in [0, 1]; treated as absent");
			}
		}
		for (std::size_t c : extra) {
			const std::string &cell = row[c];
			double v = 0.0;
			const CellKind kind = parse_cell(cell, v);
			if (kind == CellKind::Missing) {
				continue;
			}
			if (is_numeric[c]) {
				meta.numeric[table.columns[c]] = v;
			} else {
				meta.categorical[table.columns[c]] = cell;
			}
		}
		out.emplace(meta.station_id, std::move(meta));
	}
	return out;
}

} // namespace

RawDataset load_dataset(const std::filesystem::path &series_path, const std::filesystem::path &meta_path,
                        const LoadOptions &options) {
	if (options.series_length == 0) {
		throw std::invalid_argument("series_length must be positive");
	}
	const Schema &schema = options.schema;
	RawDataset raw;
	if (!std::filesystem::exists(series_path)) {
		throw DataError("series file not found: " + series_path.string());
	}
	if (!std::filesystem::exists(meta_path)) {
		throw DataError("metadata file not found: " + meta_path.string());
	}

	const Table table = read_delimited(series_path);
	const std::size_t id_col = table.require_column(schema.station_id);
	const std::size_t year_col = table.require_column(schema.year);
	const std::size_t value_col = table.require_column(schema.value);

	std::map<std::string, StationMeta> meta = load_meta(meta_path, schema, raw.diagnostics);

	// station -> year -> value (nullopt = explicitly missing)
	std::map<std::string, std::map<int, std::optional<double>>> by_station;
	std::size_t line = 1;
	for (const auto &row : table.rows) {
		++line;
		const std::string where = series_path.filename().string() + ":" + std::to_string(line);
		if (row.size() != table.columns.size()) {
			raw.diagnostics.add(where + ": row has " + std::to_string(row.size()) + " fields, expected " +
			                    std::to_string(table.columns.size()) + "; rejected");
			continue;
		}
		const std::string &id = row[id_col];
		double year_value = 0.0;
		if (id.empty() || parse_cell(row[year_col], year_value) != CellKind::Number ||
		    year_value != std::floor(year_value)) {
			raw.diagnostics.add(where + ": unparseable station or year; rejected");
			continue;
		}
		const int year = static_cast<int>(year_value);
		double v = 0.0;
		std::optional<double> value;
		switch (parse_cell(row[value_col], v)) {
		case CellKind::Number:
			if (v < 0.0) {
				raw.diagnostics.add(where + ": negative flow " + row[value_col] + "; treated as missing");
			} else {
				value = v;
			}
			break;
		case CellKind::Missing:
			break;
		case CellKind::Invalid:
			raw.diagnostics.add(where + ": unparseable value '" + row[value_col] + "'; treated as missing");
			break;
		}
		auto &years = by_station[id];
		if (years.count(year)) {
			throw DataError("duplicate row for station " + id + ", year " + std::to_string(year));
		}
		years.emplace(year, value);
	}

	const int length = static_cast<int>(options.series_length);
	for (auto &[id, years] : by_station) {
		auto meta_it = meta.find(id);
		if (meta_it == meta.end()) {
			raw.diagnostics.add("station " + id + ": no metadata row; excluded");
			raw.excluded.emplace(id, "no metadata");
			continue;
		}
		auto first = std::find_if(years.begin(), years.end(), [](const auto &kv) { return kv.second.has_value(); });
		if (first == years.end()) {
			raw.diagnostics.add("station " + id + ": insufficient length (no observed values); excluded");
			raw.excluded.emplace(id, "insufficient length");
			continue;
		}
		auto last = std::find_if(years.rbegin(), years.rend(), [](const auto &kv) { return kv.second.has_value(); });
		const int span = last->first - first->first + 1;
		if (span < length) {
			raw.diagnostics.add("station " + id + ": insufficient length (" + std::to_string(span) + " years < " +
			                    std::to_string(length) + "); excluded");
			raw.excluded.emplace(id, "insufficient length");
			continue;
		}
		StationRecord record;
		record.station_id = id;
		record.year_start = first->first;
		record.values.resize(options.series_length);
		for (int k = 0; k < length; ++k) {
			auto it = years.find(record.year_start + k);
			if (it != years.end()) {
				record.values[k] = it->second;
			}
		}
		record.meta = meta_it->second;
		raw.records.push_back(std::move(record));
	}
	for (const auto &[id, m] : meta) {
		if (!by_station.count(id)) {
			raw.diagnostics.add("station " + id + ": metadata without series rows; ignored");
		}
	}
	return raw;
}

SelectionResult select_series(const RawDataset &raw, const SelectionRules &rules) {
	SelectionResult result;
	std::vector<Station> kept;
	auto reject = [&](const StationRecord &r, const std::string &reason) {
		++result.rejected[reason];
		result.rejected_stations.emplace(r.station_id, reason);
		result.diagnostics.add("station " + r.station_id + ": rejected (" + reason + ")");
	};
	for (const auto &[id, reason] : raw.excluded) {
		++result.rejected[reason];
		result.rejected_stations.emplace(id, reason);
	}
	for (const auto &record : raw.records) {
		if (record.values.size() < rules.required_length) {
			reject(record, "insufficient length");
			continue;
		}
		const bool has_gap = std::any_of(record.values.begin(), record.values.begin() + rules.required_length,
		                                 [](const auto &v) { return !v.has_value() || !std::isfinite(*v) || *v < 0.0; });
		if (has_gap) {
			reject(record, "missing annual values");
			continue;
		}
		if (rules.honor_missing_fraction && record.meta.missing_fraction &&
		    *record.meta.missing_fraction > rules.max_missing_fraction + 1e-12) {
			reject(record, "daily missing fraction above threshold");
			continue;
		}
		if (rules.honor_homogeneity && record.meta.homogeneous && !*record.meta.homogeneous) {
			reject(record, "failed homogeneity screening");
			continue;
		}
		Station station;
		station.series.station_id = record.station_id;
		station.series.year_start = record.year_start;
		station.series.values.reserve(rules.required_length);
		for (std::size_t k = 0; k < rules.required_length; ++k) {
			station.series.values.push_back(*record.values[k]);
		}
		station.meta = record.meta;
		kept.push_back(std::move(station));
	}
	result.dataset = Dataset(std::move(kept), rules.required_length);
	if (result.dataset.empty()) {
		result.diagnostics.add("warning: no series passed the selection rules");
	}
	return result;
}

RawDataset to_raw(const Dataset &dataset) {
	RawDataset raw;
	for (const auto &s : dataset) {
		StationRecord r;
		r.station_id = s.series.station_id;
		r.year_start = s.series.year_start;
		r.values.assign(s.series.values.begin(), s.series.values.end());
		r.meta = s.meta;
		raw.records.push_back(std::move(r));
	}
	return raw;
}

namespace {

BoundingBox parse_box(const nlohmann::json &j, BoundingBox box) {
	if (j.contains("lon")) {
		box.lon_min = j.at("lon").at(0).get<double>();
		box.lon_max = j.at("lon").at(1).get<double>();
	}
	if (j.contains("lat")) {
		box.lat_min = j.at("lat").at(0).get<double>();
		box.lat_max = j.at("lat").at(1).get<double>();
	}
	if (box.lon_min > box.lon_max || box.lat_min > box.lat_max) {
		throw std::invalid_argument("region box has min > max");
	}
	return box;
}

} // namespace

RegionConfig RegionConfig::from_json_text(std::string_view text) {
	RegionConfig cfg;
	nlohmann::json j;
	try {
		j = nlohmann::json::parse(text);
		if (j.contains("A")) {
			cfg.a = parse_box(j.at("A"), cfg.a);
		}
		if (j.contains("B")) {
			cfg.b = parse_box(j.at("B"), cfg.b);
		}
		if (j.contains("countries")) {
			for (const auto &[country, tag] : j.at("countries").items()) {
				auto region = parse_region(tag.get<std::string>());
				if (!region) {
					throw std::invalid_argument("unknown region tag for country " + country);
				}
				cfg.countries[country] = *region;
			}
		}
	} catch (const nlohmann::json::exception &e) {
		throw std::invalid_argument(std::string("region config: ") + e.what());
	}
	return cfg;
}

RegionConfig RegionConfig::from_json_file(const std::filesystem::path &path) {
	std::ifstream in(path);
	if (!in) {
		throw DataError("cannot open region config: " + path.string());
	}
	std::stringstream buf;
	buf << in.rdbuf();
	return from_json_text(buf.str());
}

Region assign_region(const StationMeta &meta, const RegionConfig &config) {
	if (!(meta.longitude >= -180.0 && meta.longitude <= 180.0 && meta.latitude >= -90.0 && meta.latitude <= 90.0)) {
		throw std::invalid_argument("station " + meta.station_id + ": coordinates out of range");
	}
	if (meta.country) {
		auto it = config.countries.find(*meta.country);
		if (it != config.countries.end()) {
			return it->second;
		}
	}
	if (config.a.contains(meta.longitude, meta.latitude)) {
		return Region::A;
	}
	if (config.b.contains(meta.longitude, meta.latitude)) {
		return Region::B;
	}
	return Region::Other;
}

Dataset with_regions(const Dataset &dataset, const RegionConfig &config) {
	std::vector<Station> stations = dataset.stations();
	for (auto &s : stations) {
		s.meta.region = assign_region(s.meta, config);
	}
	if (stations.empty()) {
		return Dataset{};
	}
	const std::size_t length = stations.front().series.values.size();
	return Dataset(std::move(stations), length);
}

} // namespace medcast
