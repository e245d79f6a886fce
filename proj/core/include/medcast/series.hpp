#pragma once

#include "medcast/diagnostics.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace medcast {

inline constexpr std::size_t kSeriesLength = 90;

enum class Region { A, B, Other };

std::string_view to_string(Region region);
std::optional<Region> parse_region(std::string_view text);

/// One station's complete annual flow block. Values are non-negative, finite and
/// there are no gaps.
struct AnnualSeries {
	std::string station_id;
	int year_start = 0;
	std::vector<double> values;
};

struct StationMeta {
	std::string station_id;
	double longitude = 0.0;
	double latitude = 0.0;
	std::optional<std::string> country;
	Region region = Region::Other;
	std::optional<bool> homogeneous;      ///< result of external homogeneity screening
	std::optional<double> missing_fraction; ///< fraction of daily values missing, in [0, 1]
	std::map<std::string, double> numeric;
	std::map<std::string, std::string> categorical;
};

struct Station {
	AnnualSeries series;
	StationMeta meta;
};

/// Validated stations, sorted and unique by station_id. Immutable once built.
class Dataset {
public:
	Dataset() = default;
	/// Throws std::invalid_argument on duplicate ids or a series violating the
	/// AnnualSeries invariants (length `length`, finite, non-negative).
	explicit Dataset(std::vector<Station> stations, std::size_t length = kSeriesLength);

	std::size_t size() const { return stations_.size(); }
	bool empty() const { return stations_.empty(); }
	const std::vector<Station> &stations() const { return stations_; }
	const Station *find(std::string_view station_id) const;

	auto begin() const { return stations_.begin(); }
	auto end() const { return stations_.end(); }

private:
	std::vector<Station> stations_;
};

/// A station record as read from disk, before the selection rules: the first
/// `length` calendar years starting from the first observed value, with gaps.
struct StationRecord {
	std::string station_id;
	int year_start = 0;
	std::vector<std::optional<double>> values;
	StationMeta meta;
};

struct RawDataset {
	std::vector<StationRecord> records; ///< sorted by station_id
	std::map<std::string, std::string> excluded; ///< station_id -> reason, dropped while loading
	Diagnostics diagnostics;
};

/// Column names for the long-format series file and the metadata table.
struct Schema {
	std::string station_id = "station_id";
	std::string year = "year";
	std::string value = "value";
	std::string longitude = "longitude";
	std::string latitude = "latitude";
	std::string country = "country";
	std::string homogeneous = "homogeneous";
	std::string missing_fraction = "missing_fraction";
};

struct LoadOptions {
	Schema schema;
	std::size_t series_length = kSeriesLength;
};

/// Reads the long-format series table and the metadata table. Unparseable rows
/// are dropped with a diagnostic; stations spanning fewer than
/// `series_length` years are excluded ("insufficient length"); longer records
/// keep their first `series_length` years. Metadata columns outside the schema
/// become covariates: numeric when every present value parses as a number,
/// categorical otherwise.
///
/// Throws DataError for a missing file, a header lacking a schema column, or a
/// duplicate station_id (in the metadata) or duplicate (station, year) row.
RawDataset load_dataset(const std::filesystem::path &series_path, const std::filesystem::path &meta_path,
                        const LoadOptions &options = {});

struct SelectionRules {
	std::size_t required_length = kSeriesLength;
	bool honor_missing_fraction = true;
	double max_missing_fraction = 10.0 / 90.0;
	bool honor_homogeneity = true;
};

struct SelectionResult {
	Dataset dataset;
	std::map<std::string, std::size_t> rejected; ///< reason -> station count
	std::map<std::string, std::string> rejected_stations; ///< station_id -> reason
	Diagnostics diagnostics;
};

/// Applies the retention rules; an empty result only produces a diagnostic.
/// Stations already excluded while loading are reported with their reason.
SelectionResult select_series(const RawDataset &raw, const SelectionRules &rules = {});

/// Round-trips a validated dataset back to records (for re-selection).
RawDataset to_raw(const Dataset &dataset);

struct BoundingBox {
	double lon_min = 0.0;
	double lon_max = 0.0;
	double lat_min = 0.0;
	double lat_max = 0.0;

	bool contains(double lon, double lat) const {
		return lon >= lon_min && lon <= lon_max && lat >= lat_min && lat <= lat_max;
	}
};

/// Region A defaults to a North America box, Region B to a Europe box. A
/// country mapping, when it covers the station's country, wins over the boxes;
/// if the boxes overlap, A wins.
struct RegionConfig {
	BoundingBox a{-170.0, -50.0, 15.0, 85.0};
	BoundingBox b{-25.0, 45.0, 35.0, 72.0};
	std::map<std::string, Region> countries;

	/// JSON: {"A": {"lon": [min, max], "lat": [min, max]}, "B": {...},
	///        "countries": {"US": "A", ...}}. Missing keys keep defaults.
	static RegionConfig from_json_file(const std::filesystem::path &path);
	static RegionConfig from_json_text(std::string_view text);
};

/// Throws std::invalid_argument when coordinates are outside the valid ranges.
Region assign_region(const StationMeta &meta, const RegionConfig &config = {});

/// Assigns every station's region in place.
Dataset with_regions(const Dataset &dataset, const RegionConfig &config);

} // namespace medcast
