#pragma once

#include "medcast/table.hpp"

#include <cstdint>
#include <filesystem>

namespace medcast::tools {

struct SyntheticArchiveOptions {
	std::size_t stations = 20; ///< stations that pass the selection rules
	std::uint64_t seed = 42;
	bool include_rejects = true; ///< add one short, one gappy and one inhomogeneous station
};

struct SyntheticArchive {
	Table series; ///< station_id, year, value
	Table meta;   ///< station_id, longitude, latitude, country, homogeneous, missing_fraction, catchment_area, climate
};

/// Log-normal transforms of fGn series (H drawn in [0.55, 0.85]) spread over
/// regions A, B and elsewhere, with a numeric and a categorical covariate.
SyntheticArchive make_synthetic_archive(const SyntheticArchiveOptions &options);

} // namespace medcast::tools
