#include "simulate.hpp"

#include "medcast/features.hpp"
#include "medcast/random.hpp"
#include "medcast/series.hpp"

#include <Eigen/Dense>

#include <array>
#include <charconv>
#include <cmath>
#include <random>
#include <string>

namespace medcast::tools {

namespace {

struct Site {
	double lon_min, lon_max, lat_min, lat_max;
	std::array<const char *, 2> countries;
};

constexpr std::array<Site, 3> kSites{{
    {-120.0, -70.0, 30.0, 60.0, {"US", "CA"}},
    {0.0, 30.0, 45.0, 65.0, {"FR", "SE"}},
    {115.0, 150.0, -40.0, -15.0, {"AU", "AU"}},
}};

constexpr std::array<const char *, 3> kClimates{"arid", "temperate", "cold"};

std::string station_name(std::size_t i) {
	std::string digits = std::to_string(i + 1);
	return "S" + std::string(digits.size() < 3 ? 3 - digits.size() : 0, '0') + digits;
}

std::string fixed(double v, int decimals) {
	char buf[64];
	const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
	return std::string(buf, res.ptr);
}

std::vector<double> fgn_path(double hurst, std::size_t n, std::mt19937_64 &rng) {
	const auto g = fgn_acvf(hurst, n);
	Eigen::MatrixXd c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < n; ++j) {
			c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g[i > j ? i - j : j - i];
		}
	}
	const Eigen::MatrixXd l = c.llt().matrixL();
	std::normal_distribution<double> z;
	Eigen::VectorXd e(static_cast<Eigen::Index>(n));
	for (Eigen::Index i = 0; i < e.size(); ++i) {
		e(i) = z(rng);
	}
	const Eigen::VectorXd x = l * e;
	return {x.data(), x.data() + x.size()};
}

} // namespace

SyntheticArchive make_synthetic_archive(const SyntheticArchiveOptions &options) {
	SyntheticArchive out;
	out.series = Table({"station_id", "year", "value"}, {false, true, true});
	out.meta = Table({"station_id", "longitude", "latitude", "country", "homogeneous", "missing_fraction",
	                  "catchment_area", "climate"},
	                 {false, true, true, false, false, true, true, false});

	const std::size_t total = options.stations + (options.include_rejects ? 3 : 0);
	for (std::size_t i = 0; i < total; ++i) {
		std::mt19937_64 rng(split_seed(options.seed, 0x5eed, i));
		std::uniform_real_distribution<double> u(0.0, 1.0);
		const Site &site = kSites[i % kSites.size()];
		const std::string id = station_name(i);
		const double lon = site.lon_min + (site.lon_max - site.lon_min) * u(rng);
		const double lat = site.lat_min + (site.lat_max - site.lat_min) * u(rng);
		const char *country = site.countries[static_cast<std::size_t>(u(rng) * 2.0) % 2];
		const double area = std::exp(std::log(50.0) + (std::log(50000.0) - std::log(50.0)) * u(rng));
		const char *climate = kClimates[static_cast<std::size_t>(u(rng) * 3.0) % 3];
		const double hurst = 0.55 + 0.30 * u(rng);
		const double level = 20.0 + 480.0 * u(rng);
		const double cv = 0.15 + 0.25 * u(rng);
		const int year_start = 1900 + static_cast<int>(u(rng) * 25.0);
		std::size_t length = kSeriesLength + static_cast<std::size_t>(u(rng) * 20.0);
		const double missing = 0.05 * u(rng);
		bool homogeneous = true;
		std::size_t gap_year = length;

		if (options.include_rejects && i >= options.stations) {
			switch (i - options.stations) {
			case 0:
				length = 70;
				break;
			case 1:
				gap_year = 40;
				break;
			default:
				homogeneous = false;
				break;
			}
		}

		const auto z = fgn_path(hurst, length, rng);
		const double s = std::sqrt(std::log(1.0 + cv * cv));
		for (std::size_t t = 0; t < length; ++t) {
			if (t == gap_year) {
				continue;
			}
			const double v = level * std::exp(s * z[t] - 0.5 * s * s);
			out.series.add_row({id, std::to_string(year_start + static_cast<int>(t)), fixed(v, 3)});
		}
		out.meta.add_row({id, fixed(lon, 2), fixed(lat, 2), country, homogeneous ? "true" : "false", fixed(missing, 3),
		                  fixed(area, 0), climate});
	}
	return out;
}

} // namespace medcast::tools
