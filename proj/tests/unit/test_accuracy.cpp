#include "medcast/accuracy.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace medcast;

namespace {

double oracle_metric(Metric metric, const std::vector<double> &f, const std::vector<double> &x) {
	switch (metric) {
	case Metric::MAE:
		return oracle::mae(f, x);
	case Metric::MAPE:
		return oracle::mape(f, x);
	case Metric::MdAE:
		return oracle::mdae(f, x);
	case Metric::MdAPE:
		return oracle::mdape(f, x);
	case Metric::RMSE:
		return oracle::rmse(f, x);
	}
	return 0.0;
}

} // namespace

TEST(Accuracy, PerfectForecastIsZero) {
	const std::vector<double> x{1, 2, 3};
	for (Metric m : kAllMetrics) {
		EXPECT_DOUBLE_EQ(compute_metric(m, x, x), 0.0) << metric_name(m);
	}
}

TEST(Accuracy, HandExamples) {
	const std::vector<double> f{2, 4};
	const std::vector<double> x{1, 2};
	EXPECT_DOUBLE_EQ(compute_metric(Metric::MAE, f, x), 1.5);
	EXPECT_DOUBLE_EQ(compute_metric(Metric::MAPE, f, x), 100.0);
	EXPECT_DOUBLE_EQ(compute_metric(Metric::MdAE, f, x), 1.5);
	EXPECT_DOUBLE_EQ(compute_metric(Metric::MdAPE, f, x), 100.0);
	EXPECT_NEAR(compute_metric(Metric::RMSE, f, x), std::sqrt(2.5), 1e-15);

	const std::vector<double> f2{1, 1, 1, 10};
	const std::vector<double> x2{1, 1, 1, 1};
	EXPECT_DOUBLE_EQ(compute_metric(Metric::MAE, f2, x2), 2.25);
	EXPECT_DOUBLE_EQ(compute_metric(Metric::MdAE, f2, x2), 0.0);
	EXPECT_DOUBLE_EQ(compute_metric(Metric::RMSE, f2, x2), 4.5);
}

TEST(Accuracy, Errors) {
	const std::vector<double> a{1, 2};
	const std::vector<double> b{1};
	EXPECT_THROW(compute_metric(Metric::MAE, a, b), std::invalid_argument);
	EXPECT_THROW(compute_metric(Metric::MAE, std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
	const std::vector<double> zero{1, 0};
	try {
		compute_metric(Metric::MAPE, a, zero);
		FAIL();
	} catch (const std::invalid_argument &e) {
		EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
	}
	EXPECT_NO_THROW(compute_metric(Metric::MAE, a, zero));
}

TEST(Accuracy, MatchesOracleAndScaleProperties) {
	std::mt19937_64 rng(31);
	std::uniform_real_distribution<double> u(0.5, 20.0);
	std::uniform_int_distribution<int> len(1, 50);
	for (int r = 0; r < 300; ++r) {
		const auto n = static_cast<std::size_t>(len(rng));
		std::vector<double> f(n), x(n);
		for (std::size_t i = 0; i < n; ++i) {
			f[i] = u(rng);
			x[i] = u(rng);
		}
		for (Metric m : kAllMetrics) {
			const double v = compute_metric(m, f, x);
			EXPECT_NEAR(v, oracle_metric(m, f, x), 1e-12 * std::max(1.0, v));
			EXPECT_GE(v, 0.0);
			// scale-dependent metrics scale with c, percentage metrics are invariant
			std::vector<double> fc(f), xc(x);
			for (std::size_t i = 0; i < n; ++i) {
				fc[i] *= 3.5;
				xc[i] *= 3.5;
			}
			const double scaled = compute_metric(m, fc, xc);
			const double expected = is_scale_dependent(m) ? 3.5 * v : v;
			EXPECT_NEAR(scaled, expected, 1e-10 * std::max(1.0, expected));
		}
		EXPECT_GE(compute_metric(Metric::RMSE, f, x) + 1e-12, compute_metric(Metric::MAE, f, x));
	}
}

TEST(RelativeImprovement, Examples) {
	EXPECT_DOUBLE_EQ(relative_improvement(10.0, 8.0), 0.2);
	EXPECT_DOUBLE_EQ(relative_improvement(4.0, 4.0), 0.0);
	EXPECT_DOUBLE_EQ(relative_improvement(5.0, 10.0), -1.0);
	EXPECT_THROW(relative_improvement(0.0, 1.0), std::domain_error);
}

TEST(Accuracy, NamesRoundTrip) {
	for (Metric m : kAllMetrics) {
		EXPECT_EQ(parse_metric(metric_name(m)), m);
	}
	EXPECT_FALSE(parse_metric("MSE").has_value());
	EXPECT_TRUE(is_scale_dependent(Metric::RMSE));
	EXPECT_FALSE(is_scale_dependent(Metric::MdAPE));
}
