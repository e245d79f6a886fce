#include "medcast/combine.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

using namespace medcast;

namespace {

const std::vector<BaseMethod> kBases{BaseMethod::Naive, BaseMethod::Ses, BaseMethod::Ces, BaseMethod::Arfima,
                                     BaseMethod::Trend};

} // namespace

TEST(Variants, FiveBasesGiveTwentySix) {
	const auto variants = enumerate_variants(kBases);
	ASSERT_EQ(variants.size(), 26u);
	std::map<int, int> sizes;
	for (const auto &v : variants) {
		++sizes[v.size()];
	}
	EXPECT_EQ(sizes[2], 10);
	EXPECT_EQ(sizes[3], 10);
	EXPECT_EQ(sizes[4], 5);
	EXPECT_EQ(sizes[5], 1);
	std::set<std::uint32_t> masks;
	for (const auto &v : variants) {
		masks.insert(v.mask());
	}
	EXPECT_EQ(masks.size(), 26u);
	EXPECT_TRUE(std::is_sorted(variants.begin(), variants.end()));
}

TEST(Variants, SmallBaseSets) {
	const std::vector<BaseMethod> two{BaseMethod::Naive, BaseMethod::Trend};
	EXPECT_EQ(enumerate_variants(two).size(), 1u);
	const std::vector<BaseMethod> three{BaseMethod::Naive, BaseMethod::Ses, BaseMethod::Trend};
	EXPECT_EQ(enumerate_variants(three).size(), 4u);
	const std::vector<BaseMethod> one{BaseMethod::Ses};
	EXPECT_THROW(enumerate_variants(one), std::invalid_argument);
}

TEST(Variants, AllMethodsOrderAndLabels) {
	const auto methods = all_methods();
	ASSERT_EQ(methods.size(), 31u);
	for (std::size_t i = 0; i < 5; ++i) {
		EXPECT_TRUE(methods[i].is_base());
		EXPECT_EQ(methods[i].base_method(), kBases[i]);
	}
	EXPECT_EQ(methods[5].code(), "12");
	EXPECT_EQ(methods.back().code(), "12345");
	const auto combo = MethodId::from_code("145");
	ASSERT_TRUE(combo.has_value());
	EXPECT_EQ(combo->label(), "combiner of (1),(4),(5)");
	EXPECT_EQ(MethodId::base(BaseMethod::Naive).code(), "1");
	for (const auto &m : methods) {
		EXPECT_EQ(MethodId::from_code(m.code()), m);
	}
	EXPECT_FALSE(MethodId::from_code("16").has_value());
	EXPECT_FALSE(MethodId::from_code("11").has_value());
	EXPECT_THROW(MethodId::combo(1u), std::invalid_argument);
}

TEST(Median, Examples) {
	EXPECT_DOUBLE_EQ(median_combine(std::vector<double>{2, 4}), 3.0);
	EXPECT_DOUBLE_EQ(median_combine(std::vector<double>{1, 2, 10}), 2.0);
	EXPECT_DOUBLE_EQ(median_combine(std::vector<double>{1, 2, 3, 100}), 2.5);
}

TEST(Median, Preconditions) {
	EXPECT_THROW(median_combine(std::vector<double>{1.0}), std::invalid_argument);
	EXPECT_THROW(median_combine(std::vector<double>{1.0, std::numeric_limits<double>::quiet_NaN()}),
	             std::invalid_argument);
}

TEST(Median, PropertiesOnRandomInputs) {
	std::mt19937_64 rng(17);
	std::uniform_real_distribution<double> u(-50.0, 50.0);
	for (int r = 0; r < 2000; ++r) {
		const std::size_t n = 2 + static_cast<std::size_t>(r % 4);
		std::vector<double> f(n);
		for (auto &v : f) {
			v = u(rng);
		}
		const double m = median_combine(f);
		EXPECT_DOUBLE_EQ(m, oracle::sorted_median(f));
		// permutation invariance
		auto g = f;
		std::reverse(g.begin(), g.end());
		EXPECT_DOUBLE_EQ(median_combine(g), m);
		// within the range of its inputs
		EXPECT_GE(m, *std::min_element(f.begin(), f.end()));
		EXPECT_LE(m, *std::max_element(f.begin(), f.end()));
		// boundedness against any target
		const double x = u(rng);
		double worst = 0.0;
		for (double v : f) {
			worst = std::max(worst, std::fabs(v - x));
		}
		EXPECT_LE(std::fabs(m - x), worst + 1e-12);
	}
}
