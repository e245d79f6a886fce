#include "medcast/arma.hpp"
#include "medcast/toeplitz.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace medcast;

namespace {

// Exact Gaussian log-likelihood with the innovation variance profiled out,
// from a dense covariance matrix built out of unit-variance autocovariances.
double dense_profile_loglik(const std::vector<double> &acvf, const std::vector<double> &y) {
	const auto n = static_cast<Eigen::Index>(y.size());
	Eigen::MatrixXd c(n, n);
	for (Eigen::Index i = 0; i < n; ++i) {
		for (Eigen::Index j = 0; j < n; ++j) {
			c(i, j) = acvf[static_cast<std::size_t>(std::abs(i - j))];
		}
	}
	const Eigen::LLT<Eigen::MatrixXd> llt(c);
	const Eigen::Map<const Eigen::VectorXd> v(y.data(), n);
	const Eigen::VectorXd w = llt.matrixL().solve(v);
	const double q = w.squaredNorm();
	double log_det = 0.0;
	for (Eigen::Index i = 0; i < n; ++i) {
		log_det += 2.0 * std::log(llt.matrixL()(i, i));
	}
	const double dn = static_cast<double>(n);
	const double s2 = q / dn;
	return -0.5 * (dn * std::log(2.0 * std::numbers::pi * s2) + log_det + dn);
}

// MA(infinity) weights of an ARMA model, then gamma(k) = sum psi_j psi_{j+k}.
std::vector<double> psi_acvf(const std::vector<double> &phi, const std::vector<double> &theta, std::size_t lags) {
	const std::size_t m = 4000;
	std::vector<double> psi(m, 0.0);
	psi[0] = 1.0;
	for (std::size_t j = 1; j < m; ++j) {
		double v = j <= theta.size() ? theta[j - 1] : 0.0;
		for (std::size_t i = 1; i <= phi.size() && i <= j; ++i) {
			v += phi[i - 1] * psi[j - i];
		}
		psi[j] = v;
	}
	std::vector<double> g(lags, 0.0);
	for (std::size_t k = 0; k < lags; ++k) {
		for (std::size_t j = 0; j + k < m; ++j) {
			g[k] += psi[j] * psi[j + k];
		}
	}
	return g;
}

} // namespace

TEST(FracDiff, IdentityAtZero) {
	const std::vector<double> x{1.0, 5.0, 2.0, 8.0};
	const auto y = arma::frac_diff(x, 0.0);
	for (std::size_t i = 0; i < x.size(); ++i) {
		EXPECT_DOUBLE_EQ(y[i], x[i]);
	}
}

TEST(FracDiff, FirstDifferenceWithZeroPadding) {
	const auto y = arma::frac_diff(std::vector<double>{1.0, 3.0, 6.0}, 1.0);
	ASSERT_EQ(y.size(), 3u);
	EXPECT_DOUBLE_EQ(y[0], 1.0);
	EXPECT_DOUBLE_EQ(y[1], 2.0);
	EXPECT_DOUBLE_EQ(y[2], 3.0);
}

TEST(FracDiff, HalfOrderWeightsMatchBinomialCoefficients) {
	const auto w = arma::frac_diff_weights(0.5, 8);
	for (std::size_t k = 0; k < w.size(); ++k) {
		// (-1)^k C(d, k) from the gamma function
		const double kk = static_cast<double>(k);
		const double binom = std::tgamma(kk - 0.5) / (std::tgamma(-0.5) * std::tgamma(kk + 1.0));
		EXPECT_NEAR(w[k], binom, 1e-13) << k;
	}
	EXPECT_DOUBLE_EQ(w[1], -0.5);
	EXPECT_DOUBLE_EQ(w[2], -0.125);
	EXPECT_DOUBLE_EQ(w[3], -0.0625);
}

TEST(FracDiff, RoundTripThroughInverseOrder) {
	std::mt19937_64 rng(1);
	const auto x = oracle::iid_normal(60, 0.0, 1.0, rng);
	const auto y = arma::frac_diff(arma::frac_diff(x, 0.3), -0.3);
	for (std::size_t i = 0; i < x.size(); ++i) {
		EXPECT_NEAR(y[i], x[i], 1e-12);
	}
}

TEST(FracDiff, RejectsOutOfRangeOrder) {
	EXPECT_THROW(arma::frac_diff(std::vector<double>{1.0}, 1.5), std::invalid_argument);
	EXPECT_THROW(arma::frac_diff(std::vector<double>{1.0}, -0.6), std::invalid_argument);
}

TEST(Arma, PacfRoundTrip) {
	const std::vector<double> pacf{0.5, -0.3, 0.2};
	const auto phi = arma::pacf_to_ar(pacf);
	EXPECT_TRUE(arma::is_stationary(phi));
	const auto back = arma::ar_to_pacf(phi);
	ASSERT_TRUE(back.has_value());
	for (std::size_t i = 0; i < pacf.size(); ++i) {
		EXPECT_NEAR((*back)[i], pacf[i], 1e-12);
	}
	EXPECT_FALSE(arma::is_stationary(std::vector<double>{1.2}));
	EXPECT_FALSE(arma::is_invertible(std::vector<double>{-1.5}));
}

TEST(Arma, AutocovarianceMatchesPsiWeights) {
	const std::vector<double> phi{0.6, -0.2};
	const std::vector<double> theta{0.4};
	const auto a = arma::acvf(phi, theta, 10);
	const auto b = psi_acvf(phi, theta, 10);
	for (std::size_t k = 0; k < 10; ++k) {
		EXPECT_NEAR(a[k], b[k], 1e-10) << k;
	}
}

TEST(Arma, FractionalNoiseAutocovarianceClosedForm) {
	for (double d : {-0.3, 0.1, 0.3, 0.45}) {
		const auto a = arma::fractional_noise_acvf(d, 30);
		const auto b = oracle::fractional_noise_acvf(d, 30);
		for (std::size_t k = 0; k < 30; ++k) {
			EXPECT_NEAR(a[k], b[k], 1e-10 * std::fabs(b[0])) << "d=" << d << " k=" << k;
		}
	}
}

TEST(Arma, ExactLikelihoodMatchesDenseGaussian) {
	std::mt19937_64 rng(3);
	for (std::size_t n : {std::size_t{40}, std::size_t{300}}) {
		const auto y = oracle::iid_normal(n, 0.0, 2.0, rng);
		const std::vector<double> phi{0.5};
		const std::vector<double> theta{0.3, -0.2};
		double s2 = 0.0;
		const auto ll = arma::exact_loglik(y, phi, theta, &s2);
		ASSERT_TRUE(ll.has_value());
		EXPECT_NEAR(*ll, dense_profile_loglik(psi_acvf(phi, theta, n), y), 1e-6) << n;
		EXPECT_GT(s2, 0.0);
	}
}

TEST(Arma, NonStationaryRejected) {
	const std::vector<double> y{1.0, 2.0, 0.5, -1.0};
	EXPECT_FALSE(arma::exact_loglik(y, std::vector<double>{1.1}, {}).has_value());
}

TEST(Arma, FitRecoversAr1) {
	std::mt19937_64 rng(4);
	std::normal_distribution<double> z;
	std::vector<double> y(500);
	double prev = 0.0;
	for (auto &v : y) {
		v = 0.6 * prev + z(rng);
		prev = v;
	}
	const auto fit = arma::fit(y, 1, 0);
	ASSERT_TRUE(fit.ok);
	EXPECT_NEAR(fit.phi.at(0), 0.6, 0.1);
	EXPECT_NEAR(fit.sigma2, 1.0, 0.2);
}

TEST(Arma, AiccPenalty) {
	EXPECT_DOUBLE_EQ(arma::aicc(-10.0, 1, 20), 20.0 + 2.0 + 4.0 / 18.0);
	EXPECT_TRUE(std::isinf(arma::aicc(-10.0, 5, 6)));
}

TEST(Toeplitz, ProfileLikelihoodMatchesDense) {
	std::mt19937_64 rng(5);
	const auto x = oracle::iid_normal(50, 0.0, 1.0, rng);
	const auto g = oracle::fgn_acvf(0.75, 50);
	const auto p = toeplitz_profile_likelihood(g, x, false, 0.0);
	ASSERT_TRUE(p.ok);
	EXPECT_NEAR(p.log_likelihood, dense_profile_loglik(g, x), 1e-8);
}
