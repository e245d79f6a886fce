#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

// Building blocks for short- and long-memory linear models. Sign convention:
//   x_t = sum_i phi_i x_{t-i} + e_t + sum_j theta_j e_{t-j}.

namespace medcast::arma {

/// Maps partial autocorrelations in (-1, 1) to the coefficients of a
/// stationary AR polynomial (Durbin-Levinson recursion).
std::vector<double> pacf_to_ar(std::span<const double> partial);

/// Inverse of pacf_to_ar; nullopt when the polynomial is not stationary.
std::optional<std::vector<double>> ar_to_pacf(std::span<const double> phi);

bool is_stationary(std::span<const double> phi);
bool is_invertible(std::span<const double> theta);

/// Autocovariances gamma(0..lags-1) of an ARMA process with unit innovation
/// variance. Empty if the AR part is not stationary.
std::vector<double> acvf(std::span<const double> phi, std::span<const double> theta, std::size_t lags);

/// Coefficients pi_0..pi_{n-1} of (1 - B)^d: pi_0 = 1, pi_k = pi_{k-1} (k - 1 - d) / k.
std::vector<double> frac_diff_weights(double d, std::size_t n);

/// Truncated fractional difference y_t = sum_{k<=t} pi_k x_{t-k} (zero
/// pre-sample). Requires finite input and d in (-0.5, 1].
std::vector<double> frac_diff(std::span<const double> x, double d);

/// Autocovariances of fractionally integrated noise (1 - B)^{-d} e_t with unit
/// innovation variance, d in (-0.5, 0.5).
std::vector<double> fractional_noise_acvf(double d, std::size_t lags);

/// Autocovariances of ARFIMA(p, d, q) with unit innovation variance, obtained by
/// convolving the ARMA and fractional-noise autocovariances. The ARMA
/// sequence is truncated once it falls below 1e-12 of its variance (capped
/// at max(2 * lags, 200) terms). Empty on failure.
std::vector<double> arfima_acvf(double d, std::span<const double> phi, std::span<const double> theta,
                                std::size_t lags);

/// Exact Gaussian log-likelihood of a zero-mean ARMA series via the Kalman
/// filter, innovation variance profiled out (returned in `sigma2`). Returns
/// nullopt when the model is not stationary/invertible or the filter fails.
std::optional<double> exact_loglik(std::span<const double> y, std::span<const double> phi,
                                   std::span<const double> theta, double *sigma2 = nullptr);

/// Conditional sum of squared residuals, conditioning on the first p values.
double css(std::span<const double> y, std::span<const double> phi, std::span<const double> theta);

struct ArmaFit {
	std::vector<double> phi;
	std::vector<double> theta;
	double sigma2 = 0.0;
	double log_likelihood = 0.0;
	double aicc = 0.0;
	bool ok = false;
};

/// Zero-mean ARMA(p, q) by maximum likelihood (CSS start, exact-likelihood
/// refinement). Parameters are kept stationary/invertible through the partial
/// autocorrelation reparametrisation.
ArmaFit fit(std::span<const double> y, int p, int q);

/// AICc with k estimated parameters on n observations; +inf when n <= k + 1.
double aicc(double log_likelihood, int k, std::size_t n);

} // namespace medcast::arma
