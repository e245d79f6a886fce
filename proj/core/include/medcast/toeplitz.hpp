#pragma once

#include <span>
#include <vector>

namespace medcast {

/// One-step innovations of a zero-mean stationary Gaussian vector via the
/// Durbin-Levinson recursion on its autocovariances. `acvf` needs at least
/// `z.size()` entries. On return `variances[t]` holds the prediction-error
/// variance of z_t in acvf units. Returns an empty vector if the covariance is
/// not positive definite.
std::vector<double> levinson_innovations(std::span<const double> acvf, std::span<const double> z,
                                         std::vector<double> &variances);

struct GaussianProfile {
	double log_likelihood = 0.0; ///< innovation scale profiled out
	double scale = 0.0;          ///< ML estimate of the acvf multiplier
	double mean = 0.0;           ///< supplied mean, or the GLS estimate
	bool ok = false;
};

/// Exact Gaussian log-likelihood of `x` under covariance scale * Toeplitz(acvf)
/// with `scale` maximised analytically. With `estimate_mean` the mean is the
/// generalised-least-squares estimate, otherwise `fixed_mean`.
GaussianProfile toeplitz_profile_likelihood(std::span<const double> acvf, std::span<const double> x,
                                            bool estimate_mean, double fixed_mean = 0.0);

} // namespace medcast
