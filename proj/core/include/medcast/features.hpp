#pragma once

#include "medcast/diagnostics.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace medcast {

/// Descriptive statistics of one full annual series.
struct SeriesFeatures {
	double cv = 0.0;
	double acf1 = 0.0;
	double hurst = 0.5;
	double trend_strength = 0.0;
	double spectral_entropy = 1.0;
};

enum class Feature { CV = 0, Acf1 = 1, Hurst = 2, TrendStrength = 3, SpectralEntropy = 4 };

inline constexpr std::array<Feature, 5> kAllFeatures{Feature::CV, Feature::Acf1, Feature::Hurst,
                                                     Feature::TrendStrength, Feature::SpectralEntropy};

/// Column names: cv, acf1, hurst, trend_strength, spectral_entropy.
std::string_view feature_name(Feature feature);
std::optional<Feature> parse_feature(std::string_view name);
double feature_value(const SeriesFeatures &features, Feature feature);

// ------------------------------------------------------------ fGn

struct FgnFit {
	double mu = 0.0;
	double sigma = 0.0;
	double hurst = 0.5;
	double log_likelihood = 0.0;
};

/// gamma(k) = (sigma^2 / 2) (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) for k = 0..lags-1.
std::vector<double> fgn_acvf(double hurst, std::size_t lags, double sigma = 1.0);

/// Exact Gaussian log-likelihood of `x` as fGn with the given H, mean (GLS)
/// and variance profiled out.
double fgn_profile_loglik(std::span<const double> x, double hurst);

/// Maximum likelihood fGn fit. H is searched on (0.01, 0.99) with a grid then
/// golden-section refinement (tolerance 1e-5). Throws std::invalid_argument for
/// fewer than 10 values and std::domain_error("degenerate series") for zero
/// variance.
FgnFit fit_fgn(std::span<const double> x);

/// sigma / mu of the fitted process; throws std::domain_error if mu <= 0.
double coefficient_of_variation(const FgnFit &fit);

// ------------------------------------------------------------ dependence

/// Lag-1 sample autocorrelation about the overall mean. Throws
/// std::invalid_argument for fewer than 3 values, std::domain_error for zero
/// variance.
double acf1(std::span<const double> x);

// ------------------------------------------------------------ trend

/// Friedman's variable-span smoother on an equally spaced grid. Primary spans
/// 0.05, 0.2, 0.5 of n (tweeter, midrange, woofer), no bass enhancement.
/// Requires at least 10 values.
std::vector<double> supersmooth(std::span<const double> x);

/// Running-lines smoother with a fixed span (fraction of n). Used internally by
/// supersmooth; exposed for testing. When `cv_residuals` is non-null it
/// receives |leave-one-out residuals|.
std::vector<double> running_lines(std::span<const double> y, double span, std::vector<double> *cv_residuals = nullptr);

/// max(0, 1 - Var(x - trend) / Var(x)) with the supersmoother trend. A
/// constant series gives 0 with a diagnostic.
double trend_strength(std::span<const double> x, Diagnostics *diag = nullptr);

// ------------------------------------------------------------ spectrum

enum class SpectrumEstimator {
	Autoregressive, ///< Burg AR fit, order by AIC (smooth estimate)
	Periodogram,    ///< raw periodogram
};

/// Raw periodogram |sum x_t e^{-i w_j t}|^2 / n at w_j = 2 pi j / n, j = 1..floor(n/2),
/// after removing the mean.
std::vector<double> periodogram(std::span<const double> x);

/// AR spectral density (up to a constant) at the same Fourier frequencies.
/// Order chosen by AIC up to min(n - 1, floor(10 log10 n)).
std::vector<double> ar_spectrum(std::span<const double> x);

/// Shannon entropy of the normalised spectral density over the Fourier
/// frequencies, divided by log(number of frequencies); in [0, 1]. Throws
/// std::invalid_argument for fewer than 10 values, std::domain_error for zero
/// variance.
double spectral_entropy(std::span<const double> x, SpectrumEstimator estimator = SpectrumEstimator::Autoregressive);

/// All five statistics. Throws on degenerate input (see the individual
/// estimators).
SeriesFeatures compute_features(std::span<const double> x, Diagnostics *diag = nullptr);

} // namespace medcast
