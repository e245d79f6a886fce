#include "medcast/features.hpp"

#include "medcast/optimize.hpp"
#include "medcast/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace medcast {

namespace {

constexpr double kHurstLower = 0.01;
constexpr double kHurstUpper = 0.99;

void require_length(std::span<const double> x, std::size_t minimum, const char *what) {
	if (x.size() < minimum) {
		throw std::invalid_argument(std::string(what) + ": need at least " + std::to_string(minimum) + " values");
	}
	for (double v : x) {
		if (!std::isfinite(v)) {
			throw std::invalid_argument(std::string(what) + ": non-finite value");
		}
	}
}

double mean_of(std::span<const double> x) {
	double s = 0.0;
	for (double v : x) {
		s += v;
	}
	return s / static_cast<double>(x.size());
}

bool has_variance(std::span<const double> x) {
	const double m = mean_of(x);
	double ss = 0.0;
	for (double v : x) {
		ss += (v - m) * (v - m);
	}
	return ss > 1e-24 * std::max(1.0, m * m) * static_cast<double>(x.size());
}

// Burg estimates; returns the AR coefficients (x_t = sum phi_k x_{t-k} + e_t)
// of the AIC-selected order and the innovation variance.
std::vector<double> burg_ar(std::span<const double> x, double &innovation_variance) {
	const std::size_t n = x.size();
	const double m = mean_of(x);
	std::vector<double> f(n);
	for (std::size_t i = 0; i < n; ++i) {
		f[i] = x[i] - m;
	}
	std::vector<double> b = f;
	double var = 0.0;
	for (double v : f) {
		var += v * v;
	}
	var /= static_cast<double>(n);
	const double var_floor = var * 1e-14;

	const std::size_t max_order =
	    std::min(n - 1, static_cast<std::size_t>(std::floor(10.0 * std::log10(static_cast<double>(n)))));

	std::vector<double> phi;
	std::vector<double> best_phi;
	double best_var = var;
	double best_aic = static_cast<double>(n) * std::log(var);
	for (std::size_t k = 1; k <= max_order; ++k) {
		double num = 0.0;
		double den = 0.0;
		for (std::size_t t = k; t < n; ++t) {
			num += f[t] * b[t - 1];
			den += f[t] * f[t] + b[t - 1] * b[t - 1];
		}
		if (!(den > 0.0)) {
			break;
		}
		double kappa = 2.0 * num / den;
		kappa = std::clamp(kappa, -1.0 + 1e-12, 1.0 - 1e-12);

		std::vector<double> next(k);
		for (std::size_t j = 0; j + 1 < k; ++j) {
			next[j] = phi[j] - kappa * phi[k - 2 - j];
		}
		next[k - 1] = kappa;
		phi = std::move(next);

		for (std::size_t t = n - 1; t >= k; --t) {
			const double ft = f[t];
			f[t] = ft - kappa * b[t - 1];
			b[t] = b[t - 1] - kappa * ft;
		}
		var = std::max(var * (1.0 - kappa * kappa), var_floor);
		const double aic = static_cast<double>(n) * std::log(var) + 2.0 * static_cast<double>(k);
		if (aic < best_aic) {
			best_aic = aic;
			best_phi = phi;
			best_var = var;
		}
	}
	innovation_variance = best_var;
	return best_phi;
}

} // namespace

std::string_view feature_name(Feature feature) {
	switch (feature) {
	case Feature::CV:
		return "cv";
	case Feature::Acf1:
		return "acf1";
	case Feature::Hurst:
		return "hurst";
	case Feature::TrendStrength:
		return "trend_strength";
	case Feature::SpectralEntropy:
		return "spectral_entropy";
	}
	return "unknown";
}

std::optional<Feature> parse_feature(std::string_view name) {
	for (Feature f : kAllFeatures) {
		if (feature_name(f) == name) {
			return f;
		}
	}
	return std::nullopt;
}

double feature_value(const SeriesFeatures &features, Feature feature) {
	switch (feature) {
	case Feature::CV:
		return features.cv;
	case Feature::Acf1:
		return features.acf1;
	case Feature::Hurst:
		return features.hurst;
	case Feature::TrendStrength:
		return features.trend_strength;
	case Feature::SpectralEntropy:
		return features.spectral_entropy;
	}
	return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> fgn_acvf(double hurst, std::size_t lags, double sigma) {
	if (!(hurst > 0.0 && hurst < 1.0)) {
		throw std::invalid_argument("fgn_acvf: hurst must lie in (0, 1)");
	}
	const double two_h = 2.0 * hurst;
	const double s2 = sigma * sigma;
	std::vector<double> g(lags);
	for (std::size_t k = 0; k < lags; ++k) {
		const double kk = static_cast<double>(k);
		g[k] = 0.5 * s2 * (std::pow(kk + 1.0, two_h) - 2.0 * std::pow(kk, two_h) + std::pow(std::abs(kk - 1.0), two_h));
	}
	return g;
}

double fgn_profile_loglik(std::span<const double> x, double hurst) {
	const auto acvf = fgn_acvf(hurst, x.size());
	const auto profile = toeplitz_profile_likelihood(acvf, x, true);
	return profile.ok ? profile.log_likelihood : -std::numeric_limits<double>::infinity();
}

FgnFit fit_fgn(std::span<const double> x) {
	require_length(x, 10, "fit_fgn");
	if (!has_variance(x)) {
		throw std::domain_error("fit_fgn: degenerate series (zero variance)");
	}
	const auto objective = [&](double h) {
		const double ll = fgn_profile_loglik(x, h);
		return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
	};
	const auto best = optim::grid_then_golden(objective, kHurstLower, kHurstUpper, 50, 1e-5);

	const auto acvf = fgn_acvf(best.x, x.size());
	const auto profile = toeplitz_profile_likelihood(acvf, x, true);
	if (!profile.ok) {
		throw std::domain_error("fit_fgn: likelihood evaluation failed");
	}
	FgnFit fit;
	fit.hurst = best.x;
	fit.mu = profile.mean;
	fit.sigma = std::sqrt(profile.scale);
	fit.log_likelihood = profile.log_likelihood;
	return fit;
}

double coefficient_of_variation(const FgnFit &fit) {
	if (!(fit.mu > 0.0)) {
		throw std::domain_error("coefficient_of_variation: fitted mean is not positive");
	}
	return fit.sigma / fit.mu;
}

double acf1(std::span<const double> x) {
	require_length(x, 3, "acf1");
	const double m = mean_of(x);
	double num = 0.0;
	double den = 0.0;
	for (std::size_t i = 0; i < x.size(); ++i) {
		den += (x[i] - m) * (x[i] - m);
		if (i + 1 < x.size()) {
			num += (x[i] - m) * (x[i + 1] - m);
		}
	}
	if (!has_variance(x)) {
		throw std::domain_error("acf1: degenerate series (zero variance)");
	}
	return num / den;
}

std::vector<double> periodogram(std::span<const double> x) {
	const std::size_t n = x.size();
	const double m = mean_of(x);
	const std::size_t nf = n / 2;
	std::vector<double> out(nf);
	for (std::size_t j = 1; j <= nf; ++j) {
		const double w = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
		double re = 0.0;
		double im = 0.0;
		for (std::size_t t = 0; t < n; ++t) {
			const double a = w * static_cast<double>(t);
			re += (x[t] - m) * std::cos(a);
			im -= (x[t] - m) * std::sin(a);
		}
		out[j - 1] = (re * re + im * im) / static_cast<double>(n);
	}
	return out;
}

std::vector<double> ar_spectrum(std::span<const double> x) {
	const std::size_t n = x.size();
	double var = 0.0;
	const auto phi = burg_ar(x, var);
	const std::size_t nf = n / 2;
	std::vector<double> out(nf);
	for (std::size_t j = 1; j <= nf; ++j) {
		const double w = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
		double re = 1.0;
		double im = 0.0;
		for (std::size_t k = 0; k < phi.size(); ++k) {
			const double a = w * static_cast<double>(k + 1);
			re -= phi[k] * std::cos(a);
			im += phi[k] * std::sin(a);
		}
		out[j - 1] = var / (re * re + im * im);
	}
	return out;
}

double spectral_entropy(std::span<const double> x, SpectrumEstimator estimator) {
	require_length(x, 10, "spectral_entropy");
	if (!has_variance(x)) {
		throw std::domain_error("spectral_entropy: degenerate series (zero variance)");
	}
	const auto spec = estimator == SpectrumEstimator::Autoregressive ? ar_spectrum(x) : periodogram(x);
	double total = 0.0;
	for (double s : spec) {
		total += s;
	}
	if (!(total > 0.0) || !std::isfinite(total)) {
		throw std::domain_error("spectral_entropy: spectrum has no mass");
	}
	double h = 0.0;
	for (double s : spec) {
		const double p = s / total;
		if (p > 0.0) {
			h -= p * std::log(p);
		}
	}
	return std::clamp(h / std::log(static_cast<double>(spec.size())), 0.0, 1.0);
}

SeriesFeatures compute_features(std::span<const double> x, Diagnostics *diag) {
	SeriesFeatures out;
	const FgnFit fit = fit_fgn(x);
	out.cv = coefficient_of_variation(fit);
	out.hurst = fit.hurst;
	out.acf1 = acf1(x);
	out.trend_strength = trend_strength(x, diag);
	out.spectral_entropy = spectral_entropy(x);
	return out;
}

} // namespace medcast
