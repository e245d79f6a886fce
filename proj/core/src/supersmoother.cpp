#include "medcast/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace medcast {

namespace {

constexpr std::array<double, 3> kSpans{0.05, 0.2, 0.5};

// Local linear fit over a window of constant size, centred where possible and
// shifted inward at the ends. x_i = i.
std::vector<double> window_fit(std::span<const double> y, double span, std::vector<double> *cv) {
	const std::size_t n = y.size();
	std::size_t half = static_cast<std::size_t>(0.5 * span * static_cast<double>(n) + 0.5);
	half = std::max<std::size_t>(half, 2);
	const std::size_t width = std::min(2 * half + 1, n);

	std::vector<double> out(n, 0.0);
	if (cv) {
		cv->assign(n, 0.0);
	}
	for (std::size_t j = 0; j < n; ++j) {
		std::size_t lo = j >= half ? j - half : 0;
		if (lo + width > n) {
			lo = n - width;
		}
		const std::size_t hi = lo + width;
		double xm = 0.0;
		double ym = 0.0;
		for (std::size_t i = lo; i < hi; ++i) {
			xm += static_cast<double>(i);
			ym += y[i];
		}
		const double w = static_cast<double>(width);
		xm /= w;
		ym /= w;
		double sxx = 0.0;
		double sxy = 0.0;
		for (std::size_t i = lo; i < hi; ++i) {
			const double dx = static_cast<double>(i) - xm;
			sxx += dx * dx;
			sxy += dx * (y[i] - ym);
		}
		const double dxj = static_cast<double>(j) - xm;
		const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
		out[j] = ym + slope * dxj;
		if (cv) {
			const double leverage = 1.0 / w + (sxx > 0.0 ? dxj * dxj / sxx : 0.0);
			const double denom = 1.0 - leverage;
			if (denom > 0.0) {
				(*cv)[j] = std::abs(y[j] - out[j]) / denom;
			} else if (j > 0) {
				(*cv)[j] = (*cv)[j - 1];
			}
		}
	}
	return out;
}

} // namespace

std::vector<double> running_lines(std::span<const double> y, double span, std::vector<double> *cv_residuals) {
	if (y.size() < 3) {
		throw std::invalid_argument("running_lines: need at least 3 values");
	}
	if (!(span > 0.0 && span <= 1.0)) {
		throw std::invalid_argument("running_lines: span must lie in (0, 1]");
	}
	return window_fit(y, span, cv_residuals);
}

std::vector<double> supersmooth(std::span<const double> x) {
	const std::size_t n = x.size();
	if (n < 10) {
		throw std::invalid_argument("supersmooth: need at least 10 values");
	}
	std::array<std::vector<double>, 3> fits;
	std::array<std::vector<double>, 3> resid_smooth;
	for (std::size_t s = 0; s < 3; ++s) {
		std::vector<double> cv;
		fits[s] = window_fit(x, kSpans[s], &cv);
		resid_smooth[s] = window_fit(cv, kSpans[1], nullptr);
	}

	// per-point span with the smallest smoothed cross-validation residual
	std::vector<double> chosen(n);
	for (std::size_t j = 0; j < n; ++j) {
		double best = resid_smooth[0][j];
		chosen[j] = kSpans[0];
		for (std::size_t s = 1; s < 3; ++s) {
			if (resid_smooth[s][j] < best) {
				best = resid_smooth[s][j];
				chosen[j] = kSpans[s];
			}
		}
	}
	const std::vector<double> span_smooth = window_fit(chosen, kSpans[1], nullptr);

	std::vector<double> blended(n);
	for (std::size_t j = 0; j < n; ++j) {
		const double sp = std::clamp(span_smooth[j], kSpans[0], kSpans[2]);
		const double f = sp - kSpans[1];
		if (f >= 0.0) {
			const double w = f / (kSpans[2] - kSpans[1]);
			blended[j] = (1.0 - w) * fits[1][j] + w * fits[2][j];
		} else {
			const double w = -f / (kSpans[1] - kSpans[0]);
			blended[j] = (1.0 - w) * fits[1][j] + w * fits[0][j];
		}
	}
	return window_fit(blended, kSpans[0], nullptr);
}

double trend_strength(std::span<const double> x, Diagnostics *diag) {
	const std::size_t n = x.size();
	if (n < 10) {
		throw std::invalid_argument("trend_strength: need at least 10 values");
	}
	double mean = 0.0;
	for (double v : x) {
		mean += v;
	}
	mean /= static_cast<double>(n);
	double var_x = 0.0;
	for (double v : x) {
		var_x += (v - mean) * (v - mean);
	}
	if (!(var_x > 1e-28 * std::max(1.0, mean * mean) * static_cast<double>(n))) {
		note(diag, "trend_strength: constant series; defined as 0");
		return 0.0;
	}
	const auto trend = supersmooth(x);
	std::vector<double> rem(n);
	double rem_mean = 0.0;
	for (std::size_t i = 0; i < n; ++i) {
		rem[i] = x[i] - trend[i];
		rem_mean += rem[i];
	}
	rem_mean /= static_cast<double>(n);
	double var_r = 0.0;
	for (double r : rem) {
		var_r += (r - rem_mean) * (r - rem_mean);
	}
	return std::clamp(1.0 - var_r / var_x, 0.0, 1.0);
}

} // namespace medcast
