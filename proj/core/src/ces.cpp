#include "medcast/base_methods.hpp"

#include "medcast/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace medcast {

namespace {

constexpr double kStateLimit = 1e8; // in units of the data scale
constexpr double kAnchor0 = 1.3;    // a stable reference point of the parameter plane
constexpr double kAnchor1 = 1.0;

} // namespace

bool ces_is_stable(double alpha0, double alpha1) {
	// discount matrix D = F - g w'
	const double d11 = 1.0 - alpha0 + alpha1;
	const double d12 = -(1.0 - alpha1);
	const double d21 = 1.0 - alpha0 - alpha1;
	const double d22 = 1.0 - alpha0;
	const double trace = d11 + d22;
	const double det = d11 * d22 - d12 * d21;
	// Jury conditions for a real 2x2 matrix, with a small margin
	constexpr double margin = 1e-6;
	return std::abs(det) < 1.0 - margin && std::abs(trace) < 1.0 + det - margin;
}

bool ces_filter(std::span<const double> train, CesModel &model) {
	const double a0 = model.alpha0;
	const double a1 = model.alpha1;
	double l = model.level0;
	double c = model.potential0;
	double sse = 0.0;
	double scale = 0.0;
	for (double y : train) {
		scale = std::max(scale, std::abs(y));
	}
	const double limit = kStateLimit * std::max(scale, 1.0);
	for (double y : train) {
		const double e = y - l;
		sse += e * e;
		const double l_next = l - (1.0 - a1) * c + (a0 - a1) * e;
		const double c_next = l + (1.0 - a0) * c + (a0 + a1) * e;
		l = l_next;
		c = c_next;
		if (!std::isfinite(l) || !std::isfinite(c) || std::abs(l) > limit || std::abs(c) > limit) {
			return false;
		}
	}
	model.level = l;
	model.potential = c;
	model.sse = sse;
	return true;
}

CesModel fit_ces(std::span<const double> train, Diagnostics *diag) {
	if (train.empty()) {
		throw std::invalid_argument("fit_ces: empty training segment");
	}
	const auto [lo, hi] = std::minmax_element(train.begin(), train.end());
	CesModel model;
	if (*hi - *lo == 0.0) {
		// fixed point of the recursion: a1 = 1, c = l / a0
		model.alpha0 = kAnchor0;
		model.alpha1 = kAnchor1;
		model.level0 = train.front();
		model.potential0 = train.front() / kAnchor0;
		ces_filter(train, model);
		return model;
	}

	// work on data divided by its mean magnitude; the recursion is linear so
	// states rescale exactly
	double scale = 0.0;
	for (double v : train) {
		scale += std::abs(v);
	}
	scale /= static_cast<double>(train.size());
	std::vector<double> y(train.begin(), train.end());
	for (double &v : y) {
		v /= scale;
	}

	auto objective = [&](std::span<const double> theta) {
		if (!ces_is_stable(theta[0], theta[1])) {
			return std::numeric_limits<double>::infinity();
		}
		CesModel m;
		m.alpha0 = theta[0];
		m.alpha1 = theta[1];
		m.level0 = theta[2];
		m.potential0 = theta[3];
		if (!ces_filter(y, m)) {
			return std::numeric_limits<double>::infinity();
		}
		return m.sse;
	};

	const std::size_t head = std::min<std::size_t>(5, y.size());
	const double l_start = std::accumulate(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(head), 0.0) /
	                       static_cast<double>(head);
	std::vector<std::vector<double>> starts;
	for (double a0 : {1.0, 1.3, 1.6, 1.9}) {
		for (double a1 : {0.7, 1.0, 1.3}) {
			if (!ces_is_stable(a0, a1)) {
				continue;
			}
			starts.push_back({a0, a1, l_start, l_start / a0});
			starts.push_back({a0, a1, l_start, 0.0});
		}
	}
	optim::NelderMeadOptions opts;
	opts.max_evaluations = 1500;
	opts.initial_step = 0.1;
	auto best = optim::multi_start(objective, starts, opts);

	if (!std::isfinite(best.value) || !ces_is_stable(best.x[0], best.x[1])) {
		// project toward the anchor until admissible
		double a0 = best.x[0];
		double a1 = best.x[1];
		double lo_w = 0.0;
		double hi_w = 1.0;
		for (int i = 0; i < 60; ++i) {
			const double w = 0.5 * (lo_w + hi_w);
			if (ces_is_stable(a0 + w * (kAnchor0 - a0), a1 + w * (kAnchor1 - a1))) {
				hi_w = w;
			} else {
				lo_w = w;
			}
		}
		best.x[0] = a0 + hi_w * (kAnchor0 - a0);
		best.x[1] = a1 + hi_w * (kAnchor1 - a1);
		best.x[2] = y.front();
		best.x[3] = y.front() / best.x[0];
		note(diag, "CES: estimate outside the stability region; projected into the stability region");
	}

	model.alpha0 = best.x[0];
	model.alpha1 = best.x[1];
	model.level0 = best.x[2] * scale;
	model.potential0 = best.x[3] * scale;
	if (!ces_filter(train, model)) {
		note(diag, "CES: states diverged; falling back to last value");
		model.level = train.back();
		model.potential = train.back() / model.alpha0;
	}
	return model;
}

} // namespace medcast
