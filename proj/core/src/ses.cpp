#include "medcast/base_methods.hpp"

#include "medcast/optimize.hpp"

#include <cmath>
#include <stdexcept>

namespace medcast {

double ses_filter(std::span<const double> train, double alpha, double level0) {
	double level = level0;
	for (double x : train) {
		level = alpha * x + (1.0 - alpha) * level;
	}
	return level;
}

double ses_sse(std::span<const double> train, double alpha, double level0) {
	double level = level0;
	double sse = 0.0;
	for (double x : train) {
		const double e = x - level;
		sse += e * e;
		level += alpha * e;
	}
	return sse;
}

namespace {

// Optimal level0 for a fixed alpha. Writing l_{t-1} = a_{t-1} + b_{t-1} level0
// with b_t = (1 - alpha)^t, the SSE is quadratic in level0.
double profiled_level0(std::span<const double> train, double alpha) {
	double a = 0.0;
	double b = 1.0;
	double num = 0.0;
	double den = 0.0;
	for (double x : train) {
		num += (x - a) * b;
		den += b * b;
		a = alpha * x + (1.0 - alpha) * a;
		b *= (1.0 - alpha);
	}
	return num / den;
}

} // namespace

SesModel fit_ses(std::span<const double> train, Diagnostics *diag) {
	if (train.empty()) {
		throw std::invalid_argument("fit_ses: empty training segment");
	}
	auto objective = [&](double alpha) { return ses_sse(train, alpha, profiled_level0(train, alpha)); };

	const auto best = optim::grid_then_golden(objective, 0.0, 1.0, 101, 1e-8);
	SesModel model;
	model.alpha = best.x;
	if (!best.converged || !std::isfinite(best.value)) {
		// grid-best alpha
		double grid_alpha = 0.0;
		double grid_value = objective(0.0);
		for (int i = 1; i <= 100; ++i) {
			const double a = i / 100.0;
			const double v = objective(a);
			if (v < grid_value) {
				grid_value = v;
				grid_alpha = a;
			}
		}
		model.alpha = grid_alpha;
		note(diag, "SES: alpha search did not converge; using grid-best alpha");
	}
	model.level0 = profiled_level0(train, model.alpha);
	model.final_level = ses_filter(train, model.alpha, model.level0);
	model.sse = ses_sse(train, model.alpha, model.level0);
	return model;
}

} // namespace medcast
