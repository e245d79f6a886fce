#include "medcast/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace medcast::optim {

namespace {

constexpr double kInvPhi = 0.6180339887498949; // 1 / golden ratio

double finite_or_inf(double v) {
	return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

} // namespace

ScalarResult golden_section(const Objective1D &f, double lower, double upper, double x_tol, int max_iter) {
	if (!(upper > lower)) {
		throw std::invalid_argument("golden_section: empty interval");
	}
	ScalarResult r;
	double a = lower;
	double b = upper;
	double c = b - kInvPhi * (b - a);
	double d = a + kInvPhi * (b - a);
	double fc = finite_or_inf(f(c));
	double fd = finite_or_inf(f(d));
	r.evaluations = 2;
	int iter = 0;
	while ((b - a) > x_tol && iter < max_iter) {
		if (fc <= fd) {
			b = d;
			d = c;
			fd = fc;
			c = b - kInvPhi * (b - a);
			fc = finite_or_inf(f(c));
		} else {
			a = c;
			c = d;
			fc = fd;
			d = a + kInvPhi * (b - a);
			fd = finite_or_inf(f(d));
		}
		++r.evaluations;
		++iter;
	}
	r.converged = (b - a) <= x_tol;
	if (fc <= fd) {
		r.x = c;
		r.value = fc;
	} else {
		r.x = d;
		r.value = fd;
	}
	return r;
}

ScalarResult grid_then_golden(const Objective1D &f, double lower, double upper, int grid_points, double x_tol) {
	if (grid_points < 3) {
		return golden_section(f, lower, upper, x_tol);
	}
	const double step = (upper - lower) / static_cast<double>(grid_points - 1);
	int best = 0;
	double best_value = std::numeric_limits<double>::infinity();
	for (int i = 0; i < grid_points; ++i) {
		const double v = finite_or_inf(f(lower + step * i));
		if (v < best_value) {
			best_value = v;
			best = i;
		}
	}
	const double lo = lower + step * std::max(0, best - 1);
	const double hi = lower + step * std::min(grid_points - 1, best + 1);
	ScalarResult r = golden_section(f, lo, hi, x_tol);
	r.evaluations += grid_points;
	if (!(r.value <= best_value)) {
		r.x = lower + step * best;
		r.value = best_value;
	}
	return r;
}

VectorResult nelder_mead(const ObjectiveND &f, std::vector<double> start, const NelderMeadOptions &options) {
	const std::size_t n = start.size();
	VectorResult result;
	if (n == 0) {
		result.x = start;
		result.value = finite_or_inf(f(result.x));
		result.evaluations = 1;
		result.converged = true;
		return result;
	}

	std::vector<std::vector<double>> simplex(n + 1, start);
	for (std::size_t i = 0; i < n; ++i) {
		const double step = start[i] != 0.0 ? options.initial_step * std::max(1.0, std::abs(start[i]))
		                                    : options.initial_step;
		simplex[i + 1][i] += step;
	}
	std::vector<double> values(n + 1);
	int evals = 0;
	auto eval = [&](const std::vector<double> &x) {
		++evals;
		return finite_or_inf(f(x));
	};
	for (std::size_t i = 0; i <= n; ++i) {
		values[i] = eval(simplex[i]);
	}

	std::vector<std::size_t> order(n + 1);
	std::vector<double> centroid(n), trial(n), trial2(n);
	bool converged = false;

	while (evals < options.max_evaluations) {
		std::iota(order.begin(), order.end(), 0);
		std::stable_sort(order.begin(), order.end(),
		                 [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
		const std::size_t best = order.front();
		const std::size_t worst = order.back();
		const std::size_t second_worst = order[n - 1];

		const double spread = values[worst] - values[best];
		if (std::isfinite(values[best]) && std::isfinite(values[worst]) &&
		    spread <= options.f_tol * (std::abs(values[best]) + options.f_tol)) {
			converged = true;
			break;
		}

		std::fill(centroid.begin(), centroid.end(), 0.0);
		for (std::size_t i = 0; i <= n; ++i) {
			if (i == worst) {
				continue;
			}
			for (std::size_t k = 0; k < n; ++k) {
				centroid[k] += simplex[i][k];
			}
		}
		for (double &c : centroid) {
			c /= static_cast<double>(n);
		}

		for (std::size_t k = 0; k < n; ++k) {
			trial[k] = centroid[k] + (centroid[k] - simplex[worst][k]);
		}
		const double f_reflect = eval(trial);

		if (f_reflect < values[best]) {
			for (std::size_t k = 0; k < n; ++k) {
				trial2[k] = centroid[k] + 2.0 * (centroid[k] - simplex[worst][k]);
			}
			const double f_expand = eval(trial2);
			if (f_expand < f_reflect) {
				simplex[worst] = trial2;
				values[worst] = f_expand;
			} else {
				simplex[worst] = trial;
				values[worst] = f_reflect;
			}
			continue;
		}
		if (f_reflect < values[second_worst]) {
			simplex[worst] = trial;
			values[worst] = f_reflect;
			continue;
		}

		const bool outside = f_reflect < values[worst];
		for (std::size_t k = 0; k < n; ++k) {
			trial2[k] = outside ? centroid[k] + 0.5 * (trial[k] - centroid[k])
			                    : centroid[k] + 0.5 * (simplex[worst][k] - centroid[k]);
		}
		const double f_contract = eval(trial2);
		if (f_contract < std::min(f_reflect, values[worst])) {
			simplex[worst] = trial2;
			values[worst] = f_contract;
			continue;
		}

		// shrink toward best
		for (std::size_t i = 0; i <= n; ++i) {
			if (i == best) {
				continue;
			}
			for (std::size_t k = 0; k < n; ++k) {
				simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
			}
			values[i] = eval(simplex[i]);
		}
	}

	std::size_t best = 0;
	for (std::size_t i = 1; i <= n; ++i) {
		if (values[i] < values[best]) {
			best = i;
		}
	}
	result.x = simplex[best];
	result.value = values[best];
	result.evaluations = evals;
	result.converged = converged;
	return result;
}

VectorResult multi_start(const ObjectiveND &f, const std::vector<std::vector<double>> &starts,
                         const NelderMeadOptions &options) {
	if (starts.empty()) {
		throw std::invalid_argument("multi_start: no starting points");
	}
	VectorResult best;
	best.value = std::numeric_limits<double>::infinity();
	int total = 0;
	bool have = false;
	for (const auto &s : starts) {
		VectorResult r = nelder_mead(f, s, options);
		total += r.evaluations;
		if (!have || r.value < best.value) {
			best = std::move(r);
			have = true;
		}
	}
	best.evaluations = total;
	return best;
}

} // namespace medcast::optim
