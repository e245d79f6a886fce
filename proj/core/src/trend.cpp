#include "medcast/base_methods.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace medcast {

double TrendModel::value_at(double t) const {
	double slope = k;
	double offset = m;
	for (std::size_t j = 0; j < changepoints.size(); ++j) {
		if (t >= changepoints[j]) {
			slope += delta[j];
			offset -= changepoints[j] * delta[j];
		}
	}
	return slope * t + offset;
}

namespace {

// min 0.5 |y - X b|^2 + lambda * sum_{j >= n_free} |b_j| by feature-sign search
// (active set with sign-constrained quadratic sub-problems and a line search
// over sign changes). The first `n_free` coefficients are unpenalised.
Eigen::VectorXd feature_sign_lasso(const Eigen::MatrixXd &X, const Eigen::VectorXd &y, Eigen::Index n_free,
                                   double lambda) {
	const Eigen::Index p = X.cols();
	const Eigen::MatrixXd G = X.transpose() * X;
	const Eigen::VectorXd c = X.transpose() * y;
	Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
	Eigen::VectorXd sign = Eigen::VectorXd::Zero(p);
	std::vector<bool> active(static_cast<std::size_t>(p), false);
	for (Eigen::Index j = 0; j < n_free; ++j) {
		active[static_cast<std::size_t>(j)] = true;
	}
	const double grad_tol = 1e-10 * std::max(1.0, c.cwiseAbs().maxCoeff());

	auto objective = [&](const Eigen::VectorXd &b) {
		const double quad = 0.5 * b.dot(G * b) - c.dot(b);
		double pen = 0.0;
		for (Eigen::Index j = n_free; j < p; ++j) {
			pen += std::abs(b(j));
		}
		return quad + lambda * pen;
	};

	for (int outer = 0; outer < 200; ++outer) {
		// feature-sign step on the current active set until it is optimal
		for (int inner = 0; inner < 200; ++inner) {
			std::vector<Eigen::Index> idx;
			for (Eigen::Index j = 0; j < p; ++j) {
				if (active[static_cast<std::size_t>(j)]) {
					idx.push_back(j);
				}
			}
			const auto m = static_cast<Eigen::Index>(idx.size());
			Eigen::MatrixXd Ga(m, m);
			Eigen::VectorXd rhs(m);
			for (Eigen::Index a = 0; a < m; ++a) {
				for (Eigen::Index b = 0; b < m; ++b) {
					Ga(a, b) = G(idx[a], idx[b]);
				}
				rhs(a) = c(idx[a]) - lambda * sign(idx[a]);
			}
			const Eigen::VectorXd sol = Ga.ldlt().solve(rhs);
			Eigen::VectorXd target = beta;
			for (Eigen::Index a = 0; a < m; ++a) {
				target(idx[a]) = sol(a);
			}

			// candidate points: the target and every sign-change crossing on the path
			Eigen::VectorXd best = target;
			double best_value = objective(target);
			for (Eigen::Index a = 0; a < m; ++a) {
				const Eigen::Index j = idx[a];
				if (j < n_free) {
					continue;
				}
				const double from = beta(j);
				const double to = target(j);
				if (from != 0.0 && (from > 0.0) != (to > 0.0)) {
					const double s = from / (from - to);
					Eigen::VectorXd cand = beta + s * (target - beta);
					cand(j) = 0.0;
					const double v = objective(cand);
					if (v < best_value) {
						best_value = v;
						best = cand;
					}
				}
			}
			beta = best;
			for (Eigen::Index j = n_free; j < p; ++j) {
				if (std::abs(beta(j)) <= 1e-15) {
					beta(j) = 0.0;
					active[static_cast<std::size_t>(j)] = false;
					sign(j) = 0.0;
				} else {
					sign(j) = beta(j) > 0.0 ? 1.0 : -1.0;
				}
			}

			const Eigen::VectorXd grad = G * beta - c;
			bool optimal = true;
			for (Eigen::Index j = 0; j < p; ++j) {
				if (!active[static_cast<std::size_t>(j)]) {
					continue;
				}
				const double r = j < n_free ? grad(j) : grad(j) + lambda * sign(j);
				if (std::abs(r) > grad_tol) {
					optimal = false;
					break;
				}
			}
			if (optimal) {
				break;
			}
		}

		// activate the most violating zero coefficient
		const Eigen::VectorXd grad = G * beta - c;
		Eigen::Index pick = -1;
		double worst = lambda + grad_tol;
		for (Eigen::Index j = n_free; j < p; ++j) {
			if (!active[static_cast<std::size_t>(j)] && std::abs(grad(j)) > worst) {
				worst = std::abs(grad(j));
				pick = j;
			}
		}
		if (pick < 0) {
			break;
		}
		active[static_cast<std::size_t>(pick)] = true;
		sign(pick) = grad(pick) > 0.0 ? -1.0 : 1.0;
	}
	return beta;
}

} // namespace

TrendModel fit_trend(std::span<const double> train, const TrendOptions &options, Diagnostics *diag) {
	const std::size_t n = train.size();
	if (n < 2) {
		throw std::invalid_argument("fit_trend: need at least 2 observations");
	}
	if (!(options.tau > 0.0) || !(options.changepoint_range > 0.0 && options.changepoint_range <= 1.0)) {
		throw std::invalid_argument("fit_trend: tau must be positive and changepoint_range in (0, 1]");
	}
	TrendModel model;
	model.tau = options.tau;
	model.time_step = 1.0 / static_cast<double>(n - 1);

	double y_scale = 0.0;
	for (double v : train) {
		y_scale = std::max(y_scale, std::abs(v));
	}
	if (y_scale == 0.0) {
		model.next_value = 0.0;
		return model;
	}

	// changepoints on a uniform index grid over the first part of the history
	const auto hist = static_cast<std::size_t>(std::floor(static_cast<double>(n) * options.changepoint_range));
	int n_cp = std::max(0, options.n_changepoints);
	const int max_cp = static_cast<int>(hist > 1 ? hist - 1 : 0);
	if (n_cp > max_cp) {
		note(diag, "Prophet: reducing changepoints from " + std::to_string(n_cp) + " to " + std::to_string(max_cp) +
		               " for a " + std::to_string(n) + "-point segment");
		n_cp = max_cp;
	}
	std::vector<std::size_t> cp_index;
	for (int j = 1; j <= n_cp; ++j) {
		const double pos = static_cast<double>(hist - 1) * j / n_cp;
		const auto i = static_cast<std::size_t>(std::lround(pos));
		if (i > 0 && (cp_index.empty() || i > cp_index.back())) {
			cp_index.push_back(i);
		}
	}

	const auto rows = static_cast<Eigen::Index>(n);
	const auto cols = static_cast<Eigen::Index>(2 + cp_index.size());
	Eigen::MatrixXd X(rows, cols);
	Eigen::VectorXd y(rows);
	for (std::size_t i = 0; i < n; ++i) {
		const double t = static_cast<double>(i) * model.time_step;
		const auto r = static_cast<Eigen::Index>(i);
		X(r, 0) = 1.0;
		X(r, 1) = t;
		for (std::size_t j = 0; j < cp_index.size(); ++j) {
			const double s = static_cast<double>(cp_index[j]) * model.time_step;
			X(r, static_cast<Eigen::Index>(2 + j)) = std::max(0.0, t - s);
		}
		y(r) = train[i] / y_scale;
	}

	// noise variance from second differences: Var(diff2) = 6 sigma^2 for white noise
	double sigma2 = 0.0;
	if (n >= 3) {
		for (std::size_t i = 2; i < n; ++i) {
			const double d2 = y(static_cast<Eigen::Index>(i)) - 2.0 * y(static_cast<Eigen::Index>(i - 1)) +
			                  y(static_cast<Eigen::Index>(i - 2));
			sigma2 += d2 * d2;
		}
		sigma2 /= 6.0 * static_cast<double>(n - 2);
	}
	const double lambda = sigma2 / options.tau;

	const Eigen::VectorXd beta = feature_sign_lasso(X, y, 2, lambda);

	model.m = beta(0) * y_scale;
	model.k = beta(1) * y_scale;
	for (std::size_t j = 0; j < cp_index.size(); ++j) {
		model.changepoints.push_back(static_cast<double>(cp_index[j]) * model.time_step);
		model.delta.push_back(beta(static_cast<Eigen::Index>(2 + j)) * y_scale);
	}
	model.next_value = model.value_at(static_cast<double>(n) * model.time_step);
	return model;
}

} // namespace medcast
