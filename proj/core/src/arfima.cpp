#include "medcast/base_methods.hpp"

#include "medcast/arma.hpp"
#include "medcast/optimize.hpp"
#include "medcast/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace medcast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double arfima_negloglik(std::span<const double> z, double d, std::span<const double> phi,
                        std::span<const double> theta, double *sigma2 = nullptr) {
	const auto g = arma::arfima_acvf(d, phi, theta, z.size());
	if (g.empty()) {
		return kInf;
	}
	const auto prof = toeplitz_profile_likelihood(g, z, false, 0.0);
	if (!prof.ok) {
		return kInf;
	}
	if (sigma2) {
		*sigma2 = prof.scale;
	}
	return -prof.log_likelihood;
}

// AR coefficients from sample autocovariances via Yule-Walker (always stationary).
std::vector<double> yule_walker(std::span<const double> y, int order) {
	const std::size_t n = y.size();
	std::vector<double> r(static_cast<std::size_t>(order) + 1, 0.0);
	for (std::size_t k = 0; k < r.size() && k < n; ++k) {
		double acc = 0.0;
		for (std::size_t t = k; t < n; ++t) {
			acc += y[t] * y[t - k];
		}
		r[k] = acc / static_cast<double>(n);
	}
	if (!(r[0] > 0.0)) {
		return std::vector<double>(static_cast<std::size_t>(order), 0.0);
	}
	std::vector<double> partial;
	std::vector<double> phi;
	double v = r[0];
	for (int k = 1; k <= order; ++k) {
		double acc = r[static_cast<std::size_t>(k)];
		for (int j = 1; j < k; ++j) {
			acc -= phi[static_cast<std::size_t>(j - 1)] * r[static_cast<std::size_t>(k - j)];
		}
		const double kappa = std::clamp(acc / v, -0.999, 0.999);
		partial.push_back(kappa);
		phi = arma::pacf_to_ar(partial);
		v *= 1.0 - kappa * kappa;
	}
	return phi;
}

struct Packing {
	int p = 0;
	int q = 0;
	double d_bound = 0.4999;

	void unpack(std::span<const double> u, double &d, std::vector<double> &phi, std::vector<double> &theta) const {
		d = d_bound * std::tanh(u[0]);
		std::vector<double> r;
		for (int i = 0; i < p; ++i) {
			r.push_back(std::tanh(u[static_cast<std::size_t>(1 + i)]));
		}
		phi = arma::pacf_to_ar(r);
		r.clear();
		for (int j = 0; j < q; ++j) {
			r.push_back(std::tanh(u[static_cast<std::size_t>(1 + p + j)]));
		}
		theta = arma::pacf_to_ar(r);
		for (double &t : theta) {
			t = -t;
		}
	}

	std::vector<double> pack(double d, std::span<const double> phi, std::span<const double> theta) const {
		std::vector<double> u;
		u.push_back(std::atanh(std::clamp(d / d_bound, -0.999, 0.999)));
		auto push_partials = [&](std::vector<double> coeffs, bool negate) {
			if (negate) {
				for (double &c : coeffs) {
					c = -c;
				}
			}
			auto partial = arma::ar_to_pacf(coeffs);
			for (std::size_t i = 0; i < coeffs.size(); ++i) {
				const double r = partial ? (*partial)[i] : 0.0;
				u.push_back(std::atanh(std::clamp(r, -0.995, 0.995)));
			}
		};
		push_partials({phi.begin(), phi.end()}, false);
		push_partials({theta.begin(), theta.end()}, true);
		return u;
	}
};

} // namespace

double arfima_predict(std::span<const double> train, const ArfimaModel &model) {
	const std::size_t n = train.size();
	if (n == 0) {
		throw std::invalid_argument("arfima_predict: empty training segment");
	}
	if (model.degenerate) {
		return model.mean;
	}
	// pi(B) = phi(B) (1 - B)^d / theta(B)
	const std::vector<double> w = arma::frac_diff_weights(model.d, n + 1);
	std::vector<double> c(n + 1, 0.0);
	for (std::size_t k = 0; k <= n; ++k) {
		double v = w[k];
		for (std::size_t i = 1; i <= model.phi.size() && i <= k; ++i) {
			v -= model.phi[i - 1] * w[k - i];
		}
		c[k] = v;
	}
	std::vector<double> pi(n + 1, 0.0);
	for (std::size_t k = 0; k <= n; ++k) {
		double v = c[k];
		for (std::size_t j = 1; j <= model.theta.size() && j <= k; ++j) {
			v -= model.theta[j - 1] * pi[k - j];
		}
		pi[k] = v;
	}
	double pred = model.mean;
	for (std::size_t k = 1; k <= n; ++k) {
		pred -= pi[k] * (train[n - k] - model.mean);
	}
	return pred;
}

ArfimaModel fit_arfima(std::span<const double> train, const ArfimaOptions &options, Diagnostics *diag) {
	const std::size_t n = train.size();
	if (n < 3) {
		throw std::invalid_argument("fit_arfima: need at least 3 observations");
	}
	ArfimaModel model;
	model.mean = std::accumulate(train.begin(), train.end(), 0.0) / static_cast<double>(n);
	double var = 0.0;
	for (double v : train) {
		var += (v - model.mean) * (v - model.mean);
	}
	var /= static_cast<double>(n);
	if (!(var > 1e-24 * std::max(1.0, model.mean * model.mean))) {
		model.degenerate = true;
		model.next_value = model.mean;
		note(diag, "ARFIMA: degenerate (constant) training data; forecast equals the constant");
		return model;
	}

	std::vector<double> z(train.begin(), train.end());
	for (double &v : z) {
		v -= model.mean;
	}
	const double bound = options.d_bound;

	// (a) d from ARFIMA(2, d, 0); the AR part is concentrated out by Yule-Walker
	// on the fractionally differenced series, then the exact likelihood is
	// evaluated at (d, phi(d)).
	auto profile = [&](double d) {
		const auto y = arma::frac_diff(z, d);
		const auto phi = yule_walker(y, 2);
		return arfima_negloglik(z, d, phi, {});
	};
	const auto step_a = optim::grid_then_golden(profile, -bound, bound, 21, 1e-5);
	double d_hat = step_a.x;
	if (!std::isfinite(step_a.value)) {
		d_hat = 0.0;
		note(diag, "ARFIMA: d profile likelihood failed; starting from d = 0");
	}

	// (b) fractional differencing
	const auto y = arma::frac_diff(z, d_hat);

	// (c) ARMA order by AICc
	arma::ArmaFit best_arma;
	int best_p = -1;
	int best_q = -1;
	double best_aicc = kInf;
	for (int p = 0; p <= options.max_p; ++p) {
		for (int q = 0; q <= options.max_q; ++q) {
			if (static_cast<double>(p + q + 2) >= static_cast<double>(n)) {
				continue;
			}
			auto f = arma::fit(y, p, q);
			if (!f.ok || !std::isfinite(f.aicc)) {
				note(diag, "ARFIMA: ARMA(" + std::to_string(p) + "," + std::to_string(q) + ") fit failed; skipped");
				continue;
			}
			if (f.aicc < best_aicc) {
				best_aicc = f.aicc;
				best_arma = std::move(f);
				best_p = p;
				best_q = q;
			}
		}
	}

	auto fallback = [&](const std::string &why) {
		model.p = 0;
		model.q = 0;
		model.phi.clear();
		model.theta.clear();
		model.d = d_hat;
		double s2 = 0.0;
		model.log_likelihood = -arfima_negloglik(z, d_hat, {}, {}, &s2);
		model.sigma2 = s2;
		note(diag, "ARFIMA: " + why + "; using ARFIMA(0, d, 0)");
	};

	if (best_p < 0) {
		fallback("no ARMA order could be fitted");
	} else {
		// (d) joint re-estimation
		Packing pk{best_p, best_q, bound};
		const std::size_t k = static_cast<std::size_t>(1 + best_p + best_q);
		double d_fit = d_hat;
		std::vector<double> phi = best_arma.phi;
		std::vector<double> theta = best_arma.theta;
		double value = kInf;
		if (k == 1) {
			auto r = optim::golden_section([&](double d) { return arfima_negloglik(z, d, {}, {}); }, -bound, bound,
			                               1e-6);
			// keep the better of the bracket search and the step-(a) value
			const double at_a = arfima_negloglik(z, d_hat, {}, {});
			d_fit = r.value <= at_a ? r.x : d_hat;
			value = std::min(r.value, at_a);
		} else {
			auto objective = [&](std::span<const double> u) {
				double d = 0.0;
				std::vector<double> ph, th;
				pk.unpack(u, d, ph, th);
				return arfima_negloglik(z, d, ph, th);
			};
			optim::NelderMeadOptions opts;
			opts.max_evaluations = options.joint_evaluations_per_parameter * static_cast<int>(k);
			opts.initial_step = 0.1;
			auto r = optim::nelder_mead(objective, pk.pack(d_hat, phi, theta), opts);
			model.joint_evaluations = r.evaluations;
			model.joint_converged = r.converged;
			if (!r.converged) {
				note(diag, "ARFIMA: joint re-estimation stopped at the evaluation limit");
			}
			if (std::isfinite(r.value)) {
				pk.unpack(r.x, d_fit, phi, theta);
				value = r.value;
			}
		}
		if (!std::isfinite(value)) {
			fallback("joint re-estimation failed");
		} else {
			model.d = d_fit;
			model.p = best_p;
			model.q = best_q;
			model.phi = std::move(phi);
			model.theta = std::move(theta);
			double s2 = 0.0;
			model.log_likelihood = -arfima_negloglik(z, model.d, model.phi, model.theta, &s2);
			model.sigma2 = s2;
		}
	}

	model.next_value = arfima_predict(train, model);
	if (!std::isfinite(model.next_value)) {
		fallback("non-finite forecast");
		model.next_value = arfima_predict(train, model);
	}
	return model;
}

} // namespace medcast
