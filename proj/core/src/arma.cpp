#include "medcast/arma.hpp"

#include "medcast/optimize.hpp"
#include "medcast/toeplitz.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace medcast::arma {

std::vector<double> pacf_to_ar(std::span<const double> partial) {
	std::vector<double> phi;
	std::vector<double> prev;
	for (std::size_t k = 0; k < partial.size(); ++k) {
		prev = phi;
		phi.assign(k + 1, 0.0);
		for (std::size_t j = 0; j < k; ++j) {
			phi[j] = prev[j] - partial[k] * prev[k - 1 - j];
		}
		phi[k] = partial[k];
	}
	return phi;
}

std::optional<std::vector<double>> ar_to_pacf(std::span<const double> phi) {
	std::vector<double> cur(phi.begin(), phi.end());
	std::vector<double> partial(phi.size(), 0.0);
	for (std::size_t k = cur.size(); k-- > 0;) {
		const double r = cur[k];
		if (!(std::abs(r) < 1.0)) {
			return std::nullopt;
		}
		partial[k] = r;
		const double denom = 1.0 - r * r;
		std::vector<double> next(k, 0.0);
		for (std::size_t j = 0; j < k; ++j) {
			next[j] = (cur[j] + r * cur[k - 1 - j]) / denom;
		}
		cur.swap(next);
	}
	return partial;
}

bool is_stationary(std::span<const double> phi) {
	return ar_to_pacf(phi).has_value();
}

bool is_invertible(std::span<const double> theta) {
	std::vector<double> neg(theta.size());
	for (std::size_t j = 0; j < theta.size(); ++j) {
		neg[j] = -theta[j];
	}
	return is_stationary(neg);
}

std::vector<double> acvf(std::span<const double> phi, std::span<const double> theta, std::size_t lags) {
	const std::size_t p = phi.size();
	const std::size_t q = theta.size();
	if (!is_stationary(phi)) {
		return {};
	}
	const std::size_t r = std::max(p, q);

	// psi weights 0..q
	std::vector<double> psi(q + 1, 0.0);
	psi[0] = 1.0;
	for (std::size_t j = 1; j <= q; ++j) {
		double v = theta[j - 1];
		for (std::size_t i = 1; i <= std::min(j, p); ++i) {
			v += phi[i - 1] * psi[j - i];
		}
		psi[j] = v;
	}
	auto theta_at = [&](std::size_t j) { return j == 0 ? 1.0 : theta[j - 1]; };

	Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r + 1), static_cast<Eigen::Index>(r + 1));
	Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(r + 1));
	for (std::size_t k = 0; k <= r; ++k) {
		const auto row = static_cast<Eigen::Index>(k);
		a(row, row) += 1.0;
		for (std::size_t i = 1; i <= p; ++i) {
			const std::size_t lag = k >= i ? k - i : i - k;
			a(row, static_cast<Eigen::Index>(lag)) -= phi[i - 1];
		}
		double rhs = 0.0;
		for (std::size_t j = k; j <= q; ++j) {
			rhs += theta_at(j) * psi[j - k];
		}
		b(row) = rhs;
	}
	const Eigen::VectorXd g = a.fullPivLu().solve(b);

	std::vector<double> out(std::max(lags, r + 1), 0.0);
	for (std::size_t k = 0; k <= r; ++k) {
		out[k] = g(static_cast<Eigen::Index>(k));
	}
	for (std::size_t k = r + 1; k < out.size(); ++k) {
		double v = 0.0;
		for (std::size_t i = 1; i <= p; ++i) {
			v += phi[i - 1] * out[k - i];
		}
		out[k] = v;
	}
	out.resize(lags);
	if (lags > 0 && !(out[0] > 0.0 && std::isfinite(out[0]))) {
		return {};
	}
	return out;
}

std::vector<double> frac_diff_weights(double d, std::size_t n) {
	std::vector<double> w(n, 0.0);
	if (n == 0) {
		return w;
	}
	w[0] = 1.0;
	for (std::size_t k = 1; k < n; ++k) {
		w[k] = w[k - 1] * (static_cast<double>(k) - 1.0 - d) / static_cast<double>(k);
	}
	return w;
}

std::vector<double> frac_diff(std::span<const double> x, double d) {
	if (!(d > -0.5 && d <= 1.0)) {
		throw std::invalid_argument("frac_diff: d must lie in (-0.5, 1]");
	}
	for (double v : x) {
		if (!std::isfinite(v)) {
			throw std::invalid_argument("frac_diff: non-finite input");
		}
	}
	const std::size_t n = x.size();
	const std::vector<double> w = frac_diff_weights(d, n);
	std::vector<double> y(n, 0.0);
	for (std::size_t t = 0; t < n; ++t) {
		double acc = 0.0;
		for (std::size_t k = 0; k <= t; ++k) {
			acc += w[k] * x[t - k];
		}
		y[t] = acc;
	}
	return y;
}

std::vector<double> fractional_noise_acvf(double d, std::size_t lags) {
	if (!(d > -0.5 && d < 0.5)) {
		throw std::invalid_argument("fractional_noise_acvf: d must lie in (-0.5, 0.5)");
	}
	std::vector<double> g(lags, 0.0);
	if (lags == 0) {
		return g;
	}
	g[0] = std::exp(std::lgamma(1.0 - 2.0 * d) - 2.0 * std::lgamma(1.0 - d));
	for (std::size_t h = 1; h < lags; ++h) {
		const double hd = static_cast<double>(h);
		g[h] = g[h - 1] * (hd - 1.0 + d) / (hd - d);
	}
	return g;
}

std::vector<double> arfima_acvf(double d, std::span<const double> phi, std::span<const double> theta,
                                std::size_t lags) {
	if (!(d > -0.5 && d < 0.5)) {
		return {};
	}
	if (phi.empty() && theta.empty()) {
		return fractional_noise_acvf(d, lags);
	}
	const std::size_t cap = std::max<std::size_t>(2 * lags, 200);
	// grow the ARMA sequence until it is negligible
	std::size_t k_max = std::min<std::size_t>(std::max<std::size_t>(64, lags), cap);
	std::vector<double> ga;
	while (true) {
		ga = acvf(phi, theta, k_max + 1);
		if (ga.empty()) {
			return {};
		}
		const double tol = 1e-12 * ga[0];
		std::size_t last = k_max;
		while (last > 0 && std::abs(ga[last]) <= tol) {
			--last;
		}
		if (last < k_max || k_max >= cap) {
			k_max = std::min(last + 1, k_max);
			ga.resize(k_max + 1);
			break;
		}
		k_max = std::min(2 * k_max, cap);
	}
	if (std::abs(d) < 1e-12) {
		ga.resize(lags, 0.0);
		return ga;
	}
	const std::size_t K = ga.size() - 1;
	const std::vector<double> gf = fractional_noise_acvf(d, lags + K + 1);
	std::vector<double> out(lags, 0.0);
	for (std::size_t h = 0; h < lags; ++h) {
		double acc = ga[0] * gf[h];
		for (std::size_t k = 1; k <= K; ++k) {
			// gamma_A is symmetric: lags h - k and h + k
			const std::size_t lo = h >= k ? h - k : k - h;
			acc += ga[k] * (gf[lo] + gf[h + k]);
		}
		out[h] = acc;
	}
	return out;
}

namespace {

// Solves P = T P T' + R R' for the companion-form state covariance.
bool stationary_covariance(const Eigen::MatrixXd &T, const Eigen::VectorXd &R, Eigen::MatrixXd &P) {
	const Eigen::Index r = T.rows();
	const Eigen::Index r2 = r * r;
	Eigen::MatrixXd A = Eigen::MatrixXd::Identity(r2, r2);
	// vec(T P T') = (T kron T) vec(P)
	for (Eigen::Index i = 0; i < r; ++i) {
		for (Eigen::Index j = 0; j < r; ++j) {
			for (Eigen::Index k = 0; k < r; ++k) {
				for (Eigen::Index l = 0; l < r; ++l) {
					A(i + j * r, k + l * r) -= T(i, k) * T(j, l);
				}
			}
		}
	}
	const Eigen::MatrixXd RR = R * R.transpose();
	const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(RR.data(), r2);
	const Eigen::VectorXd sol = A.partialPivLu().solve(rhs);
	if (!sol.allFinite()) {
		return false;
	}
	P = Eigen::Map<const Eigen::MatrixXd>(sol.data(), r, r);
	P = 0.5 * (P + P.transpose());
	return P(0, 0) > 0.0;
}

} // namespace

// Below this length an O(n^2) Durbin-Levinson pass on the autocovariances is
// cheaper than the Kalman filter, whose covariance rarely reaches steady state.
constexpr std::size_t kLevinsonMaxLength = 256;

std::optional<double> exact_loglik(std::span<const double> y, std::span<const double> phi,
                                   std::span<const double> theta, double *sigma2) {
	if (!is_stationary(phi) || !is_invertible(theta)) {
		return std::nullopt;
	}
	const std::size_t n = y.size();
	if (n == 0) {
		return std::nullopt;
	}
	if (n <= kLevinsonMaxLength) {
		const auto g = acvf(phi, theta, n);
		if (g.empty()) {
			return std::nullopt;
		}
		const auto prof = toeplitz_profile_likelihood(g, y, false, 0.0);
		if (!prof.ok) {
			return std::nullopt;
		}
		if (sigma2) {
			*sigma2 = prof.scale;
		}
		return prof.log_likelihood;
	}
	const std::size_t p = phi.size();
	const std::size_t q = theta.size();
	const Eigen::Index r = static_cast<Eigen::Index>(std::max(p, q + 1));

	Eigen::MatrixXd T = Eigen::MatrixXd::Zero(r, r);
	for (std::size_t i = 0; i < p; ++i) {
		T(static_cast<Eigen::Index>(i), 0) = phi[i];
	}
	for (Eigen::Index i = 0; i + 1 < r; ++i) {
		T(i, i + 1) = 1.0;
	}
	Eigen::VectorXd R = Eigen::VectorXd::Zero(r);
	R(0) = 1.0;
	for (std::size_t j = 0; j < q; ++j) {
		R(static_cast<Eigen::Index>(j + 1)) = theta[j];
	}

	Eigen::MatrixXd P;
	if (r == 1) {
		const double t = T(0, 0);
		P = Eigen::MatrixXd::Constant(1, 1, 1.0 / (1.0 - t * t));
	} else if (!stationary_covariance(T, R, P)) {
		return std::nullopt;
	}
	// Companion-form recursions written out: (T M)_ij = phi_i M_0j + M_{i+1,j}.
	const auto ru = static_cast<std::size_t>(r);
	std::vector<double> tv(ru, 0.0);
	for (std::size_t i = 0; i < p; ++i) {
		tv[i] = phi[i];
	}
	std::vector<double> rv(R.data(), R.data() + r);
	std::vector<double> pm(ru * ru);
	for (std::size_t i = 0; i < ru; ++i) {
		for (std::size_t j = 0; j < ru; ++j) {
			pm[i * ru + j] = P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
		}
	}
	std::vector<double> tp(ru * ru);
	std::vector<double> a(ru, 0.0);
	std::vector<double> a_next(ru);
	std::vector<double> gain(ru);
	double ssq = 0.0;
	double log_det = 0.0;
	bool steady = false;
	double prev_f = std::numeric_limits<double>::infinity();

	for (std::size_t t = 0; t < n; ++t) {
		const double f = pm[0];
		if (!(f > 0.0) || !std::isfinite(f)) {
			return std::nullopt;
		}
		const double v = y[t] - a[0];
		ssq += v * v / f;
		log_det += std::log(f);
		if (!steady) {
			for (std::size_t i = 0; i < ru; ++i) {
				gain[i] = pm[i * ru] / f;
			}
		}
		for (std::size_t i = 0; i < ru; ++i) {
			a[i] += gain[i] * v;
		}
		for (std::size_t i = 0; i < ru; ++i) {
			a_next[i] = tv[i] * a[0] + (i + 1 < ru ? a[i + 1] : 0.0);
		}
		a.swap(a_next);
		if (!steady) {
			// filtered covariance P - P e0 e0' P / f, then T P T' + R R'
			for (std::size_t i = 0; i < ru; ++i) {
				const double gi = pm[i * ru] / f;
				for (std::size_t j = 0; j < ru; ++j) {
					tp[i * ru + j] = pm[i * ru + j] - gi * pm[j];
				}
			}
			for (std::size_t i = 0; i < ru; ++i) {
				for (std::size_t j = 0; j < ru; ++j) {
					pm[i * ru + j] = tv[i] * tp[j] + (i + 1 < ru ? tp[(i + 1) * ru + j] : 0.0);
				}
			}
			for (std::size_t i = 0; i < ru; ++i) {
				for (std::size_t j = 0; j < ru; ++j) {
					tp[i * ru + j] = tv[j] * pm[i * ru] + (j + 1 < ru ? pm[i * ru + j + 1] : 0.0) + rv[i] * rv[j];
				}
			}
			pm.swap(tp);
			if (std::abs(f - prev_f) < 1e-13 * f && std::abs(pm[0] - f) < 1e-13 * f) {
				steady = true;
				for (std::size_t i = 0; i < ru; ++i) {
					gain[i] = pm[i * ru] / pm[0];
				}
			}
			prev_f = f;
		}
	}
	const double dn = static_cast<double>(n);
	const double s2 = ssq / dn;
	if (!(s2 > 0.0) || !std::isfinite(s2)) {
		return std::nullopt;
	}
	if (sigma2) {
		*sigma2 = s2;
	}
	return -0.5 * (dn * std::log(2.0 * std::numbers::pi * s2) + log_det + dn);
}

double css(std::span<const double> y, std::span<const double> phi, std::span<const double> theta) {
	const std::size_t n = y.size();
	const std::size_t p = phi.size();
	const std::size_t q = theta.size();
	std::vector<double> e(n, 0.0);
	double ssq = 0.0;
	for (std::size_t t = p; t < n; ++t) {
		double v = y[t];
		for (std::size_t i = 0; i < p; ++i) {
			v -= phi[i] * y[t - 1 - i];
		}
		for (std::size_t j = 0; j < q && j < t; ++j) {
			v -= theta[j] * e[t - 1 - j];
		}
		e[t] = v;
		ssq += v * v;
	}
	return ssq;
}

double aicc(double log_likelihood, int k, std::size_t n) {
	const double dn = static_cast<double>(n);
	if (dn <= k + 1) {
		return std::numeric_limits<double>::infinity();
	}
	return -2.0 * log_likelihood + 2.0 * k + 2.0 * k * (k + 1.0) / (dn - k - 1.0);
}

namespace {

void unpack(std::span<const double> u, int p, int q, std::vector<double> &phi, std::vector<double> &theta) {
	std::vector<double> r(static_cast<std::size_t>(std::max(p, q)));
	for (int i = 0; i < p; ++i) {
		r[static_cast<std::size_t>(i)] = std::tanh(u[static_cast<std::size_t>(i)]);
	}
	phi = pacf_to_ar(std::span<const double>(r.data(), static_cast<std::size_t>(p)));
	for (int j = 0; j < q; ++j) {
		r[static_cast<std::size_t>(j)] = std::tanh(u[static_cast<std::size_t>(p + j)]);
	}
	theta = pacf_to_ar(std::span<const double>(r.data(), static_cast<std::size_t>(q)));
	for (double &t : theta) {
		t = -t;
	}
}

} // namespace

ArmaFit fit(std::span<const double> y, int p, int q) {
	ArmaFit out;
	const int k = p + q;
	std::vector<double> phi, theta;
	if (k == 0) {
		double s2 = 0.0;
		auto ll = exact_loglik(y, phi, theta, &s2);
		if (ll) {
			out.sigma2 = s2;
			out.log_likelihood = *ll;
			out.aicc = aicc(*ll, 1, y.size());
			out.ok = true;
		}
		return out;
	}

	auto css_objective = [&](std::span<const double> u) {
		std::vector<double> ph, th;
		unpack(u, p, q, ph, th);
		return css(y, ph, th);
	};
	optim::NelderMeadOptions opts;
	opts.max_evaluations = 200 * (k + 1);
	opts.initial_step = 0.3;
	const auto css_fit = optim::nelder_mead(css_objective, std::vector<double>(static_cast<std::size_t>(k), 0.0), opts);

	auto ml_objective = [&](std::span<const double> u) {
		std::vector<double> ph, th;
		unpack(u, p, q, ph, th);
		auto ll = exact_loglik(y, ph, th);
		return ll ? -*ll : std::numeric_limits<double>::infinity();
	};
	std::vector<double> start = css_fit.x;
	for (double &v : start) {
		v = std::clamp(v, -3.0, 3.0); // keep away from the tanh plateau
	}
	opts.initial_step = 0.1;
	auto ml_fit = optim::nelder_mead(ml_objective, start, opts);
	if (!std::isfinite(ml_fit.value)) {
		ml_fit = optim::nelder_mead(ml_objective, std::vector<double>(static_cast<std::size_t>(k), 0.0), opts);
		if (!std::isfinite(ml_fit.value)) {
			return out;
		}
	}
	unpack(ml_fit.x, p, q, out.phi, out.theta);
	double s2 = 0.0;
	auto ll = exact_loglik(y, out.phi, out.theta, &s2);
	if (!ll) {
		return out;
	}
	out.sigma2 = s2;
	out.log_likelihood = *ll;
	out.aicc = aicc(*ll, k + 1, y.size());
	out.ok = true;
	return out;
}

} // namespace medcast::arma
