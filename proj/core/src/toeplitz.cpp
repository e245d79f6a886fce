#include "medcast/toeplitz.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace medcast {

namespace {

// Runs Durbin-Levinson once and whitens every vector in `inputs` with the same
// predictor coefficients. Returns false if a prediction variance collapses.
bool levinson_multi(std::span<const double> acvf, std::span<const std::span<const double>> inputs,
                    std::vector<std::vector<double>> &outputs, std::vector<double> &variances) {
	const std::size_t n = inputs.empty() ? 0 : inputs.front().size();
	if (acvf.size() < n) {
		throw std::invalid_argument("levinson: autocovariance sequence shorter than series");
	}
	outputs.assign(inputs.size(), std::vector<double>(n, 0.0));
	variances.assign(n, 0.0);
	if (n == 0) {
		return true;
	}
	if (!(acvf[0] > 0.0) || !std::isfinite(acvf[0])) {
		return false;
	}

	std::vector<double> phi;  // order-t coefficients phi[0..t-1]
	phi.reserve(n);
	double v = acvf[0];
	const double floor = acvf[0] * 1e-14;

	for (std::size_t t = 0; t < n; ++t) {
		variances[t] = v;
		for (std::size_t s = 0; s < inputs.size(); ++s) {
			const auto z = inputs[s];
			double pred = 0.0;
			for (std::size_t j = 0; j < phi.size(); ++j) {
				pred += phi[j] * z[t - 1 - j];
			}
			outputs[s][t] = z[t] - pred;
		}
		if (t + 1 == n) {
			break;
		}
		// extend predictor to order t+1
		double acc = acvf[t + 1];
		for (std::size_t j = 0; j < phi.size(); ++j) {
			acc -= phi[j] * acvf[t - j];
		}
		const double kappa = acc / v;
		if (!std::isfinite(kappa) || std::abs(kappa) >= 1.0) {
			return false;
		}
		const std::size_t m = phi.size();
		for (std::size_t j = 0; j < m / 2; ++j) {
			const double lo = phi[j];
			const double hi = phi[m - 1 - j];
			phi[j] = lo - kappa * hi;
			phi[m - 1 - j] = hi - kappa * lo;
		}
		if (m % 2 == 1) {
			phi[m / 2] *= 1.0 - kappa;
		}
		phi.push_back(kappa);
		v *= (1.0 - kappa * kappa);
		if (!(v > floor)) {
			return false;
		}
	}
	return true;
}

} // namespace

std::vector<double> levinson_innovations(std::span<const double> acvf, std::span<const double> z,
                                         std::vector<double> &variances) {
	std::vector<std::vector<double>> out;
	const std::span<const double> inputs[] = {z};
	if (!levinson_multi(acvf, inputs, out, variances)) {
		variances.clear();
		return {};
	}
	return std::move(out.front());
}

GaussianProfile toeplitz_profile_likelihood(std::span<const double> acvf, std::span<const double> x,
                                            bool estimate_mean, double fixed_mean) {
	GaussianProfile result;
	const std::size_t n = x.size();
	if (n == 0) {
		return result;
	}

	std::vector<double> variances;
	std::vector<std::vector<double>> out;
	double mean = fixed_mean;
	std::vector<double> resid;

	if (estimate_mean) {
		const std::vector<double> ones(n, 1.0);
		const std::span<const double> inputs[] = {x, ones};
		if (!levinson_multi(acvf, inputs, out, variances)) {
			return result;
		}
		double num = 0.0;
		double den = 0.0;
		for (std::size_t t = 0; t < n; ++t) {
			num += out[1][t] * out[0][t] / variances[t];
			den += out[1][t] * out[1][t] / variances[t];
		}
		mean = num / den;
		resid.resize(n);
		for (std::size_t t = 0; t < n; ++t) {
			resid[t] = out[0][t] - mean * out[1][t];
		}
	} else {
		std::vector<double> centred(x.begin(), x.end());
		for (double &v : centred) {
			v -= fixed_mean;
		}
		const std::span<const double> inputs[] = {centred};
		if (!levinson_multi(acvf, inputs, out, variances)) {
			return result;
		}
		resid = std::move(out[0]);
	}

	double ssq = 0.0;
	double log_det = 0.0;
	for (std::size_t t = 0; t < n; ++t) {
		ssq += resid[t] * resid[t] / variances[t];
		log_det += std::log(variances[t]);
	}
	const double dn = static_cast<double>(n);
	const double scale = ssq / dn;
	if (!(scale > 0.0) || !std::isfinite(scale)) {
		return result;
	}
	result.scale = scale;
	result.mean = mean;
	result.log_likelihood = -0.5 * (dn * std::log(2.0 * std::numbers::pi * scale) + log_det + dn);
	result.ok = std::isfinite(result.log_likelihood);
	return result;
}

} // namespace medcast
