#pragma once

#include "medcast/diagnostics.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace medcast {

inline constexpr std::size_t kTrainingLength = 80;

/// The five individual forecasters, numbered as in the report labels.
enum class BaseMethod { Naive = 0, Ses = 1, Ces = 2, Arfima = 3, Trend = 4 };

inline constexpr std::size_t kBaseMethodCount = 5;

std::string_view base_method_name(BaseMethod method);

/// A training window cut from a longer series. `origin` is the 0-based offset
/// of values.front() in the parent series.
struct TrainingSegment {
	std::vector<double> values;
	std::size_t origin = 0;
};

// ---------------------------------------------------------------- Naive

/// Last observed value. Throws std::invalid_argument on an empty segment.
double forecast_naive(std::span<const double> train);

// ---------------------------------------------------------------- SES

struct SesModel {
	double alpha = 0.0;
	double level0 = 0.0;
	double final_level = 0.0;
	double sse = 0.0;

	double forecast() const { return final_level; }
};

/// Runs l_t = alpha x_t + (1 - alpha) l_{t-1} from `level0` and returns the
/// level after the last observation.
double ses_filter(std::span<const double> train, double alpha, double level0);

/// Sum of squared one-step errors x_t - l_{t-1}.
double ses_sse(std::span<const double> train, double alpha, double level0);

/// Gaussian maximum likelihood over (alpha, level0). For a given alpha the SSE
/// is quadratic in level0, so level0 is profiled exactly and alpha is found by
/// a grid plus golden-section search on [0, 1].
SesModel fit_ses(std::span<const double> train, Diagnostics *diag = nullptr);

// ---------------------------------------------------------------- CES

/// Complex exponential smoothing, non-seasonal:
///   yhat_t = l_{t-1}
///   l_t = l_{t-1} - (1 - a1) c_{t-1} + (a0 - a1) e_t
///   c_t = l_{t-1} + (1 - a0) c_{t-1} + (a0 + a1) e_t
/// with e_t = y_t - l_{t-1} and smoothing parameter a0 + i a1.
struct CesModel {
	double alpha0 = 1.3;
	double alpha1 = 1.0;
	double level0 = 0.0;
	double potential0 = 0.0;
	double level = 0.0; ///< final states
	double potential = 0.0;
	double sse = 0.0;

	double forecast() const { return level; }
};

/// Discount-matrix stability (both eigenvalues strictly inside the unit circle).
bool ces_is_stable(double alpha0, double alpha1);

/// Runs the recursion from the stored initial states; fills the final states
/// and SSE. Returns false if the states blow up.
bool ces_filter(std::span<const double> train, CesModel &model);

/// Minimises the one-step SSE over (a0, a1, l0, c0) from a fixed multi-start
/// grid, restricted to the stable region.
CesModel fit_ces(std::span<const double> train, Diagnostics *diag = nullptr);

// ---------------------------------------------------------------- ARFIMA

struct ArfimaModel {
	double d = 0.0;
	int p = 0;
	int q = 0;
	std::vector<double> phi;
	std::vector<double> theta;
	double mean = 0.0;   ///< training mean removed before fitting
	double sigma2 = 0.0; ///< innovation variance
	double log_likelihood = 0.0;
	double next_value = 0.0;
	bool degenerate = false; ///< constant training data
	int joint_evaluations = 0; ///< likelihood evaluations in step (d)
	bool joint_converged = true;

	double forecast() const { return next_value; }
};

struct ArfimaOptions {
	int max_p = 5;
	int max_q = 5;
	double d_bound = 0.5 - 1e-4;
	/// Step (d) Nelder-Mead budget, per free parameter.
	int joint_evaluations_per_parameter = 300;
};

/// Automatic ARFIMA: (a) d from an ARFIMA(2, d, 0) profile likelihood,
/// (b) fractional differencing, (c) ARMA order by AICc over p, q <= 5,
/// (d) joint maximum-likelihood re-estimation of (d, phi, theta). The forecast
/// applies the truncated AR(infinity) form to the mean-adjusted data.
ArfimaModel fit_arfima(std::span<const double> train, const ArfimaOptions &options = {},
                       Diagnostics *diag = nullptr);

/// One-step prediction from the truncated AR(infinity) representation.
double arfima_predict(std::span<const double> train, const ArfimaModel &model);

// ---------------------------------------------------------------- Trend

struct TrendOptions {
	int n_changepoints = 10;
	double changepoint_range = 0.8;
	double tau = 0.05;
};

/// Piecewise-linear growth g(t) on time scaled to [0, 1] over the training
/// span. Values are in data units.
struct TrendModel {
	double k = 0.0; ///< base slope per unit scaled time
	double m = 0.0; ///< offset
	std::vector<double> changepoints; ///< fractions of the span, increasing
	std::vector<double> delta;        ///< slope adjustments
	double tau = 0.05;
	double time_step = 0.0; ///< scaled time between observations
	double next_value = 0.0;

	double value_at(double t) const;
	double forecast() const { return next_value; }
};

/// Penalised least squares: 0.5 * RSS + (sigma^2 / tau) * sum |delta|, with
/// sigma^2 estimated from second differences and the series scaled by its
/// maximum absolute value. Solved exactly by an active-set (feature-sign)
/// method.
TrendModel fit_trend(std::span<const double> train, const TrendOptions &options = {}, Diagnostics *diag = nullptr);

// ---------------------------------------------------------------- dispatch

/// Fits `method` and returns its one-step forecast. Never throws for a
/// finite, non-empty segment: a non-finite result falls back to the Naive
/// forecast with a diagnostic.
double forecast_one_step(BaseMethod method, std::span<const double> train, Diagnostics *diag = nullptr);

} // namespace medcast
