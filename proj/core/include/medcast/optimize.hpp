#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace medcast::optim {

using Objective1D = std::function<double(double)>;
using ObjectiveND = std::function<double(std::span<const double>)>;

struct ScalarResult {
	double x = 0.0;
	double value = 0.0;
	int evaluations = 0;
	bool converged = false;
};

/// Golden-section minimisation on [lower, upper]. Stops when the bracket is
/// narrower than `x_tol`.
ScalarResult golden_section(const Objective1D &f, double lower, double upper, double x_tol = 1e-8,
                            int max_iter = 200);

/// Evaluates `f` on `grid_points` equally spaced points in [lower, upper] and
/// refines the best cell with golden-section search. Guards against
/// multimodal profiles that a plain bracket search would miss.
ScalarResult grid_then_golden(const Objective1D &f, double lower, double upper, int grid_points,
                              double x_tol = 1e-8);

struct NelderMeadOptions {
	double f_tol = 1e-8; ///< relative spread of simplex values at convergence
	int max_evaluations = 2000;
	double initial_step = 0.1;
};

struct VectorResult {
	std::vector<double> x;
	double value = 0.0;
	int evaluations = 0;
	bool converged = false;
};

/// Unconstrained Nelder-Mead. Non-finite objective values are treated as
/// +infinity, so constraints can be expressed by returning infinity.
VectorResult nelder_mead(const ObjectiveND &f, std::vector<double> start, const NelderMeadOptions &options = {});

/// Runs Nelder-Mead from each start in order and keeps the best result. Ties
/// keep the earliest start, so the outcome is independent of anything but the
/// start list.
VectorResult multi_start(const ObjectiveND &f, const std::vector<std::vector<double>> &starts,
                         const NelderMeadOptions &options = {});

} // namespace medcast::optim
