#include "medcast/base_methods.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace medcast {

std::string_view base_method_name(BaseMethod method) {
	switch (method) {
	case BaseMethod::Naive:
		return "Naive";
	case BaseMethod::Ses:
		return "SES";
	case BaseMethod::Ces:
		return "CES";
	case BaseMethod::Arfima:
		return "ARFIMA";
	case BaseMethod::Trend:
		return "Prophet";
	}
	return "?";
}

double forecast_naive(std::span<const double> train) {
	if (train.empty()) {
		throw std::invalid_argument("forecast_naive: empty training segment");
	}
	return train.back();
}

double forecast_one_step(BaseMethod method, std::span<const double> train, Diagnostics *diag) {
	if (train.empty()) {
		throw std::invalid_argument("forecast_one_step: empty training segment");
	}
	for (double v : train) {
		if (!std::isfinite(v)) {
			throw std::invalid_argument("forecast_one_step: non-finite training value");
		}
	}
	double f = 0.0;
	try {
		switch (method) {
		case BaseMethod::Naive:
			return forecast_naive(train);
		case BaseMethod::Ses:
			f = fit_ses(train, diag).forecast();
			break;
		case BaseMethod::Ces:
			f = fit_ces(train, diag).forecast();
			break;
		case BaseMethod::Arfima:
			f = fit_arfima(train, {}, diag).forecast();
			break;
		case BaseMethod::Trend:
			f = fit_trend(train, {}, diag).forecast();
			break;
		}
	} catch (const std::exception &e) {
		note(diag, std::string(base_method_name(method)) + ": fit failed (" + e.what() + "); using last value");
		return forecast_naive(train);
	}
	if (!std::isfinite(f)) {
		note(diag, std::string(base_method_name(method)) + ": non-finite forecast; using last value");
		return forecast_naive(train);
	}
	return f;
}

} // namespace medcast
