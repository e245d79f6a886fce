#include "medcast/combine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace medcast {

MethodId MethodId::base(BaseMethod method) {
	return MethodId(1u << static_cast<unsigned>(method));
}

MethodId MethodId::combo(std::uint32_t mask) {
	if (mask >= (1u << kBaseMethodCount) || std::popcount(mask) < 2) {
		throw std::invalid_argument("combiner variant needs 2 to 5 base methods");
	}
	return MethodId(mask);
}

std::vector<BaseMethod> MethodId::members() const {
	std::vector<BaseMethod> out;
	for (unsigned i = 0; i < kBaseMethodCount; ++i) {
		if (mask_ & (1u << i)) {
			out.push_back(static_cast<BaseMethod>(i));
		}
	}
	return out;
}

BaseMethod MethodId::base_method() const {
	if (!is_base()) {
		throw std::logic_error("base_method() called on a combiner variant");
	}
	return static_cast<BaseMethod>(std::countr_zero(mask_));
}

std::string MethodId::label() const {
	if (is_base()) {
		return std::string(base_method_name(base_method()));
	}
	std::string out = "combiner of ";
	bool first = true;
	for (auto m : members()) {
		out += first ? "(" : ",(";
		out += std::to_string(static_cast<int>(m) + 1);
		out += ")";
		first = false;
	}
	return out;
}

std::string MethodId::code() const {
	std::string out;
	for (auto m : members()) {
		out += static_cast<char>('1' + static_cast<int>(m));
	}
	return out;
}

std::optional<MethodId> MethodId::from_code(std::string_view code) {
	if (code.empty() || code.size() > kBaseMethodCount) {
		return std::nullopt;
	}
	std::uint32_t mask = 0;
	for (char ch : code) {
		if (ch < '1' || ch > '5') {
			return std::nullopt;
		}
		const std::uint32_t bit = 1u << static_cast<unsigned>(ch - '1');
		if (mask & bit) {
			return std::nullopt;
		}
		mask |= bit;
	}
	return MethodId(mask);
}

std::strong_ordering MethodId::operator<=>(const MethodId &other) const {
	if (auto c = size() <=> other.size(); c != 0) {
		return c;
	}
	return mask_ <=> other.mask_;
}

std::vector<MethodId> enumerate_variants(std::span<const BaseMethod> bases) {
	std::uint32_t universe = 0;
	for (auto b : bases) {
		universe |= 1u << static_cast<unsigned>(b);
	}
	if (std::popcount(universe) < 2) {
		throw std::invalid_argument("enumerate_variants: need at least 2 distinct base methods");
	}
	std::vector<MethodId> out;
	// iterate submasks of the universe
	for (std::uint32_t sub = universe; sub != 0; sub = (sub - 1) & universe) {
		if (std::popcount(sub) >= 2) {
			out.push_back(MethodId::combo(sub));
		}
	}
	std::sort(out.begin(), out.end());
	return out;
}

std::vector<MethodId> all_methods() {
	std::vector<MethodId> out;
	std::vector<BaseMethod> bases;
	for (unsigned i = 0; i < kBaseMethodCount; ++i) {
		bases.push_back(static_cast<BaseMethod>(i));
		out.push_back(MethodId::base(bases.back()));
	}
	const auto combos = enumerate_variants(bases);
	out.insert(out.end(), combos.begin(), combos.end());
	return out;
}

double median_combine(std::span<const double> forecasts) {
	if (forecasts.size() < 2) {
		throw std::invalid_argument("median_combine: need at least 2 forecasts");
	}
	for (double f : forecasts) {
		if (!std::isfinite(f)) {
			throw std::invalid_argument("median_combine: non-finite forecast");
		}
	}
	std::vector<double> v(forecasts.begin(), forecasts.end());
	const std::size_t n = v.size();
	const std::size_t mid = n / 2;
	std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
	const double upper = v[mid];
	if (n % 2 == 1) {
		return upper;
	}
	const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
	return 0.5 * (lower + upper);
}

} // namespace medcast
