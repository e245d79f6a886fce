#pragma once

#include "medcast/base_methods.hpp"

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace medcast {

/// A forecasting method: one base method, or the median combiner over a
/// subset (bitmask over base methods) of size 2 or more.
class MethodId {
public:
	static MethodId base(BaseMethod method);
	/// Throws std::invalid_argument unless the mask names 2..5 bases.
	static MethodId combo(std::uint32_t mask);

	bool is_base() const { return std::popcount(mask_) == 1; }
	std::uint32_t mask() const { return mask_; }
	int size() const { return std::popcount(mask_); }
	/// Bases included, in base-number order.
	std::vector<BaseMethod> members() const;
	/// Only meaningful for base methods.
	BaseMethod base_method() const;

	/// "Naive" for bases, "combiner of (1),(4),(5)" for combos.
	std::string label() const;
	/// Compact code: "1".."5" for bases, member digits for combos ("145").
	std::string code() const;
	static std::optional<MethodId> from_code(std::string_view code);

	/// Report order: bases first in base-number order, then combos by size,
	/// then mask.
	std::strong_ordering operator<=>(const MethodId &other) const;
	bool operator==(const MethodId &other) const = default;

private:
	explicit MethodId(std::uint32_t mask) : mask_(mask) {}
	std::uint32_t mask_ = 1;
};

/// Every subset of size >= 2 of `bases`, ordered by size then bitmask.
/// Throws std::invalid_argument with fewer than 2 distinct bases.
std::vector<MethodId> enumerate_variants(std::span<const BaseMethod> bases);

/// The 5 base methods followed by the 26 combiner variants.
std::vector<MethodId> all_methods();

/// Sample median; the mean of the two middle values for even counts. Throws
/// std::invalid_argument for fewer than 2 values or non-finite input.
double median_combine(std::span<const double> forecasts);

} // namespace medcast
