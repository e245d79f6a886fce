#pragma once

#include <cstdint>

namespace medcast {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
	z += 0x9e3779b97f4a7c15ULL;
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

/// Counter-based stream derivation: the child seed depends only on
/// (seed, stream, index), never on evaluation order.
constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
	return mix64(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL)) + index);
}

} // namespace medcast
