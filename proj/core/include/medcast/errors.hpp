#pragma once

#include <stdexcept>
#include <string>

namespace medcast {

/// Input data could not be used (missing file, malformed header, duplicate
/// station). The CLI maps this to exit status 2.
class DataError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

} // namespace medcast
