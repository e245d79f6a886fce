#pragma once

#include <string>
#include <utility>
#include <vector>

namespace medcast {

/// Collects soft-failure notes (fallbacks, excluded rows, degenerate inputs).
/// Passed by pointer; a null sink discards messages.
class Diagnostics {
public:
	void add(std::string message) { messages_.push_back(std::move(message)); }

	const std::vector<std::string> &messages() const { return messages_; }
	bool empty() const { return messages_.empty(); }
	void clear() { messages_.clear(); }

	void append(const Diagnostics &other) {
		messages_.insert(messages_.end(), other.messages_.begin(), other.messages_.end());
	}

private:
	std::vector<std::string> messages_;
};

inline void note(Diagnostics *sink, std::string message) {
	if (sink) {
		sink->add(std::move(message));
	}
}

} // namespace medcast
