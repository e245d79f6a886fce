#pragma once

#include "medcast/accuracy.hpp"
#include "medcast/combine.hpp"
#include "medcast/series.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace medcast::tools {

enum class Command { Ingest, Evaluate, Features, Analyze, Run };

std::string_view command_name(Command command);

/// Invalid flags or flag combinations (exit status 1).
class UsageError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct RunConfig {
	std::filesystem::path data;
	std::filesystem::path meta;
	std::filesystem::path out;
	std::filesystem::path in; ///< analyze: directory holding evaluation.csv and features.csv; defaults to out
	std::filesystem::path region_config;
	SelectionRules selection;
	std::uint64_t seed = 20231;
	unsigned jobs = 1;
	std::vector<MethodId> methods = all_methods();
	std::vector<Metric> metrics{kAllMetrics.begin(), kAllMetrics.end()};
	bool json = false;
};

/// "all" or a comma-separated list of method codes ("1,2,145"). Throws UsageError.
std::vector<MethodId> parse_method_list(std::string_view text);

/// "all" or a comma-separated list of metric names. Throws UsageError.
std::vector<Metric> parse_metric_list(std::string_view text);

/// Runs one subcommand and writes its artifacts into config.out. All results
/// are computed before anything is written, so a failing run leaves no
/// artifacts behind. Returns the process exit status (0 success, 1 usage
/// error, 2 data error); messages go to `err`.
int run_command(Command command, const RunConfig &config, std::ostream &err);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

} // namespace medcast::tools
