#include "pipeline.hpp"
#include "simulate.hpp"

#include "medcast/table.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

using namespace medcast;
using namespace medcast::tools;

namespace {

struct Flags {
	std::string data;
	std::string meta;
	std::string out;
	std::string in;
	std::string region_config;
	std::uint64_t seed = RunConfig{}.seed;
	unsigned jobs = 1;
	std::string methods = "all";
	std::string metrics = "all";
	bool json = false;
	double max_missing = SelectionRules{}.max_missing_fraction;
	bool ignore_missing_fraction = false;
	bool ignore_homogeneity = false;
};

void add_common(CLI::App *cmd, Flags &f, bool analysis_input) {
	cmd->add_option("--data", f.data, "Long-format annual flow table (station_id, year, value)")->required();
	cmd->add_option("--meta", f.meta, "Station metadata table")->required();
	cmd->add_option("--out", f.out, "Output directory")->required();
	if (analysis_input) {
		cmd->add_option("--in", f.in, "Directory with evaluation.csv and features.csv (default: --out)");
	}
	cmd->add_option("--seed", f.seed, "Run seed (MEDCAST_SEED overrides)");
	cmd->add_option("--jobs", f.jobs, "Worker threads for per-station work")->check(CLI::PositiveNumber);
	cmd->add_option("--region-config", f.region_config, "JSON file with region boxes and country mapping");
	cmd->add_option("--methods", f.methods, "Method codes, e.g. 1,2,145 (default: all)");
	cmd->add_option("--metrics", f.metrics, "Metric names, e.g. RMSE,MAE (default: all)");
	cmd->add_flag("--json", f.json, "Also write each table as a JSON records array");
	cmd->add_option("--max-missing-fraction", f.max_missing, "Daily missing-fraction threshold")
	    ->check(CLI::Range(0.0, 1.0));
	cmd->add_flag("--ignore-missing-fraction", f.ignore_missing_fraction, "Skip the daily missing-fraction rule");
	cmd->add_flag("--ignore-homogeneity", f.ignore_homogeneity, "Skip the homogeneity screening rule");
}

RunConfig to_config(const Flags &f) {
	RunConfig c;
	c.data = f.data;
	c.meta = f.meta;
	c.out = f.out;
	c.in = f.in;
	c.region_config = f.region_config;
	c.seed = f.seed;
	if (const char *env = std::getenv("MEDCAST_SEED"); env && *env) {
		const std::string text(env);
		std::uint64_t v = 0;
		const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
		if (ec != std::errc{} || ptr != text.data() + text.size()) {
			throw UsageError("MEDCAST_SEED is not an unsigned integer: " + text);
		}
		c.seed = v;
	}
	c.jobs = f.jobs;
	c.methods = parse_method_list(f.methods);
	c.metrics = parse_metric_list(f.metrics);
	c.json = f.json;
	c.selection.max_missing_fraction = f.max_missing;
	c.selection.honor_missing_fraction = !f.ignore_missing_fraction;
	c.selection.honor_homogeneity = !f.ignore_homogeneity;
	return c;
}

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"medcast: one-step-ahead annual river flow forecasting with median combiners"};
	app.require_subcommand(1);

	Flags flags;
	struct Entry {
		Command command;
		CLI::App *app;
	};
	std::vector<Entry> entries{
	    {Command::Ingest, app.add_subcommand("ingest", "Validate, select and region-tag the stations")},
	    {Command::Evaluate, app.add_subcommand("evaluate", "Rolling-origin backtest of all methods")},
	    {Command::Features, app.add_subcommand("features", "Five descriptive statistics per station")},
	    {Command::Analyze, app.add_subcommand("analyze", "Regressions, correlations and predictability")},
	    {Command::Run, app.add_subcommand("run", "ingest, evaluate, features and analyze in one go")},
	};
	for (auto &e : entries) {
		add_common(e.app, flags, e.command == Command::Analyze);
	}

	SyntheticArchiveOptions sim;
	std::string sim_out;
	auto *simulate = app.add_subcommand("simulate", "Write a synthetic station archive (series.csv, meta.csv)");
	simulate->add_option("--out", sim_out, "Output directory")->required();
	simulate->add_option("--stations", sim.stations, "Stations passing the selection rules")
	    ->check(CLI::PositiveNumber);
	simulate->add_option("--seed", sim.seed, "Generator seed");

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp &e) {
		return app.exit(e);
	} catch (const CLI::CallForAllHelp &e) {
		return app.exit(e);
	} catch (const CLI::ParseError &e) {
		app.exit(e);
		return 1;
	}

	if (simulate->parsed()) {
		try {
			const auto archive = make_synthetic_archive(sim);
			std::filesystem::create_directories(sim_out);
			write_csv(std::filesystem::path(sim_out) / "series.csv", archive.series);
			write_csv(std::filesystem::path(sim_out) / "meta.csv", archive.meta);
			return 0;
		} catch (const std::exception &e) {
			std::cerr << "medcast: " << e.what() << "\n";
			return 2;
		}
	}

	for (const auto &e : entries) {
		if (!e.app->parsed()) {
			continue;
		}
		try {
			return run_command(e.command, to_config(flags), std::cerr);
		} catch (const UsageError &ex) {
			std::cerr << "medcast: " << ex.what() << "\n";
			return 1;
		}
	}
	return 1;
}
