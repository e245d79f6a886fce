#include "medcast/errors.hpp"
#include "medcast/table.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace medcast;

namespace {

std::filesystem::path temp_file(const std::string &name) {
	return std::filesystem::temp_directory_path() / ("medcast_table_" + name);
}

std::string slurp(const std::filesystem::path &path) {
	std::ifstream in(path);
	std::stringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

} // namespace

TEST(Table, CsvRoundTripWithQuotes) {
	Table t({"id", "label", "value"}, {false, false, true});
	t.add_row({"S1", "combiner of (1),(4)", "1.5"});
	t.add_row({"S2", "say \"hi\"", "NA"});
	const auto path = temp_file("rt.csv");
	write_csv(path, t);
	const Table back = read_delimited(path);
	std::filesystem::remove(path);
	EXPECT_EQ(back.columns, t.columns);
	EXPECT_EQ(back.rows, t.rows);
}

TEST(Table, TabDelimitedDetected) {
	const auto path = temp_file("tab.tsv");
	std::ofstream(path) << "a\tb\n1\t2\n";
	const Table t = read_delimited(path);
	std::filesystem::remove(path);
	ASSERT_EQ(t.columns.size(), 2u);
	EXPECT_EQ(t.rows.at(0).at(1), "2");
}

TEST(Table, DuplicateColumnsRejected) {
	const auto path = temp_file("dup.csv");
	std::ofstream(path) << "a,a\n1,2\n";
	EXPECT_THROW(read_delimited(path), DataError);
	std::filesystem::remove(path);
}

TEST(Table, MissingFileRejected) {
	EXPECT_THROW(read_delimited(temp_file("does_not_exist.csv")), DataError);
}

TEST(Table, RequireColumnNamesTheColumn) {
	Table t({"a"}, {false});
	EXPECT_EQ(t.require_column("a"), 0u);
	try {
		t.require_column("zzz");
		FAIL();
	} catch (const DataError &e) {
		EXPECT_NE(std::string(e.what()).find("zzz"), std::string::npos);
	}
}

TEST(Table, JsonMirrorUsesNumbersAndNull) {
	Table t({"id", "value"}, {false, true});
	t.add_row({"S1", "2.5"});
	t.add_row({"S2", "NA"});
	const auto path = temp_file("mirror.json");
	write_json_records(path, t);
	const std::string text = slurp(path);
	std::filesystem::remove(path);
	EXPECT_NE(text.find("2.5"), std::string::npos);
	EXPECT_NE(text.find("null"), std::string::npos);
	EXPECT_EQ(text.find("\"2.5\""), std::string::npos);
}

TEST(Table, ParseCellKinds) {
	double v = 0.0;
	EXPECT_EQ(parse_cell("", v), CellKind::Missing);
	EXPECT_EQ(parse_cell("NA", v), CellKind::Missing);
	EXPECT_EQ(parse_cell("3.25", v), CellKind::Number);
	EXPECT_DOUBLE_EQ(v, 3.25);
	EXPECT_EQ(parse_cell("3.25x", v), CellKind::Invalid);
	EXPECT_EQ(parse_cell("inf", v), CellKind::Invalid);
}

TEST(Table, FormatNumberRoundTrips) {
	for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -0.0}) {
		double back = 0.0;
		ASSERT_EQ(parse_cell(format_number(x), back), CellKind::Number);
		EXPECT_EQ(back, x);
	}
	EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "NA");
}
