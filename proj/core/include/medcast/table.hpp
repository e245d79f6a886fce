#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace medcast {

/// A rectangular text table with a header row. Cells are kept as text; columns
/// flagged numeric are emitted as JSON numbers (or null for "NA").
struct Table {
	std::vector<std::string> columns;
	std::vector<bool> numeric;
	std::vector<std::vector<std::string>> rows;

	Table() = default;
	Table(std::vector<std::string> names, std::vector<bool> numeric_flags);

	std::optional<std::size_t> column_index(std::string_view name) const;
	std::size_t require_column(std::string_view name) const; ///< throws DataError
	void add_row(std::vector<std::string> row);
};

/// Reads comma- or tab-delimited UTF-8 text. The delimiter is tab when the
/// header line contains a tab, comma otherwise. Double-quoted fields are
/// supported. Throws DataError for a missing file, an empty/malformed header or
/// duplicate column names. Ragged rows are kept; callers decide.
Table read_delimited(const std::filesystem::path &path);

void write_csv(const std::filesystem::path &path, const Table &table);
void write_json_records(const std::filesystem::path &path, const Table &table);

enum class CellKind { Missing, Number, Invalid };

/// Classifies a cell: empty or "NA" is Missing; a full-width parse of a finite
/// decimal is Number.
CellKind parse_cell(std::string_view text, double &value);

/// Shortest text that round-trips the double exactly; "NA" for NaN.
std::string format_number(double value);

} // namespace medcast
