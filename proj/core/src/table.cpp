#include "medcast/table.hpp"

#include "medcast/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace medcast {

namespace {

std::vector<std::string> split_line(const std::string &line, char delim) {
	std::vector<std::string> out;
	std::string cell;
	bool quoted = false;
	for (std::size_t i = 0; i < line.size(); ++i) {
		const char c = line[i];
		if (quoted) {
			if (c == '"') {
				if (i + 1 < line.size() && line[i + 1] == '"') {
					cell.push_back('"');
					++i;
				} else {
					quoted = false;
				}
			} else {
				cell.push_back(c);
			}
		} else if (c == '"' && cell.empty()) {
			quoted = true;
		} else if (c == delim) {
			out.push_back(std::move(cell));
			cell.clear();
		} else {
			cell.push_back(c);
		}
	}
	out.push_back(std::move(cell));
	return out;
}

std::string trim(std::string s) {
	const auto first = s.find_first_not_of(" \t\r\n");
	if (first == std::string::npos) {
		return {};
	}
	const auto last = s.find_last_not_of(" \t\r\n");
	return s.substr(first, last - first + 1);
}

std::string quote_if_needed(const std::string &cell) {
	if (cell.find_first_of(",\"\n") == std::string::npos) {
		return cell;
	}
	std::string out = "\"";
	for (char c : cell) {
		if (c == '"') {
			out.push_back('"');
		}
		out.push_back(c);
	}
	out.push_back('"');
	return out;
}

} // namespace

Table::Table(std::vector<std::string> names, std::vector<bool> numeric_flags)
    : columns(std::move(names)), numeric(std::move(numeric_flags)) {
	numeric.resize(columns.size(), false);
}

std::optional<std::size_t> Table::column_index(std::string_view name) const {
	for (std::size_t i = 0; i < columns.size(); ++i) {
		if (columns[i] == name) {
			return i;
		}
	}
	return std::nullopt;
}

std::size_t Table::require_column(std::string_view name) const {
	if (auto idx = column_index(name)) {
		return *idx;
	}
	throw DataError("malformed header: missing column '" + std::string(name) + "'");
}

void Table::add_row(std::vector<std::string> row) {
	if (row.size() != columns.size()) {
		throw std::invalid_argument("table row width does not match header");
	}
	rows.push_back(std::move(row));
}

Table read_delimited(const std::filesystem::path &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw DataError("cannot open file: " + path.string());
	}
	std::string header;
	if (!std::getline(in, header)) {
		throw DataError("malformed header: empty file " + path.string());
	}
	if (header.size() >= 3 && static_cast<unsigned char>(header[0]) == 0xEF &&
	    static_cast<unsigned char>(header[1]) == 0xBB && static_cast<unsigned char>(header[2]) == 0xBF) {
		header.erase(0, 3);
	}
	const char delim = header.find('\t') != std::string::npos ? '\t' : ',';

	Table table;
	std::set<std::string> seen;
	for (auto &name : split_line(header, delim)) {
		name = trim(name);
		if (name.empty()) {
			throw DataError("malformed header: empty column name in " + path.string());
		}
		if (!seen.insert(name).second) {
			throw DataError("malformed header: duplicate column '" + name + "' in " + path.string());
		}
		table.columns.push_back(name);
	}
	table.numeric.assign(table.columns.size(), false);

	std::string line;
	while (std::getline(in, line)) {
		if (!line.empty() && line.back() == '\r') {
			line.pop_back();
		}
		if (trim(line).empty()) {
			continue;
		}
		auto cells = split_line(line, delim);
		for (auto &c : cells) {
			c = trim(std::move(c));
		}
		table.rows.push_back(std::move(cells));
	}
	return table;
}

void write_csv(const std::filesystem::path &path, const Table &table) {
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out) {
		throw std::runtime_error("cannot write " + path.string());
	}
	for (std::size_t i = 0; i < table.columns.size(); ++i) {
		out << (i ? "," : "") << quote_if_needed(table.columns[i]);
	}
	out << '\n';
	for (const auto &row : table.rows) {
		for (std::size_t i = 0; i < row.size(); ++i) {
			out << (i ? "," : "") << quote_if_needed(row[i]);
		}
		out << '\n';
	}
}

void write_json_records(const std::filesystem::path &path, const Table &table) {
	nlohmann::ordered_json records = nlohmann::ordered_json::array();
	for (const auto &row : table.rows) {
		nlohmann::ordered_json obj = nlohmann::ordered_json::object();
		for (std::size_t i = 0; i < table.columns.size(); ++i) {
			if (table.numeric[i]) {
				double v = 0.0;
				if (parse_cell(row[i], v) == CellKind::Number) {
					obj[table.columns[i]] = v;
				} else {
					obj[table.columns[i]] = nullptr;
				}
			} else {
				obj[table.columns[i]] = row[i];
			}
		}
		records.push_back(std::move(obj));
	}
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out) {
		throw std::runtime_error("cannot write " + path.string());
	}
	out << records.dump(1) << '\n';
}

CellKind parse_cell(std::string_view text, double &value) {
	if (text.empty() || text == "NA" || text == "na" || text == "NaN") {
		return CellKind::Missing;
	}
	if (text.front() == '+') {
		text.remove_prefix(1);
	}
	const auto *first = text.data();
	const auto *last = text.data() + text.size();
	auto [ptr, ec] = std::from_chars(first, last, value);
	if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
		return CellKind::Invalid;
	}
	return CellKind::Number;
}

std::string format_number(double value) {
	if (std::isnan(value)) {
		return "NA";
	}
	if (std::isinf(value)) {
		return value > 0 ? "Inf" : "-Inf";
	}
	if (value == 0.0) {
		return "0"; // folds -0
	}
	char buf[64];
	auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
	return std::string(buf, ptr);
}

} // namespace medcast
