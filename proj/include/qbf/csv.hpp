#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qbf {

/// Shortest-safe round-trip text for a double: printf "%.17g".
std::string format_real(double x);

/// Joins already formatted fields with commas.
std::string csv_line(const std::vector<std::string>& fields);

/// Parsed CSV: the header row and the data rows, all as raw strings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads comma-separated text; blank lines are skipped, surrounding
/// whitespace of each field is trimmed. Throws InvalidArgument on an empty
/// input or on rows whose width differs from the header.
CsvTable read_csv(std::istream& in);

/// Strict real parse of a whole field; throws InvalidArgument on failure.
double parse_real(const std::string& field);

/// Writes `content` to `path`, replacing the file. Throws InvalidArgument
/// when the file cannot be opened.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qbf
