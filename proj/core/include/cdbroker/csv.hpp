#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdbroker::csv {

// Minimal RFC-4180-ish CSV handling for the report files this project
// produces and re-reads. Fields are quoted only when needed; embedded
// newlines are not supported.
std::string escape(const std::string& field);
void write_row(std::ostream& os, const std::vector<std::string>& fields);
std::vector<std::string> parse_line(const std::string& line);
// All rows of a stream, blank lines skipped.
std::vector<std::vector<std::string>> read_all(std::istream& is);

}  // namespace cdbroker::csv
