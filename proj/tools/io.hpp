#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nonholorec/lie_group.hpp"

namespace nonholorec::cli {

// Always 17 significant digits, so values survive a round trip through text.
std::string format_number(double value);

// "0.1,0.005" -> {0.1, 0.005}; throws ValidationError on malformed input.
Vec parse_coordinates(const std::string& text);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;  // empty cells are nullopt
};

void write_csv(std::ostream& out, const Table& table);
Table read_csv(std::istream& in);

// Writes to `path`, or to stdout when `path` is empty or "-".
void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace nonholorec::cli
