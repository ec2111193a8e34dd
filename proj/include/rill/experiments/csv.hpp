#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rill::experiments {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const Table&) const = default;
};

/// Shortest round-trip decimal form of `v`.
std::string format_double(double v);

void write_csv(std::ostream& out, const Table& t);
/// Throws ConfigError when the file cannot be written.
void write_csv(const std::string& path, const Table& t);
std::string to_csv(const Table& t);

}  // namespace rill::experiments
