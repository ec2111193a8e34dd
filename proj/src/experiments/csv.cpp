#include "rill/experiments/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rill/errors.hpp"

namespace rill::experiments {
namespace {

void put_field(std::ostream& out, const std::string& f) {
  if (f.find_first_of(",\"\n") == std::string::npos) {
    out << f;
    return;
  }
  out << '"';
  for (char c : f) out << (c == '"' ? "\"\"" : std::string(1, c));
  out << '"';
}

void put_row(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    put_field(out, row[i]);
  }
  out << '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Table& t) {
  put_row(out, t.header);
  for (const auto& r : t.rows) put_row(out, r);
}

void write_csv(const std::string& path, const Table& t) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write_csv(out, t);
}

std::string to_csv(const Table& t) {
  std::ostringstream s;
  write_csv(s, t);
  return s.str();
}

}  // namespace rill::experiments
