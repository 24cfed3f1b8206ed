#include "wulff/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "wulff/errors.hpp"

namespace wulff {

std::string format_number(double value) {
  // snprintf is locale-dependent only after setlocale(); the tools never call it.
  if (value == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", value);
  return buf;
}

void KeyValueReport::add(std::string key, double value) {
  entries_.emplace_back(std::move(key), format_number(value));
}

void KeyValueReport::add(std::string key, long long value) {
  entries_.emplace_back(std::move(key), std::to_string(value));
}

void KeyValueReport::add(std::string key, bool value) {
  entries_.emplace_back(std::move(key), value ? "true" : "false");
}

void KeyValueReport::add(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

std::string KeyValueReport::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return {};
}

std::string KeyValueReport::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

void CsvTable::add_row(const std::vector<double>& row) {
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double x : row) cells.push_back(format_number(x));
  rows_.push_back(std::move(cells));
}

void CsvTable::add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

std::string CsvTable::to_text() const {
  std::ostringstream out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  emit(header_);
  for (const auto& row : rows_) emit(row);
  return out.str();
}

double parse_number(const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last)
    throw ValidationError("not a number: '" + token + "'");
  return value;
}

}  // namespace wulff
