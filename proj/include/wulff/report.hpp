#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wulff {

/// Fixed 15-significant-digit, locale-independent formatting.
std::string format_number(double value);

/// Ordered `key=value` record. Insertion order is the output order.
class KeyValueReport {
 public:
  void add(std::string key, double value);
  void add(std::string key, long long value);
  void add(std::string key, int value) { add(std::move(key), static_cast<long long>(value)); }
  void add(std::string key, bool value);
  void add(std::string key, std::string value);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  /// Value for `key`, or empty string when absent.
  std::string get(const std::string& key) const;
  /// One `key=value` line per entry.
  std::string to_text() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Minimal CSV builder with a fixed header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(const std::vector<double>& row);
  void add_row(std::vector<std::string> row);
  std::size_t rows() const { return rows_.size(); }
  std::string to_text() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Locale-independent decimal parse; throws ValidationError on junk.
double parse_number(const std::string& token);

}  // namespace wulff
