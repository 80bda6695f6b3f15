#pragma once
//
// Run reports: one self-describing record per line,
//   check name=<id> anchor="<claim>" status=<pass|fail|info> residual=<x> tolerance=<x> [detail="..."]
// preceded by `env` lines and followed by one `verdict` line.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dsrig::cli {

enum class Status { Pass, Fail, Info };

struct CheckRecord {
  std::string name;
  std::string anchor;
  double residual = 0.0;
  double tolerance = 0.0;
  Status status = Status::Info;
  std::string detail;
};

class RunReport {
 public:
  explicit RunReport(std::string command) : command_(std::move(command)) {}

  void env(std::string key, std::string value) { env_.emplace_back(std::move(key), std::move(value)); }
  /// Records residual <= tolerance as pass/fail.
  void check(std::string name, std::string anchor, double residual, double tolerance, std::string detail = {});
  /// Records a boolean outcome (residual is 0 or 1).
  void flag(std::string name, std::string anchor, bool ok, std::string detail = {});
  /// Informational value; never affects the verdict.
  void info(std::string name, std::string anchor, double value, std::string detail = {});

  const std::vector<CheckRecord>& records() const { return records_; }
  bool passed() const;

  void write_records(std::ostream& os) const;
  void write_summary(std::ostream& os) const;
  /// Throws ConfigError when the file cannot be written.
  void save(const std::string& path) const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> env_;
  std::vector<CheckRecord> records_;
};

std::string format_number(double v);

}  // namespace dsrig::cli
