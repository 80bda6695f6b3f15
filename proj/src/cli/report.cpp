#include "dsrig/cli/report.hpp"

#include "dsrig/errors.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace dsrig::cli {

namespace {

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Info: return "info";
  }
  return "info";
}

std::string quoted(const std::string& s) {
  std::ostringstream os;
  os << std::quoted(s);
  return os.str();
}

}  // namespace

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

void RunReport::check(std::string name, std::string anchor, double residual, double tolerance, std::string detail) {
  // NaN residuals fail.
  const Status s = residual <= tolerance ? Status::Pass : Status::Fail;
  records_.push_back({std::move(name), std::move(anchor), residual, tolerance, s, std::move(detail)});
}

void RunReport::flag(std::string name, std::string anchor, bool ok, std::string detail) {
  records_.push_back({std::move(name), std::move(anchor), ok ? 0.0 : 1.0, 0.0, ok ? Status::Pass : Status::Fail,
                      std::move(detail)});
}

void RunReport::info(std::string name, std::string anchor, double value, std::string detail) {
  records_.push_back({std::move(name), std::move(anchor), value, 0.0, Status::Info, std::move(detail)});
}

bool RunReport::passed() const {
  for (const auto& r : records_) {
    if (r.status == Status::Fail) return false;
  }
  return true;
}

void RunReport::write_records(std::ostream& os) const {
  os << "env command=" << command_ << '\n';
  for (const auto& [k, v] : env_) os << "env " << k << '=' << quoted(v) << '\n';
  for (const auto& r : records_) {
    os << "check name=" << r.name << " anchor=" << quoted(r.anchor) << " status=" << status_name(r.status)
       << " residual=" << format_number(r.residual) << " tolerance=" << format_number(r.tolerance);
    if (!r.detail.empty()) os << " detail=" << quoted(r.detail);
    os << '\n';
  }
  os << "verdict " << (passed() ? "pass" : "fail") << '\n';
}

void RunReport::write_summary(std::ostream& os) const {
  std::size_t width = 0;
  for (const auto& r : records_) width = std::max(width, r.name.size());
  for (const auto& r : records_) {
    os << '[' << status_name(r.status) << "] " << std::left << std::setw(static_cast<int>(width)) << r.name << "  "
       << format_number(r.residual);
    if (r.status != Status::Info) os << " (tol " << format_number(r.tolerance) << ')';
    os << "  " << r.anchor;
    if (!r.detail.empty()) os << " -- " << r.detail;
    os << '\n';
  }
  os << command_ << ": " << (passed() ? "all checks pass" : "some checks failed") << '\n';
}

void RunReport::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write report '" + path + "'");
  write_records(out);
}

}  // namespace dsrig::cli
