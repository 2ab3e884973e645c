#pragma once

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "tdual/io/json.hpp"

namespace tdual {

/// Outcome of one registered check.
struct Check {
  std::string name;
  std::string topic;  ///< the statement being exercised
  bool passed = false;
  double residual = 0.0;
  double seconds = 0.0;
  std::string detail;
};

/// An observation that is reported but has no pass/fail status.
struct Note {
  std::string name;
  std::string text;
};

struct Report {
  std::string spec;
  std::string suite;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<Check> checks;
  std::vector<Note> notes;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.passed ? 0 : 1;
    return n;
  }

  void append(Report other) {
    for (auto& c : other.checks) checks.push_back(std::move(c));
    for (auto& n : other.notes) notes.push_back(std::move(n));
  }
};

namespace io {

/// Residuals are printed in a fixed format so that the document does not
/// depend on the last bits of a floating-point sum. Runtimes are left out.
inline std::string format_residual(double r) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << r;
  return s.str();
}

inline Json report_to_json(const Report& r) {
  Json j;
  j["spec"] = r.spec;
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["tol"] = format_residual(r.tol);
  j["passed"] = r.passed();
  j["checks"] = Json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name},
                           {"topic", c.topic},
                           {"passed", c.passed},
                           {"max_residual", format_residual(c.residual)},
                           {"detail", c.detail}});
  j["notes"] = Json::array();
  for (const auto& n : r.notes) j["notes"].push_back({{"name", n.name}, {"text", n.text}});
  return j;
}

inline std::string report_to_text(const Report& r) {
  std::ostringstream s;
  s << "spec " << r.spec << ", suite " << r.suite << ", seed " << r.seed << ", tol " << format_residual(r.tol) << "\n";
  for (const auto& c : r.checks) {
    s << (c.passed ? "PASS " : "FAIL ") << c.name << "  residual " << format_residual(c.residual) << "  ("
      << std::fixed << std::setprecision(2) << c.seconds << " s)\n";
    s.unsetf(std::ios::floatfield);
    s << "     " << c.topic << "\n";
    if (!c.detail.empty()) s << "     " << c.detail << "\n";
  }
  for (const auto& n : r.notes) s << "note " << n.name << ": " << n.text << "\n";
  s << (r.passed() ? "all checks passed" : std::to_string(r.failures()) + " check(s) failed") << "\n";
  return s.str();
}

}  // namespace io
}  // namespace tdual
