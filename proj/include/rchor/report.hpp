#pragma once

/**
 * @file report.hpp
 * @brief Outcome of a property check.
 */

#include <string>
#include <vector>

namespace rchor {

struct Report {
  static constexpr std::size_t kKeptViolations = 64;

  std::string property;
  std::size_t checked = 0;  // items examined: states, steps or pairs
  std::size_t passed = 0;
  std::size_t violation_count = 0;
  std::vector<std::string> violations;  // the first kKeptViolations
  std::vector<std::string> notes;

  bool ok() const { return violation_count == 0; }

  void violation(std::string msg) {
    if (violations.size() < kKeptViolations) violations.push_back(std::move(msg));
    ++violation_count;
  }

  void merge(const Report& other) {
    checked += other.checked;
    passed += other.passed;
    for (const auto& v : other.violations) violation(v);
    violation_count += other.violation_count - other.violations.size();
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  }
};

}  // namespace rchor
