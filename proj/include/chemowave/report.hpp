#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace chemowave {

/// One machine-checkable inequality: lhs <= rhs + slack.
struct Check {
  std::string name;
  std::string claim;  // short description of the bound being tested
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool applicable = true;
  std::string note;

  bool pass() const;
};

struct BoundsReport {
  std::vector<Check> checks;

  Check& add(std::string name, std::string claim, double lhs, double rhs, double slack = 0.0);
  Check& add_not_applicable(std::string name, std::string claim, std::string reason);
  void append(const BoundsReport& other);

  bool all_pass() const;
  std::size_t failures() const;
  const Check* find(const std::string& name) const;

  /// Array of {name, paper_ref, lhs, rhs, slack, pass}; paper_ref carries the claim text.
  nlohmann::json to_json() const;
};

}  // namespace chemowave
