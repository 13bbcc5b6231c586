#include "chemowave/report.hpp"

#include <cmath>

namespace chemowave {

bool Check::pass() const {
  if (!applicable) return true;
  if (std::isnan(lhs) || std::isnan(rhs)) return false;
  return lhs <= rhs + slack;
}

Check& BoundsReport::add(std::string name, std::string claim, double lhs, double rhs, double slack) {
  Check c;
  c.name = std::move(name);
  c.claim = std::move(claim);
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = slack;
  checks.push_back(std::move(c));
  return checks.back();
}

Check& BoundsReport::add_not_applicable(std::string name, std::string claim, std::string reason) {
  Check c;
  c.name = std::move(name);
  c.claim = std::move(claim);
  c.applicable = false;
  c.lhs = std::nan("");
  c.rhs = std::nan("");
  c.note = std::move(reason);
  checks.push_back(std::move(c));
  return checks.back();
}

void BoundsReport::append(const BoundsReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool BoundsReport::all_pass() const { return failures() == 0; }

std::size_t BoundsReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.pass() ? 0 : 1;
  return n;
}

const Check* BoundsReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {
nlohmann::json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "inf" : "-inf";
}
}  // namespace

nlohmann::json BoundsReport::to_json() const {
  auto out = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json rec = {
        {"name", c.name},
        {"paper_ref", c.claim},
        {"lhs", number_or_null(c.lhs)},
        {"rhs", number_or_null(c.rhs)},
        {"slack", c.slack},
        {"pass", c.pass()},
    };
    if (!c.applicable) rec["applicable"] = false;
    if (!c.note.empty()) rec["note"] = c.note;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace chemowave
