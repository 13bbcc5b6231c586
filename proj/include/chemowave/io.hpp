#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "chemowave/grid.hpp"

namespace chemowave {

/// %.17g, which round-trips every finite double; "nan"/"inf" otherwise.
std::string format_double(double x);

/// CSV with header `x,u,v,v_x`, one row per node, and the JSON sidecar
/// `<path>.meta.json`. The sidecar gets `columns`, `n`, `x_min`, `x_max` and
/// `version` on top of `meta`. Throws std::runtime_error on I/O failure.
void write_profile(const std::string& path, const Field& u, const Field& v, const Field& vx,
                   const nlohmann::json& meta);

struct Profile {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // one vector per column
  const std::vector<double>& column(const std::string& name) const;
  /// Field over the x column with the given extensions.
  Field field(const std::string& name, double left_ext, double right_ext) const;
  Grid1D grid() const;
};

Profile read_csv(const std::string& path);

/// Generic numeric CSV writer; columns must have equal length.
void write_columns(const std::string& path, const std::vector<std::string>& names,
                   const std::vector<const std::vector<double>*>& columns);

void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

/// Library version string recorded in sidecars.
const char* version();

}  // namespace chemowave
