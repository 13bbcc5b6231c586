#include "chemowave/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chemowave {

const char* version() { return "0.1.0"; }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_json(const std::string& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return nlohmann::json::parse(in);
}

void write_columns(const std::string& path, const std::vector<std::string>& names,
                   const std::vector<const std::vector<double>*>& columns) {
  if (names.size() != columns.size() || columns.empty()) throw std::invalid_argument("column/name mismatch");
  const std::size_t n = columns.front()->size();
  for (const auto* c : columns)
    if (c->size() != n) throw std::invalid_argument("columns differ in length");
  std::string s;
  for (std::size_t k = 0; k < names.size(); ++k) s += (k ? "," : "") + names[k];
  s += '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < columns.size(); ++k) s += (k ? "," : "") + format_double((*columns[k])[i]);
    s += '\n';
  }
  write_text(path, s);
}

void write_profile(const std::string& path, const Field& u, const Field& v, const Field& vx,
                   const nlohmann::json& meta) {
  if (!(u.grid == v.grid) || !(u.grid == vx.grid)) throw ValidationError("profile fields must share a grid");
  const auto xs = u.grid.nodes();
  write_columns(path, {"x", "u", "v", "v_x"}, {&xs, &u.values, &v.values, &vx.values});
  nlohmann::json m = meta.is_object() ? meta : nlohmann::json::object();
  m["version"] = version();
  m["columns"] = {"x", "u", "v", "v_x"};
  m["n"] = u.grid.n;
  m["x_min"] = u.grid.x_min;
  m["x_max"] = u.grid.x_max;
  m["left_ext"] = u.left_ext;
  m["right_ext"] = u.right_ext;
  write_json(path + ".meta.json", m);
}

const std::vector<double>& Profile::column(const std::string& name) const {
  for (std::size_t k = 0; k < columns.size(); ++k)
    if (columns[k] == name) return data[k];
  throw ValidationError("profile has no column '" + name + "'");
}

Grid1D Profile::grid() const {
  const auto& x = column("x");
  if (x.size() < 2) throw ValidationError("profile has too few rows");
  return Grid1D::make(x.front(), x.back(), x.size());
}

Field Profile::field(const std::string& name, double left_ext, double right_ext) const {
  return Field(grid(), column(name), left_ext, right_ext);
}

Profile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  Profile p;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV: " + path);
  {
    std::stringstream ss(line);
    std::string name;
    while (std::getline(ss, name, ',')) p.columns.push_back(name);
  }
  p.data.resize(p.columns.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k >= p.columns.size()) throw ValidationError("too many fields on row " + std::to_string(row));
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw ValidationError("non-numeric field on row " + std::to_string(row));
      p.data[k++].push_back(v);
    }
    if (k != p.columns.size()) throw ValidationError("too few fields on row " + std::to_string(row));
  }
  return p;
}

}  // namespace chemowave
