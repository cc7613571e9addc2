#include "ccsb/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ccsb/types.hpp"

namespace ccsb {

void TimeSeries::append(double time, std::vector<double> row) {
  require(row.size() == columns.size(), "TimeSeries: row width mismatch");
  // strictly monotone; backward-in-time runs record decreasing clocks
  if (t.size() >= 2)
    require((time - t.back()) * (t[1] - t[0]) > 0.0, "TimeSeries: sample times must be monotone");
  else if (t.size() == 1)
    require(time != t.back(), "TimeSeries: duplicate sample time");
  t.push_back(time);
  rows.push_back(std::move(row));
}

std::size_t TimeSeries::col_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  require(it != columns.end(), "TimeSeries: no column named '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

bool TimeSeries::has_column(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

std::vector<double> TimeSeries::column(const std::string& name) const {
  const std::size_t j = col_index(name);
  std::vector<double> v(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) v[i] = rows[i][j];
  return v;
}

bool TimeSeries::uniform_spacing(double rel_tol) const {
  if (t.size() < 3) return true;
  const double dt0 = t[1] - t[0];
  for (std::size_t i = 2; i < t.size(); ++i) {
    if (std::abs((t[i] - t[i - 1]) - dt0) > rel_tol * std::max(1.0, std::abs(dt0))) return false;
  }
  return true;
}

namespace {
// Round-trip formatting, C locale by construction.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void write_csv(const std::string& path, const TimeSeries& series,
               const std::vector<std::string>& comment_lines) {
  std::ofstream out(path);
  require(out.good(), "write_csv: cannot open " + path);
  for (const auto& line : comment_lines) out << "# " << line << "\n";
  out << "t";
  for (const auto& c : series.columns) out << "," << c;
  out << "\n";
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    out << fmt(series.t[i]);
    for (double v : series.rows[i]) out << "," << fmt(v);
    out << "\n";
  }
  require(out.good(), "write_csv: write failed for " + path);
}

TimeSeries read_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "read_csv: cannot open " + path);
  TimeSeries series;
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    if (!header_done) {
      bool first = true;
      while (std::getline(ss, cell, ',')) {
        if (first) {
          require(cell == "t", "read_csv: first column must be t");
          first = false;
        } else {
          series.columns.push_back(cell);
        }
      }
      header_done = true;
      continue;
    }
    std::vector<double> row;
    bool first = true;
    double time = 0.0;
    while (std::getline(ss, cell, ',')) {
      const double v = std::strtod(cell.c_str(), nullptr);
      if (first) {
        time = v;
        first = false;
      } else {
        row.push_back(v);
      }
    }
    require(row.size() == series.columns.size(), "read_csv: ragged row in " + path);
    series.append(time, std::move(row));
  }
  require(header_done, "read_csv: no header in " + path);
  return series;
}

}  // namespace ccsb
