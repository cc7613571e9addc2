#pragma once

#include <map>
#include <string>
#include <vector>

// Uniformly sampled observable records with run metadata, plus the CSV
// serialization shared by engine and oracle outputs. CSV layout: optional
// leading '#' comment lines, then a header row with the time column first;
// complex quantities appear as <name>_re, <name>_im column pairs.
namespace ccsb {

struct TimeSeries {
  std::vector<std::string> columns;  // names excluding the time column
  std::vector<double> t;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> metadata;

  void append(double time, std::vector<double> row);
  std::size_t col_index(const std::string& name) const;
  bool has_column(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
  bool uniform_spacing(double rel_tol = 1e-9) const;
};

void write_csv(const std::string& path, const TimeSeries& series,
               const std::vector<std::string>& comment_lines = {});

TimeSeries read_csv(const std::string& path);

}  // namespace ccsb
