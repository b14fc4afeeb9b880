#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "lab/errors.hpp"

namespace lab {

// %.17g: enough digits for a lossless double round-trip, short otherwise.
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw ConfigError("cannot open for writing: " + path);
    write_cells(header);
  }

  void row(const std::vector<std::string>& cells) { write_cells(cells); }

  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(fmt_g17(v));
    write_cells(cells);
  }

  // Common experiment schema: integer tags first, then observables.
  void row(long long trial, long long step, const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size() + 2);
    cells.push_back(std::to_string(trial));
    cells.push_back(std::to_string(step));
    for (double v : values) cells.push_back(fmt_g17(v));
    write_cells(cells);
  }

 private:
  void write_cells(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::ofstream out_;
};

}  // namespace lab
