#pragma once

// Plain-text output: CSV with a header row, '.' decimal point and 17
// significant digits, written the same way on every run.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qamp/phase_space.hpp"

namespace qamp {

/// Locale-independent %.17g; non-finite values print as nan / inf / -inf.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Column-named rows of numbers (a sampled time series or any table).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row) {
    if (row.size() != columns.size()) {
      throw std::invalid_argument("Table: row width does not match header");
    }
    rows.push_back(std::move(row));
  }

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw std::out_of_range("Table: no column " + name);
  }

  std::vector<double> column(const std::string& name) const {
    const std::size_t k = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
  }
};

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    os << (i ? "," : "") << t.columns[i];
  }
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << (i ? "," : "") << format_number(r[i]);
    }
    os << '\n';
  }
}

/// alpha_re,alpha_im,value rows, real axis fastest.
inline void write_grid_csv(std::ostream& os, const PhaseSpaceGrid& g) {
  os << "alpha_re,alpha_im,value\n";
  for (std::size_t j = 0; j < g.n_im(); ++j) {
    for (std::size_t i = 0; i < g.n_re(); ++i) {
      os << format_number(g.re_axis()[i]) << ','
         << format_number(g.im_axis()[j]) << ',' << format_number(g.at(i, j))
         << '\n';
    }
  }
}

}  // namespace qamp
