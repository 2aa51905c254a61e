#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kdereg/correspondence.hpp"
#include "kdereg/errors.hpp"

namespace kdereg::io {

namespace detail {

inline std::vector<double> parse_csv_row(const std::string& line) {
  std::vector<double> fields;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(cell, &pos);
    } catch (...) {
      return {};
    }
    while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
    if (pos != cell.size()) return {};
    fields.push_back(v);
  }
  return fields;
}

}  // namespace detail

/// Correspondence CSV rows are x_t, y_t, z_t, x_prev, y_prev, z_prev in
/// meters, with an optional seventh weight column. A leading header line is
/// skipped.
inline CorrespondenceSet read_correspondences_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError(path + ": cannot open");
  CorrespondenceSet set;
  std::string line;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::parse_csv_row(line);
    if (fields.empty() && header_allowed) {
      header_allowed = false;
      continue;
    }
    header_allowed = false;
    if (fields.size() != 6 && fields.size() != 7) {
      throw IoError(path + ": line " + std::to_string(line_no) +
                    ": expected 6 (or 7, with weight) numeric columns");
    }
    const Point3 target(fields[0], fields[1], fields[2]);
    const Point3 source(fields[3], fields[4], fields[5]);
    set.add(source, target, fields.size() == 7 ? fields[6] : 1.0);
  }
  if (set.empty()) throw IoError(path + ": no correspondence rows");
  return set;
}

inline void write_correspondences_csv(const std::string& path, const CorrespondenceSet& set,
                                      bool include_weights = false) {
  std::ofstream os(path);
  if (!os) throw IoError(path + ": cannot open for writing");
  char buf[320];
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Point3& t = set.target[i];
    const Point3& s = set.source[i];
    if (include_weights) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t.x(), t.y(),
                    t.z(), s.x(), s.y(), s.z(), set.weights[i]);
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t.x(), t.y(), t.z(),
                    s.x(), s.y(), s.z());
    }
    os << buf;
  }
  if (!os) throw IoError(path + ": write failed");
}

/// One weight per row.
inline std::vector<double> read_weights_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError(path + ": cannot open");
  std::vector<double> weights;
  std::string line;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::parse_csv_row(line);
    if (fields.empty() && header_allowed) {
      header_allowed = false;
      continue;
    }
    header_allowed = false;
    if (fields.size() != 1) {
      throw IoError(path + ": line " + std::to_string(line_no) + ": expected one weight per row");
    }
    weights.push_back(fields[0]);
  }
  return weights;
}

inline void write_weights_csv(const std::string& path, const std::vector<double>& weights) {
  std::ofstream os(path);
  if (!os) throw IoError(path + ": cannot open for writing");
  char buf[40];
  for (double w : weights) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", w);
    os << buf;
  }
  if (!os) throw IoError(path + ": write failed");
}

}  // namespace kdereg::io
