// Copyright 2026 The fairprice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fairprice/error.hpp"
#include "fairprice/record.hpp"

namespace fairprice::io {

/// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& text, std::size_t line, const std::string& column) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    fail(ErrorCode::parse, "line " + std::to_string(line) + ": column '" + column + "' has malformed number '" +
                               text + "'");
  }
  return v;
}

/// Reads records with header id,group,x1..xk,price,demand,outcome,valuation,weight.
/// Columns may appear in any order; optional columns may be omitted; an empty
/// cell is a missing value. Demand values are not checked for binarity here.
inline std::vector<Record> read_records(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<Record> out;
  if (!std::getline(in, line)) return out;
  ++lineno;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_csv_line(line);
  enum Col { id, group, x, price, demand, outcome, valuation, weight };
  std::vector<std::pair<Col, std::size_t>> cols;
  std::size_t k = 0;
  std::vector<bool> seen(8, false);
  std::vector<std::size_t> x_seen;
  for (const auto& raw : header) {
    const std::string h = trim(raw);
    Col c;
    std::size_t xi = 0;
    if (h == "id") c = id;
    else if (h == "group") c = group;
    else if (h == "price") c = price;
    else if (h == "demand") c = demand;
    else if (h == "outcome") c = outcome;
    else if (h == "valuation") c = valuation;
    else if (h == "weight") c = weight;
    else if (h.size() > 1 && h[0] == 'x' && h.find_first_not_of("0123456789", 1) == std::string::npos &&
             h[1] != '0') {
      c = x;
      xi = std::stoul(h.substr(1));
      for (auto s : x_seen)
        if (s == xi) fail(ErrorCode::parse, "line 1: duplicate column '" + h + "'");
      x_seen.push_back(xi);
      k = std::max(k, xi);
    } else {
      fail(ErrorCode::parse, "line 1: unknown column '" + h + "'");
    }
    if (c != x) {
      if (seen[c]) fail(ErrorCode::parse, "line 1: duplicate column '" + h + "'");
      seen[c] = true;
    }
    cols.emplace_back(c, xi);
  }
  require(seen[id] && seen[group], ErrorCode::parse, "line 1: header needs 'id' and 'group' columns");
  require(x_seen.size() == k, ErrorCode::parse, "line 1: covariate columns must be x1..xk without gaps");

  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || trim(line) == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != cols.size()) {
      fail(ErrorCode::parse, "line " + std::to_string(lineno) + ": expected " + std::to_string(cols.size()) +
                                 " cells, found " + std::to_string(cells.size()));
    }
    Record r;
    r.line = lineno;
    r.covariates.assign(k, 0.0);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const std::string cell = trim(cells[j]);
      const std::string& name = trim(header[j]);
      auto opt = [&]() -> std::optional<double> {
        if (cell.empty()) return std::nullopt;
        return parse_number(cell, lineno, name);
      };
      switch (cols[j].first) {
        case id: r.id = cell; break;
        case group:
          if (cell.empty()) fail(ErrorCode::parse, "line " + std::to_string(lineno) + ": empty group");
          r.group = cell;
          break;
        case x:
          if (cell.empty()) {
            fail(ErrorCode::parse, "line " + std::to_string(lineno) + ": missing covariate '" + name + "'");
          }
          r.covariates[cols[j].second - 1] = parse_number(cell, lineno, name);
          break;
        case price:
          r.price = opt();
          if (!(!r.price || *r.price >= 0)) {
            fail(ErrorCode::parse, "line " + std::to_string(lineno) + ": negative price");
          }
          break;
        case demand:
          r.demand = opt();
          if (!(!r.demand || *r.demand >= 0)) {
            fail(ErrorCode::parse, "line " + std::to_string(lineno) + ": negative demand");
          }
          break;
        case outcome: r.outcome = opt(); break;
        case valuation: r.valuation = opt(); break;
        case weight:
          if (!cell.empty()) r.weight = parse_number(cell, lineno, name);
          if (r.weight <= 0) fail(ErrorCode::parse, "line " + std::to_string(lineno) + ": weight must be positive");
          break;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<Record> read_records_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) fail(ErrorCode::io, "cannot open '" + path + "'");
  return read_records(in);
}

/// Writes the full schema; covariate count taken from the first record.
inline void write_records(std::ostream& out, const std::vector<Record>& records) {
  const std::size_t k = records.empty() ? 0 : records.front().covariates.size();
  out << "id,group";
  for (std::size_t j = 1; j <= k; ++j) out << ",x" << j;
  out << ",price,demand,outcome,valuation,weight\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : records) {
    require(r.covariates.size() == k, ErrorCode::dimension_mismatch, "records differ in covariate dimension");
    require(r.id.find(',') == std::string::npos && r.group.find(',') == std::string::npos, ErrorCode::invalid_argument,
            "ids and group labels cannot contain commas");
    out << r.id << ',' << r.group;
    for (double v : r.covariates) out << ',' << format_double(v);
    out << ',' << opt(r.price) << ',' << opt(r.demand) << ',' << opt(r.outcome) << ',' << opt(r.valuation) << ','
        << format_double(r.weight) << '\n';
  }
}

inline std::string records_to_csv(const std::vector<Record>& records) {
  std::ostringstream s;
  write_records(s, records);
  return s.str();
}

}  // namespace fairprice::io
