// Copyright 2026 The levisim Authors
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

#include "levisim/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "levisim/error.hpp"

namespace levisim::io {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t expected, std::size_t lineno) {
  std::vector<double> out;
  out.reserve(expected);
  const char* p = line.data();
  const char* end = p + line.size();
  while (end > p && (end[-1] == '\r' || end[-1] == ' ')) --end;
  while (p <= end) {
    const char* comma = p;
    while (comma < end && *comma != ',') ++comma;
    double v = 0.0;
    const auto res = std::from_chars(p, comma, v);
    if (res.ec != std::errc() || res.ptr != comma) {
      throw ConfigError("line " + std::to_string(lineno) + ": malformed number");
    }
    out.push_back(v);
    if (comma == end) break;
    p = comma + 1;
  }
  if (out.size() != expected) {
    throw ConfigError("line " + std::to_string(lineno) + ": expected " + std::to_string(expected) +
                      " columns, found " + std::to_string(out.size()));
  }
  return out;
}

void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty input, expected header '" + header + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw ConfigError("line 1: expected header '" + header + "', found '" + line + "'");
  }
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const dynamics::Trajectory& traj) {
  out << "t,x,vx,y,vy,z,vz\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_double(traj.time(i));
    for (std::size_t a = 0; a < 3; ++a) {
      out << ',' << format_double(traj.q[a][i]) << ',' << format_double(traj.v[a][i]);
    }
    out << '\n';
  }
}

dynamics::Trajectory read_trajectory_csv(std::istream& in) {
  expect_header(in, "t,x,vx,y,vy,z,vz");
  dynamics::Trajectory traj;
  std::vector<double> t;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::vector<double> row = parse_row(line, 7, lineno);
    t.push_back(row[0]);
    for (std::size_t a = 0; a < 3; ++a) {
      traj.q[a].push_back(row[1 + 2 * a]);
      traj.v[a].push_back(row[2 + 2 * a]);
    }
  }
  if (t.size() < 2) throw ConfigError("trajectory needs at least two samples");
  traj.dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(traj.dt > 0.0)) throw ConfigError("trajectory time column must increase");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (std::abs(t[i] - t[i - 1] - traj.dt) > 1e-6 * traj.dt) {
      throw ConfigError("line " + std::to_string(i + 2) + ": non-uniform time step");
    }
  }
  return traj;
}

void write_spectrum_csv(std::ostream& out, const detection::Spectrum& sp) {
  out << "omega_rad_s,psd\n";
  for (std::size_t k = 0; k < sp.size(); ++k) {
    out << format_double(sp.omega[k]) << ',' << format_double(sp.psd[k]) << '\n';
  }
}

detection::Spectrum read_spectrum_csv(std::istream& in) {
  expect_header(in, "omega_rad_s,psd");
  detection::Spectrum sp;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::vector<double> row = parse_row(line, 2, lineno);
    if (!sp.omega.empty() && !(row[0] > sp.omega.back())) {
      throw ConfigError("line " + std::to_string(lineno) + ": frequency grid must increase");
    }
    sp.omega.push_back(row[0]);
    sp.psd.push_back(row[1]);
  }
  if (sp.omega.empty()) throw ConfigError("spectrum has no rows");
  return sp;
}

}  // namespace levisim::io
