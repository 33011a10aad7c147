// Copyright 2026 The lambda-clock authors
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

// Input parsing goes through nlohmann::json; all output is emitted by the
// tiny writer below so that key order and number formatting are ours to pin.
// Golden-file stability is the whole point: the same report must serialize
// to the same bytes on every run.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lambdaclock/clock.hpp"
#include "lambdaclock/dynamics.hpp"
#include "lambdaclock/errors.hpp"
#include "lambdaclock/quantum_geometry.hpp"
#include "lambdaclock/records.hpp"

namespace lambdaclock {

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

/// Minimal streaming JSON writer with caller-controlled key order.
class JsonWriter {
 public:
  void begin_object() {
    separate();
    out_ += '{';
    stack_.push_back(true);
  }
  void end_object() {
    out_ += '}';
    stack_.pop_back();
  }
  void begin_array() {
    separate();
    out_ += '[';
    stack_.push_back(true);
  }
  void end_array() {
    out_ += ']';
    stack_.pop_back();
  }
  void key(std::string_view k) {
    separate();
    write_string(k);
    out_ += ':';
    pending_value_ = true;
  }
  void value(double x) {
    separate();
    out_ += format_double(x);
  }
  void value(long x) {
    separate();
    out_ += std::to_string(x);
  }
  void value(int x) { value(static_cast<long>(x)); }
  void value(unsigned long x) {
    separate();
    out_ += std::to_string(x);
  }
  void value(bool b) {
    separate();
    out_ += b ? "true" : "false";
  }
  void value(std::string_view s) {
    separate();
    write_string(s);
  }
  const std::string& str() const { return out_; }

 private:
  void separate() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!stack_.empty()) {
      if (!stack_.back()) out_ += ',';
      stack_.back() = false;
    }
  }
  void write_string(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }
  std::string out_;
  std::vector<bool> stack_;  // true while the container is still empty
  bool pending_value_ = false;
};

// Complex data is encoded as [re, im] pairs; matrices are row-major lists of
// rows. The same layout is accepted back by the decoders below.

inline void write_complex(JsonWriter& w, const Complex& z) {
  w.begin_array();
  w.value(z.real());
  w.value(z.imag());
  w.end_array();
}

inline void write_complex_vector(JsonWriter& w, const VectorXc& v) {
  w.begin_array();
  for (Eigen::Index i = 0; i < v.size(); ++i) write_complex(w, v[i]);
  w.end_array();
}

inline void write_complex_matrix(JsonWriter& w, const MatrixXc& m) {
  w.begin_array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    w.begin_array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) write_complex(w, m(r, c));
    w.end_array();
  }
  w.end_array();
}

namespace detail {

inline Complex decode_complex(const nlohmann::json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError("complex entries must be [re, im] pairs");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

}  // namespace detail

inline VectorXc decode_complex_vector(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError("state must be a nonempty array of [re, im] pairs");
  }
  VectorXc v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = detail::decode_complex(j[i]);
  }
  return v;
}

inline MatrixXc decode_complex_matrix(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ConfigError("matrix must be a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  MatrixXc m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError("matrix rows must have equal lengths");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = detail::decode_complex(row[static_cast<std::size_t>(c)]);
    }
  }
  return m;
}

/// Record chains arrive as {"states": [matrix, matrix, ...]} or as a bare
/// list of matrices.
inline RecordSequence decode_record_sequence(const nlohmann::json& j) {
  const nlohmann::json* list = &j;
  if (j.is_object()) {
    if (!j.contains("states")) {
      throw ConfigError("record sequence object needs a \"states\" list");
    }
    list = &j.at("states");
  }
  if (!list->is_array() || list->size() < 2) {
    throw ConfigError("record sequence needs at least 2 states");
  }
  std::vector<DensityOperator> states;
  states.reserve(list->size());
  for (const auto& entry : *list) {
    states.push_back(make_density_operator(decode_complex_matrix(entry)));
  }
  return make_record_sequence(std::move(states));
}

/// Tick series CSV: one row per tick, first column the integer tick index N,
/// remaining columns the outcome probabilities. '#' lines and a non-numeric
/// header row are skipped.
inline TickSeries parse_raw_ticks_csv(const std::string& text) {
  std::vector<long> indices;
  std::vector<std::vector<double>> dists;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.empty()) continue;
    try {
      std::size_t used = 0;
      const long n = std::stol(cells[0], &used);
      if (used != cells[0].size() && cells[0].find_first_not_of(" \t", used) !=
                                         std::string::npos) {
        continue;  // header row
      }
      std::vector<double> p;
      p.reserve(cells.size() - 1);
      for (std::size_t i = 1; i < cells.size(); ++i) {
        p.push_back(std::stod(cells[i]));
      }
      indices.push_back(n);
      dists.push_back(std::move(p));
    } catch (const std::invalid_argument&) {
      continue;  // header row
    } catch (const std::out_of_range&) {
      throw IoError("tick CSV cell out of numeric range: " + line);
    }
  }
  return make_raw_ticks(std::move(indices), std::move(dists));
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("read failed: " + path);
  return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out.good()) throw IoError("write failed: " + path);
}

/// Trajectory dump: one row per sample holding the clock-facing columns
/// first (t, Lambda, DeltaH, overlap with the initial state), then the state
/// amplitudes as re_i/im_i pairs.
inline std::string trajectory_csv(const LambdaParameterization& param) {
  if (param.states.empty()) throw TooFewSamples("empty trajectory dump");
  const Eigen::Index dim = param.states.front().amplitudes.size();
  std::string out = "t,Lambda,DeltaH,overlap";
  for (Eigen::Index i = 0; i < dim; ++i) {
    out += ",re_" + std::to_string(i) + ",im_" + std::to_string(i);
  }
  out += '\n';
  const VectorXc& psi0 = param.states.front().amplitudes;
  for (std::size_t k = 0; k < param.states.size(); ++k) {
    const VectorXc& psi = param.states[k].amplitudes;
    out += format_double(param.times[k]);
    out += ',';
    out += format_double(param.lambdas[k]);
    out += ',';
    out += format_double(param.delta_h[k]);
    out += ',';
    out += format_double(std::norm(psi0.dot(psi)));
    for (Eigen::Index i = 0; i < dim; ++i) {
      out += ',';
      out += format_double(psi[i].real());
      out += ',';
      out += format_double(psi[i].imag());
    }
    out += '\n';
  }
  return out;
}

}  // namespace lambdaclock
