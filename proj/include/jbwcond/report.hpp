// Copyright 2026 The jbwcond Authors
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

#ifndef JBWCOND_REPORT_HPP_
#define JBWCOND_REPORT_HPP_

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

#include "jbwcond/core.hpp"

namespace jbwcond {

/// Machine-readable result of one named check.  `passed` is recomputed from
/// the residual/threshold pairs, never set independently.
struct Report {
  std::string id;
  bool passed = true;
  std::map<std::string, double> residuals;
  std::map<std::string, double> thresholds;
  nlohmann::json witnesses;          // optional serialized elements
  std::vector<std::string> notes;

  void record(const std::string& name, double residual, double threshold) {
    residuals[name] = residual;
    thresholds[name] = threshold;
    if (!(residual <= threshold)) passed = false;
  }

  /// Boolean facts are recorded as 0/1 residuals against a 0.5 threshold so
  /// the `passed == all residuals within thresholds` invariant stays uniform.
  void record_flag(const std::string& name, bool ok) { record(name, ok ? 0.0 : 1.0, 0.5); }

  void note(std::string text) { notes.push_back(std::move(text)); }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["id"] = id;
    j["passed"] = passed;
    j["residuals"] = residuals;
    j["thresholds"] = thresholds;
    if (!witnesses.is_null()) j["witnesses"] = witnesses;
    j["notes"] = notes;
    return j;
  }
};

/// Complex matrix <-> JSON: entries as [re, im] pairs, rows outermost.
inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j)
      row.push_back(nlohmann::json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError("matrix must be a non-empty array of rows", where);
  const Index rows = static_cast<Index>(j.size());
  const Index cols = j[0].is_array() ? static_cast<Index>(j[0].size()) : 0;
  if (cols == 0) throw SchemaError("matrix row must be a non-empty array", where + "/0");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw SchemaError("ragged matrix rows", where + "/" + std::to_string(i));
    for (Index k = 0; k < cols; ++k) {
      const auto& cell = row[static_cast<std::size_t>(k)];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
        throw SchemaError("complex entry must be a [re, im] number pair",
                          where + "/" + std::to_string(i) + "/" + std::to_string(k));
      m(i, k) = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

}  // namespace jbwcond

#endif  // JBWCOND_REPORT_HPP_
