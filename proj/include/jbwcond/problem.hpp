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

#ifndef JBWCOND_PROBLEM_HPP_
#define JBWCOND_PROBLEM_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "jbwcond/lueders.hpp"
#include "jbwcond/report.hpp"

namespace jbwcond {

// ---------------------------------------------------------------------------
// Problem files: JSON descriptions of matrices, events, algebras, states and
// the tasks to run on them.  Complex scalars are [re, im] pairs; matrices are
// row-major nested arrays.  Raw payloads are retained so that
// parse -> serialize -> parse is the identity on the numbers.
// ---------------------------------------------------------------------------
struct TaskSpec {
  std::string op;
  nlohmann::json args;  // the raw task object
};

struct ProblemFile {
  Index dimension = 0;
  std::map<std::string, Matrix> elements;
  std::map<std::string, Matrix> events;
  std::map<std::string, std::vector<std::string>> atoms;  // algebra name -> event names
  std::map<std::string, Matrix> states;
  std::vector<TaskSpec> tasks;

  HermitianElement element(const std::string& name) const {
    auto it = elements.find(name);
    if (it == elements.end()) throw SchemaError("unknown element: " + name, "/elements/" + name);
    return HermitianElement(it->second, name);
  }
  Event event(const std::string& name) const {
    auto it = events.find(name);
    if (it == events.end()) throw SchemaError("unknown event: " + name, "/events/" + name);
    return Event(it->second, name);
  }
  State state(const std::string& name) const {
    auto it = states.find(name);
    if (it == states.end()) throw SchemaError("unknown state: " + name, "/states/" + name);
    return State(it->second, name);
  }
  AtomicAbelianSubalgebra algebra(const std::string& name) const {
    auto it = atoms.find(name);
    if (it == atoms.end()) throw SchemaError("unknown algebra: " + name, "/atoms/" + name);
    std::vector<Event> list;
    for (const std::string& ev : it->second) list.push_back(event(ev));
    try {
      return AtomicAbelianSubalgebra(dimension, std::move(list));
    } catch (const InvariantViolation& e) {
      throw InvariantViolation(std::string(e.what()) + " (algebra " + name + ")", name);
    }
  }
};

namespace detail {

inline Matrix parse_square_matrix(const nlohmann::json& j, Index n, const std::string& pointer) {
  Matrix m = matrix_from_json(j, pointer);
  if (m.rows() != n || m.cols() != n)
    throw SchemaError("matrix shape does not match /dimension", pointer);
  return m;
}

}  // namespace detail

inline ProblemFile parse_problem(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("problem file must be a JSON object", "");
  if (!j.contains("dimension") || !j["dimension"].is_number_unsigned())
    throw SchemaError("missing or invalid dimension", "/dimension");
  ProblemFile pf;
  pf.dimension = j["dimension"].get<Index>();
  if (pf.dimension < 1) throw SchemaError("dimension must be positive", "/dimension");

  auto parse_group = [&](const char* key, std::map<std::string, Matrix>* out) {
    if (!j.contains(key)) return;
    if (!j[key].is_object()) throw SchemaError("expected an object of named matrices",
                                               std::string("/") + key);
    for (const auto& [name, val] : j[key].items())
      (*out)[name] = detail::parse_square_matrix(val, pf.dimension,
                                                 std::string("/") + key + "/" + name);
  };
  parse_group("elements", &pf.elements);
  parse_group("events", &pf.events);
  parse_group("states", &pf.states);

  if (j.contains("atoms")) {
    if (!j["atoms"].is_object()) throw SchemaError("expected an object of algebras", "/atoms");
    for (const auto& [name, val] : j["atoms"].items()) {
      if (!val.is_array() || val.empty())
        throw SchemaError("algebra must list its atom events", "/atoms/" + name);
      std::vector<std::string> list;
      for (const auto& ev : val) {
        if (!ev.is_string()) throw SchemaError("atom entries are event names", "/atoms/" + name);
        list.push_back(ev.get<std::string>());
      }
      pf.atoms[name] = std::move(list);
    }
  }
  if (j.contains("tasks")) {
    if (!j["tasks"].is_array()) throw SchemaError("tasks must be an array", "/tasks");
    std::size_t idx = 0;
    for (const auto& t : j["tasks"]) {
      if (!t.is_object() || !t.contains("op") || !t["op"].is_string())
        throw SchemaError("task needs an op field", "/tasks/" + std::to_string(idx));
      pf.tasks.push_back(TaskSpec{t["op"].get<std::string>(), t});
      ++idx;
    }
  }

  // Validate every matrix against its declared role now, so malformed files
  // fail loudly and name the offender.
  for (const auto& [name, m] : pf.elements) HermitianElement{m, name};
  for (const auto& [name, m] : pf.events) Event{m, name};
  for (const auto& [name, m] : pf.states) State{m, name};
  for (const auto& [name, list] : pf.atoms) pf.algebra(name);
  return pf;
}

inline nlohmann::json problem_to_json(const ProblemFile& pf) {
  nlohmann::json j;
  j["dimension"] = pf.dimension;
  for (const auto& [name, m] : pf.elements) j["elements"][name] = matrix_to_json(m);
  for (const auto& [name, m] : pf.events) j["events"][name] = matrix_to_json(m);
  for (const auto& [name, m] : pf.states) j["states"][name] = matrix_to_json(m);
  for (const auto& [name, list] : pf.atoms) j["atoms"][name] = list;
  nlohmann::json tasks = nlohmann::json::array();
  for (const TaskSpec& t : pf.tasks) tasks.push_back(t.args);
  if (!tasks.empty()) j["tasks"] = tasks;
  return j;
}

// ---------------------------------------------------------------------------
// Task execution for `jbwcond compute`.
// ---------------------------------------------------------------------------
struct TaskOutcome {
  Report report;
  bool nonexistent = false;  // mathematical nonexistence: maps to exit code 4
};

namespace detail {

inline std::string need_string(const nlohmann::json& t, const char* key) {
  if (!t.contains(key) || !t[key].is_string())
    throw SchemaError(std::string("task is missing the '") + key + "' field", "/tasks");
  return t[key].get<std::string>();
}

inline Subalgebra task_algebra(const ProblemFile& pf, const nlohmann::json& t) {
  AtomicAbelianSubalgebra b = pf.algebra(need_string(t, "algebra"));
  if (t.value("commutant", false)) return Subalgebra(commutant(b));
  return Subalgebra(b);
}

}  // namespace detail

inline TaskOutcome run_task(const ProblemFile& pf, const TaskSpec& task) {
  TaskOutcome out;
  Report& rep = out.report;
  const nlohmann::json& t = task.args;
  rep.id = "compute/" + task.op + (t.contains("name") ? "/" + t["name"].get<std::string>() : "");

  if (task.op == "condprob") {
    const double v = cond_prob(pf.state(detail::need_string(t, "state")),
                               pf.event(detail::need_string(t, "event")),
                               pf.event(detail::need_string(t, "given")));
    rep.witnesses["value"] = v;
  } else if (task.op == "objprob") {
    ObjectiveProbabilityResult r = objective_prob(pf.event(detail::need_string(t, "event")),
                                                  pf.event(detail::need_string(t, "given")));
    rep.witnesses["exists"] = r.exists;
    if (r.exists) rep.witnesses["lambda"] = r.lambda;
    rep.record_flag("objective_probability_exists", r.exists);
    out.nonexistent = !r.exists;
  } else if (task.op == "condexp") {
    CondExpResult r = try_cond_exp(pf.state(detail::need_string(t, "state")),
                                   pf.element(detail::need_string(t, "element")),
                                   detail::task_algebra(pf, t));
    rep.record_flag("conditional_expectation_exists", r.exists);
    if (r.exists) {
      rep.witnesses["canonical"] = matrix_to_json(r.canonical.matrix());
      rep.witnesses["unique"] = r.unique;
      rep.witnesses["version_space_dimension"] = r.version_space.size();
    } else {
      out.nonexistent = true;
      if (auto w = find_violating_event(pf.state(detail::need_string(t, "state")),
                                        detail::task_algebra(pf, t),
                                        pf.element(detail::need_string(t, "element")))) {
        rep.witnesses["witness_event"] = matrix_to_json(w->event.matrix());
        rep.witnesses["witness_violation"] = w->violation;
      }
    }
  } else if (task.op == "objexp") {
    ObjectiveCondExpResult r =
        objective_cond_exp(pf.element(detail::need_string(t, "element")),
                           detail::task_algebra(pf, t));
    const char* status = r.status == ObjectiveCondExpResult::Status::UNIQUE ? "UNIQUE"
                         : r.status == ObjectiveCondExpResult::Status::NONUNIQUE ? "NONUNIQUE"
                                                                                 : "NONEXISTENT";
    rep.witnesses["status"] = status;
    if (r.value) rep.witnesses["value"] = matrix_to_json(r.value->matrix());
    if (r.status == ObjectiveCondExpResult::Status::NONEXISTENT) {
      out.nonexistent = true;
      if (r.witness_states) {
        rep.witnesses["witness_state_1"] = matrix_to_json(r.witness_states->first.matrix());
        rep.witnesses["witness_state_2"] = matrix_to_json(r.witness_states->second.matrix());
        rep.witnesses["witness_canonical_1"] =
            matrix_to_json(r.witness_canonicals->first.matrix());
        rep.witnesses["witness_canonical_2"] =
            matrix_to_json(r.witness_canonicals->second.matrix());
      }
    }
  } else if (task.op == "globalce") {
    GlobalCEReport r = global_ce(pf.algebra(detail::need_string(t, "algebra")));
    rep = r.checks;
    rep.id = "compute/globalce";
    if (t.contains("element"))
      rep.witnesses["applied"] =
          matrix_to_json(r.map.apply(pf.element(t["element"].get<std::string>())).matrix());
  } else if (task.op == "measure") {
    AtomicAbelianSubalgebra b = pf.algebra(detail::need_string(t, "algebra"));
    std::vector<std::vector<int>> cells;
    if (t.contains("cells")) {
      for (const auto& c : t["cells"]) cells.push_back(c.get<std::vector<int>>());
    } else {
      for (int i = 0; i < static_cast<int>(b.atom_count()); ++i) cells.push_back({i});
    }
    State post = post_measurement_state(pf.state(detail::need_string(t, "state")),
                                        Partition(b, std::move(cells)));
    rep.witnesses["post_state"] = matrix_to_json(post.matrix());
  } else if (task.op == "mofx") {
    HermitianElement m = M_of(pf.element(detail::need_string(t, "element")),
                              pf.algebra(detail::need_string(t, "algebra")));
    rep.witnesses["value"] = matrix_to_json(m.matrix());
  } else {
    throw SchemaError("unknown task op: " + task.op, "/tasks");
  }
  return out;
}

}  // namespace jbwcond

#endif  // JBWCOND_PROBLEM_HPP_
