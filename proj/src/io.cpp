// Copyright 2026 The tmiqp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tmiqp/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace tmiqp::io {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ParseError(field + ": " + what);
}

double number(const Json& j, const std::string& field) {
  if (j.is_number()) {
    return j.get<double>();
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  fail(field, "expected a number, \"inf\" or \"-inf\"");
}

Json number_to_json(double x) {
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  return x;
}

Vector vector(const Json& j, const std::string& field) {
  if (!j.is_array()) {
    fail(field, "expected an array");
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

// `cols` is used for matrices with zero rows.
Matrix matrix(const Json& j, const std::string& field, Eigen::Index cols = 0) {
  if (!j.is_array()) {
    fail(field, "expected an array of rows");
  }
  if (j.empty()) {
    return Matrix(0, cols);
  }
  const std::size_t n = j[0].is_array() ? j[0].size() : 0;
  Matrix M(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string row_field = field + "[" + std::to_string(r) + "]";
    const Vector row = vector(j[r], row_field);
    if (static_cast<std::size_t>(row.size()) != n) {
      fail(row_field, "expected " + std::to_string(n) + " entries");
    }
    M.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return M;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_to_json(v(i)));
  return out;
}

Json to_json(const Matrix& M) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) out.push_back(to_json(Vector(M.row(r).transpose())));
  return out;
}

const Json& required(const Json& j, const char* key) {
  if (!j.contains(key)) {
    fail(key, "missing");
  }
  return j.at(key);
}

StageCost stage_cost(const Json& j, const std::string& field, int nx, int nw) {
  if (!j.is_object()) {
    fail(field, "expected an object");
  }
  const Matrix Q = j.contains("Q") ? matrix(j["Q"], field + ".Q", nx) : Matrix::Zero(nx, nx);
  const Matrix R = j.contains("R") ? matrix(j["R"], field + ".R", nw) : Matrix::Zero(nw, nw);
  const Vector q = j.contains("q") ? vector(j["q"], field + ".q") : Vector::Zero(nx);
  const Vector r = j.contains("r") ? vector(j["r"], field + ".r") : Vector::Zero(nw);
  const double c = j.contains("constant") ? number(j["constant"], field + ".constant") : 0.0;
  if (Q.rows() != nx || Q.cols() != nx) fail(field + ".Q", "expected " + std::to_string(nx) + "x" + std::to_string(nx));
  if (R.rows() != nw || R.cols() != nw) fail(field + ".R", "expected " + std::to_string(nw) + "x" + std::to_string(nw));
  if (q.size() != nx) fail(field + ".q", "expected " + std::to_string(nx) + " entries");
  if (r.size() != nw) fail(field + ".r", "expected " + std::to_string(nw) + " entries");
  return StageCost(Q, R, q, r, c);
}

Json stage_cost_to_json(const StageCost& c, bool terminal) {
  Json j;
  j["Q"] = to_json(c.Q);
  j["q"] = to_json(c.q);
  if (!terminal) {
    j["R"] = to_json(c.R);
    j["r"] = to_json(c.r);
  }
  j["constant"] = c.constant;
  return j;
}

void bounds(const Json& j, const std::string& field, int n, Vector& lo, Vector& hi) {
  lo = Vector::Constant(n, -kInf);
  hi = Vector::Constant(n, kInf);
  if (j.is_null()) {
    return;
  }
  if (!j.is_array() || j.size() != 2) {
    fail(field, "expected [[lo...], [hi...]]");
  }
  lo = vector(j[0], field + "[0]");
  hi = vector(j[1], field + "[1]");
  if (lo.size() != n || hi.size() != n) {
    fail(field, "expected " + std::to_string(n) + " entries per side");
  }
}

int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    line += text[i] == '\n' ? 1 : 0;
  }
  return line;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path + ": cannot open file");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

MiocpInstance instance_from_json(const Json& j) {
  if (!j.is_object()) {
    throw ParseError("document: expected an object");
  }
  MiocpInstance inst;
  inst.dyn.A = matrix(required(j, "A"), "A");
  const auto nx = inst.dyn.A.rows();
  inst.dyn.B1 = j.contains("B1") ? matrix(j["B1"], "B1") : Matrix(nx, 0);
  inst.dyn.B2 = j.contains("B2") ? matrix(j["B2"], "B2") : Matrix(nx, 0);
  if (inst.dyn.B1.rows() != nx) fail("B1", "expected " + std::to_string(nx) + " rows");
  if (inst.dyn.B2.rows() != nx) fail("B2", "expected " + std::to_string(nx) + " rows");
  inst.dyn.c = j.contains("c") ? vector(j["c"], "c") : Vector::Zero(nx);
  const int nu = inst.nu();
  const int nv = inst.nv();

  const Json& N = required(j, "N");
  if (!N.is_number_integer()) fail("N", "expected an integer");
  inst.N = N.get<int>();
  if (inst.N < 1) fail("N", "must be at least 1");
  inst.x0 = vector(required(j, "x0"), "x0");

  if (j.contains("stage_costs")) {
    const Json& list = j["stage_costs"];
    if (!list.is_array() || static_cast<int>(list.size()) != inst.N) {
      fail("stage_costs", "expected a list of N = " + std::to_string(inst.N) + " costs");
    }
    for (std::size_t k = 0; k < list.size(); ++k) {
      inst.stage_costs.push_back(
          stage_cost(list[k], "stage_costs[" + std::to_string(k) + "]", static_cast<int>(nx), nu + nv));
    }
  } else {
    const StageCost c = stage_cost(required(j, "stage_cost"), "stage_cost", static_cast<int>(nx), nu + nv);
    inst.stage_costs.assign(inst.N, c);
  }
  if (j.contains("terminal_cost")) {
    const StageCost t = stage_cost(j["terminal_cost"], "terminal_cost", static_cast<int>(nx), 0);
    inst.terminal_cost = StageCost::terminal(t.Q, t.q, t.constant);
  } else {
    inst.terminal_cost = StageCost::terminal(Matrix::Zero(nx, nx), Vector::Zero(nx));
  }

  auto& cs = inst.constraints;
  bounds(j.value("x_bounds", Json()), "x_bounds", static_cast<int>(nx), cs.x_lo, cs.x_hi);
  bounds(j.value("u_bounds", Json()), "u_bounds", nu, cs.u_lo, cs.u_hi);
  const Json& sets = required(j, "v_sets");
  if (!sets.is_array() || static_cast<int>(sets.size()) != nv) {
    fail("v_sets", "expected " + std::to_string(nv) + " integer sets");
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::string field = "v_sets[" + std::to_string(i) + "]";
    if (!sets[i].is_array()) fail(field, "expected an array of integers");
    IntVector set;
    for (const auto& v : sets[i]) {
      if (!v.is_number_integer()) fail(field, "expected integers");
      set.push_back(v.get<int>());
    }
    cs.v_sets.push_back(std::move(set));
  }
  if (j.contains("mixed")) {
    const Json& rows = j["mixed"];
    if (!rows.is_array()) fail("mixed", "expected an array");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string field = "mixed[" + std::to_string(i) + "]";
      const Json& r = rows[i];
      if (!r.is_object()) fail(field, "expected an object");
      MixedRow row;
      row.gx = r.contains("gx") ? vector(r["gx"], field + ".gx") : Vector::Zero(nx);
      row.gu = r.contains("gu") ? vector(r["gu"], field + ".gu") : Vector::Zero(nu);
      row.gv = r.contains("gv") ? vector(r["gv"], field + ".gv") : Vector::Zero(nv);
      row.lo = r.contains("lo") ? number(r["lo"], field + ".lo") : -kInf;
      row.hi = r.contains("hi") ? number(r["hi"], field + ".hi") : kInf;
      cs.mixed.push_back(std::move(row));
    }
  }
  if (j.contains("x0_set")) {
    const Json& b = j["x0_set"];
    Box box;
    box.lo = vector(required(b, "lo"), "x0_set.lo");
    box.hi = vector(required(b, "hi"), "x0_set.hi");
    inst.x0_set = box;
  }

  const auto violations = validate(inst);
  if (!violations.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& v : violations) msg += " [" + v.tag + "] " + v.detail + ";";
    throw ParseError(msg);
  }
  return inst;
}

Json instance_to_json(const MiocpInstance& inst) {
  Json j;
  j["A"] = to_json(inst.dyn.A);
  j["B1"] = to_json(inst.dyn.B1);
  j["B2"] = to_json(inst.dyn.B2);
  j["c"] = to_json(inst.dyn.c);
  j["N"] = inst.N;
  j["x0"] = to_json(inst.x0);
  bool uniform = true;
  for (const auto& c : inst.stage_costs) uniform = uniform && c == inst.stage_costs.front();
  if (uniform && !inst.stage_costs.empty()) {
    j["stage_cost"] = stage_cost_to_json(inst.stage_costs.front(), false);
  } else {
    Json list = Json::array();
    for (const auto& c : inst.stage_costs) list.push_back(stage_cost_to_json(c, false));
    j["stage_costs"] = list;
  }
  j["terminal_cost"] = stage_cost_to_json(inst.terminal_cost, true);
  const auto& cs = inst.constraints;
  j["x_bounds"] = {to_json(cs.x_lo), to_json(cs.x_hi)};
  j["u_bounds"] = {to_json(cs.u_lo), to_json(cs.u_hi)};
  j["v_sets"] = cs.v_sets;
  Json rows = Json::array();
  for (const auto& r : cs.mixed) {
    rows.push_back({{"gx", to_json(r.gx)},
                    {"gu", to_json(r.gu)},
                    {"gv", to_json(r.gv)},
                    {"lo", number_to_json(r.lo)},
                    {"hi", number_to_json(r.hi)}});
  }
  j["mixed"] = rows;
  if (inst.x0_set) {
    j["x0_set"] = {{"lo", to_json(inst.x0_set->lo)}, {"hi", to_json(inst.x0_set->hi)}};
  }
  return j;
}

bnb::GuessSet guesses_from_json(const Json& j, int N) {
  if (!j.is_array()) {
    fail("guesses", "expected an array");
  }
  bnb::GuessSet out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string field = "guesses[" + std::to_string(i) + "]";
    const Json& g = j[i];
    if (!g.is_object() || !g.contains("V")) fail(field, "expected {\"V\": [...], \"w\": num}");
    const Json& V = g["V"];
    if (!V.is_array() || static_cast<int>(V.size()) != N) {
      fail(field + ".V", "expected " + std::to_string(N) + " entries");
    }
    PartialAssignment pa(N);
    for (int k = 0; k < N; ++k) {
      if (V[k].is_null()) continue;
      const std::string entry = field + ".V[" + std::to_string(k) + "]";
      IntVector v;
      if (V[k].is_number_integer()) {
        v.push_back(V[k].get<int>());
      } else if (V[k].is_array()) {
        for (const auto& x : V[k]) {
          if (!x.is_number_integer()) fail(entry, "expected integers");
          v.push_back(x.get<int>());
        }
      } else {
        fail(entry, "expected an integer vector or null");
      }
      pa.fix(k, std::move(v));
    }
    const double w = g.contains("w") ? number(g["w"], field + ".w") : 1.0;
    if (!std::isfinite(w) || w < 0.0) fail(field + ".w", "expected a finite weight >= 0");
    out.add(std::move(pa), w);
  }
  return out;
}

Json guesses_to_json(const bnb::GuessSet& guesses) {
  Json out = Json::array();
  for (std::size_t i = 0; i < guesses.size(); ++i) {
    Json V = Json::array();
    const auto& pa = guesses.guesses[i];
    for (int k = 0; k < pa.horizon(); ++k) {
      V.push_back(pa.is_fixed(k) ? Json(pa.value(k)) : Json(nullptr));
    }
    out.push_back({{"V", V}, {"w", guesses.weights[i]}});
  }
  return out;
}

Json trajectory_to_json(const Trajectory& traj) {
  return {{"x", to_json(traj.x)}, {"u", to_json(traj.u)}, {"v", to_json(traj.v)}};
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
}

InstanceFile load_instance(const std::string& path) {
  const Json j = parse_json(read_file(path));
  InstanceFile out;
  try {
    out.instance = instance_from_json(j);
    if (j.contains("guesses")) {
      out.guesses = guesses_from_json(j["guesses"], out.instance.N);
    }
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return out;
}

bnb::GuessSet load_guesses(const std::string& path, int N) {
  const Json j = parse_json(read_file(path));
  try {
    return guesses_from_json(j.is_object() && j.contains("guesses") ? j["guesses"] : j, N);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace tmiqp::io
