#include <json.hpp>

#include "obddlab/errors.hpp"
#include "obddlab/qobdd.hpp"

namespace obddlab {

namespace {

using nlohmann::json;

json complex_json(const Complex &z) { return json::array({z.real(), z.imag()}); }

Complex complex_from(const json &j) {
  if (!j.is_array() || j.size() != 2)
    throw ShapeError("complex entries are written as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_json(const Eigen::MatrixXcd &m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from(const json &j, int dim) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(dim))
    throw ShapeError("matrix must have " + std::to_string(dim) + " rows");
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json &row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(dim))
      throw ShapeError("matrix row " + std::to_string(r + 1) +
                       " must have " + std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c)
      m(r, c) = complex_from(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

} // namespace

std::string to_json(const QuantumProgram &p) {
  json j;
  j["n"] = p.n;
  j["dim"] = p.dim;
  j["layers"] = p.layers;
  j["order"] = p.order.perm();
  json accept = json::array();
  for (int i : p.accept)
    accept.push_back(i + 1);
  j["accept"] = std::move(accept);
  json initial = json::array();
  for (Eigen::Index i = 0; i < p.initial.size(); ++i)
    initial.push_back(complex_json(p.initial[i]));
  j["initial"] = std::move(initial);
  json steps = json::array();
  for (const auto &step : p.steps)
    steps.push_back({{"g0", matrix_json(step.g0)}, {"g1", matrix_json(step.g1)}});
  j["steps"] = std::move(steps);
  return j.dump();
}

QuantumProgram qobdd_from_json(const std::string &text) {
  QuantumProgram p;
  try {
    const json j = json::parse(text);
    p.dim = j.at("dim").get<int>();
    if (p.dim < 1 || p.dim > kMaxQuantumDim)
      throw CapacityError("dimension outside 1.." + std::to_string(kMaxQuantumDim));
    p.order = VarOrder(j.at("order").get<std::vector<int>>());
    p.n = j.contains("n") ? j.at("n").get<int>() : p.order.size();
    p.layers = j.contains("layers") ? j.at("layers").get<int>() : 1;
    for (int i : j.at("accept").get<std::vector<int>>())
      p.accept.push_back(i - 1);
    const json &initial = j.at("initial");
    if (!initial.is_array() || initial.size() != static_cast<std::size_t>(p.dim))
      throw ShapeError("initial vector must have dim entries");
    p.initial.resize(p.dim);
    for (int i = 0; i < p.dim; ++i)
      p.initial[i] = complex_from(initial[static_cast<std::size_t>(i)]);
    for (const json &step : j.at("steps"))
      p.steps.push_back({matrix_from(step.at("g0"), p.dim),
                         matrix_from(step.at("g1"), p.dim)});
  } catch (const json::exception &e) {
    throw ShapeError(std::string("bad quantum program JSON: ") + e.what());
  }
  validate(p);
  return p;
}

} // namespace obddlab
