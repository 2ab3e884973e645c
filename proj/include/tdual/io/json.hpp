#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tdual/group/spec.hpp"

namespace tdual::io {

using Json = nlohmann::ordered_json;

/// Matrices are row-major arrays of rows, each entry a [re, im] pair.
inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("spec: a matrix must be an array of rows");
  const auto rows = static_cast<Index>(j.size());
  const auto cols = rows == 0 ? Index{0} : static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw ValidationError("spec: ragged matrix");
    for (Index k = 0; k < cols; ++k) {
      const auto& e = row[static_cast<std::size_t>(k)];
      if (!e.is_array() || e.size() != 2) throw ValidationError("spec: matrix entries must be [re, im] pairs");
      m(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

namespace detail {

inline Json component_to_json(const ComponentSpec& c) {
  Json j;
  j["id"] = c.id;
  j["parabolic"] = c.parabolic;
  j["sigma"] = c.sigma;
  j["dim"] = c.dim;
  Json grid = Json::array();
  for (const auto& p : c.grid) grid.push_back({{"label", p.label}, {"coords", p.coords}});
  j["grid"] = std::move(grid);
  j["elements"] = c.elements;
  j["table"] = c.table;
  j["perm"] = c.perm;
  Json us = Json::array();
  for (const auto& row : c.unitaries) {
    Json r = Json::array();
    for (const auto& u : row) r.push_back(matrix_to_json(u));
    us.push_back(std::move(r));
  }
  j["unitaries"] = std::move(us);
  j["weights"] = c.weights;
  return j;
}

template <class T>
T value_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

inline ComponentSpec component_from_json(const Json& j) {
  ComponentSpec c;
  c.id = j.at("id").get<std::string>();
  c.parabolic = value_or<std::string>(j, "parabolic", "");
  c.sigma = value_or<std::string>(j, "sigma", "");
  c.dim = j.at("dim").get<Index>();
  for (const auto& p : j.at("grid"))
    c.grid.push_back({p.at("label").get<std::string>(), value_or<std::vector<double>>(p, "coords", {})});
  c.elements = value_or<std::vector<std::string>>(j, "elements", {});
  c.table = j.at("table").get<std::vector<std::vector<std::size_t>>>();
  c.perm = j.at("perm").get<std::vector<std::vector<std::size_t>>>();
  if (j.contains("unitaries"))
    for (const auto& row : j.at("unitaries")) {
      std::vector<Matrix> r;
      for (const auto& u : row) r.push_back(matrix_from_json(u));
      c.unitaries.push_back(std::move(r));
    }
  c.weights = value_or<std::vector<double>>(j, "weights", {});
  return c;
}

inline Json composition_to_json(const Composition& c) { return c.parts; }
inline Composition composition_from_json(const Json& j) { return Composition(j.get<std::vector<int>>()); }

}  // namespace detail

inline Json spec_to_json(const GroupSpec& s) {
  Json j;
  j["name"] = s.name;
  j["description"] = s.description;
  if (s.is_table()) {
    const auto& t = s.table();
    j["mode"] = "table";
    Json body;
    body["group"] = Json::array();
    for (const auto& c : t.group) body["group"].push_back(detail::component_to_json(c));
    body["levi"] = Json::array();
    for (const auto& c : t.levi) body["levi"].push_back(detail::component_to_json(c));
    body["ups"] = Json::array();
    for (const auto& l : t.ups) body["ups"].push_back({{"small", l.small}, {"big", l.big}, {"embedding", l.embedding}});
    j["table"] = std::move(body);
  } else {
    const auto& g = s.gl();
    j["mode"] = "gl";
    Json body;
    body["n"] = g.n;
    body["grid"] = g.grid;
    body["sigmas"] = Json::array();
    for (const auto& p : g.sigmas) body["sigmas"].push_back({{"id", p.id}, {"size", p.size}, {"dim", p.dim}});
    body["parabolic"] = detail::composition_to_json(g.parabolic);
    body["stage"] = Json::array();
    for (const auto& q : g.stage) body["stage"].push_back(detail::composition_to_json(q));
    j["gl"] = std::move(body);
  }
  j["queries"] = Json::array();
  for (const auto& q : s.queries) j["queries"].push_back({{"name", q.name}, {"descriptor", q.descriptor}});
  return j;
}

inline GroupSpec spec_from_json(const Json& j) {
  try {
    GroupSpec s;
    s.name = j.at("name").get<std::string>();
    s.description = detail::value_or<std::string>(j, "description", "");
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "table") {
      const auto& b = j.at("table");
      TableSpec t;
      for (const auto& c : b.at("group")) t.group.push_back(detail::component_from_json(c));
      for (const auto& c : b.at("levi")) t.levi.push_back(detail::component_from_json(c));
      for (const auto& l : b.at("ups"))
        t.ups.push_back({l.at("small").get<std::string>(), l.at("big").get<std::string>(),
                         l.at("embedding").get<std::vector<std::size_t>>()});
      s.body = std::move(t);
    } else if (mode == "gl") {
      const auto& b = j.at("gl");
      GlSpec g;
      g.n = b.at("n").get<int>();
      g.grid = b.at("grid").get<std::vector<double>>();
      for (const auto& p : b.at("sigmas"))
        g.sigmas.push_back({p.at("id").get<std::string>(), p.at("size").get<int>(), p.at("dim").get<Index>()});
      g.parabolic = detail::composition_from_json(b.at("parabolic"));
      if (b.contains("stage"))
        for (const auto& q : b.at("stage")) g.stage.push_back(detail::composition_from_json(q));
      s.body = std::move(g);
    } else {
      throw ValidationError("spec: unknown mode '" + mode + "'");
    }
    if (j.contains("queries"))
      for (const auto& q : j.at("queries"))
        s.queries.push_back({q.at("name").get<std::string>(), q.at("descriptor").get<std::string>()});
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("spec: ") + e.what());
  }
}

inline GroupSpec parse_spec(const std::string& text) {
  try {
    return spec_from_json(Json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("spec: ") + e.what());
  }
}

inline std::string dump_spec(const GroupSpec& s) { return spec_to_json(s).dump(2) + "\n"; }

inline GroupSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

inline void save_spec(const GroupSpec& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write spec file '" + path + "'");
  out << dump_spec(s);
}

}  // namespace tdual::io
