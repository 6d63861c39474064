#include "mwc/serialize.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace mwc {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  Complex z;
  if (j.is_number()) {
    z = {j.get<double>(), 0.0};
  } else if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    z = {j[0].get<double>(), j[1].get<double>()};
  } else {
    throw std::invalid_argument("matrix entry must be a number or a [re, im] pair, got " + j.dump());
  }
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw std::invalid_argument("non-finite matrix entry");
  return z;
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"rows", std::move(rows)}};
}

CMatrix matrix_from_json(const json& j) {
  if (j.is_object() && !j.contains("rows")) throw std::invalid_argument("matrix object needs a \"rows\" field");
  const json& rows = j.is_object() ? j["rows"] : j;
  if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty())
    throw std::invalid_argument("matrix must be a non-empty list of rows");
  const std::size_t cols = rows[0].size();
  CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != cols) throw std::invalid_argument("matrix rows are ragged");
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex_from_json(rows[i][k]);
  }
  return m;
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

json params_to_json(const ParamPoint& p) {
  json out = json::array();
  for (const auto& block : p) out.push_back(vector_to_json(block));
  return out;
}

json to_json(const Tolerances& tol) {
  return {{"rank_tol", tol.rank_tol},
          {"residual_tol", tol.residual_tol},
          {"newton_tol", tol.newton_tol},
          {"max_newton_iters", tol.max_newton_iters}};
}

json to_json(const Factorization& f) {
  return {{"word", f.word.str()},
          {"letters", f.word.letters},
          {"params", params_to_json(f.params)},
          {"target", matrix_to_json(f.target)},
          {"residual", f.residual},
          {"retries", f.retries}};
}

json to_json(const FiberSampleReport& r) {
  json sols = json::array();
  for (const auto& s : r.solutions) {
    json e{{"params", params_to_json(s.params)}, {"residual", s.residual}, {"nullity", s.nullity}};
    if (r.has_components) {
      e["component"] = s.component;
      e["on_components"] = s.on_components;
      e["component_distance"] = s.component_distance;
    }
    sols.push_back(std::move(e));
  }
  json out{{"word", r.word.str()},
           {"target", matrix_to_json(r.target)},
           {"starts", r.starts},
           {"converged", r.converged},
           {"distinct_solutions", r.solutions.size()},
           {"solutions", std::move(sols)}};
  if (r.has_components) out["unclassified"] = r.unclassified();
  return out;
}

json to_json(const SpecVerification& v) {
  json comps = json::array();
  for (const auto& c : v.components)
    comps.push_back({{"samples", c.samples},
                     {"max_residual", c.max_residual},
                     {"max_membership_residual", c.max_membership},
                     {"off_other_components", c.off_other_components},
                     {"intersections", c.intersections}});
  return {{"passed", v.passed()},
          {"residuals_ok", v.residuals_ok},
          {"distinct", v.distinct},
          {"origin_is_intersection", v.origin_is_intersection},
          {"components", std::move(comps)}};
}

json to_json(const PathLift& lift) {
  json nodes = json::array();
  for (const auto& n : lift.nodes)
    nodes.push_back({{"t", n.t}, {"params", params_to_json(n.params)}, {"residual", n.residual}});
  json out{{"word", lift.word.str()},
           {"node_count", lift.nodes.size()},
           {"substeps", lift.substeps},
           {"max_residual", lift.max_residual},
           {"max_tangent_norm", lift.max_tangent_norm},
           {"suspected_jumps", lift.suspected_jumps},
           {"nodes", std::move(nodes)}};
  if (lift.connection_attempted) {
    out["connected"] = lift.connected;
    out["connection_note"] = lift.connection_note;
  }
  return out;
}

std::vector<std::pair<double, CMatrix>> curve_samples_from_json(const json& j) {
  if (!j.is_object() || !j.contains("samples") || !j["samples"].is_array())
    throw std::invalid_argument("curve file must be an object with a \"samples\" list");
  std::vector<std::pair<double, CMatrix>> out;
  for (const auto& s : j["samples"]) {
    if (!s.is_object() || !s.contains("t") || !s["t"].is_number() || !s.contains("matrix"))
      throw std::invalid_argument("curve sample needs numeric \"t\" and \"matrix\"");
    out.emplace_back(s["t"].get<double>(), matrix_from_json(s["matrix"]));
  }
  return out;
}

IntMatrix int_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw std::invalid_argument("integer matrix must be a non-empty list of rows");
  const std::size_t cols = j[0].size();
  IntMatrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw std::invalid_argument("integer matrix rows are ragged");
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = j[r][c];
      if (e.is_number_integer())
        m(r, c) = mpz_class(std::to_string(e.get<long long>()));
      else if (e.is_string())
        m(r, c) = mpz_class(e.get<std::string>());
      else
        throw std::invalid_argument("integer matrix entries must be integers, got " + e.dump());
    }
  }
  return m;
}

json to_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const mpz_class& v = m(r, c);
      if (v.fits_slong_p()) row.push_back(v.get_si());
      else row.push_back(v.get_str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
}

json RunReport::to_json() const {
  return {{"command", command},
          {"argv", argv},
          {"seed", seed},
          {"tolerances", mwc::to_json(tolerances)},
          {"status", status},
          {"outcome", outcome},
          {"citations", citations}};
}

}  // namespace mwc
