#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mwc/curve_lift.hpp"
#include "mwc/factorizers.hpp"
#include "mwc/fiber_lab.hpp"

namespace mwc {

using nlohmann::json;

/// Complex numbers are written as [re, im].
json complex_to_json(Complex z);
Complex complex_from_json(const json& j);

/// {"rows": [[[re, im], ...], ...]}
json matrix_to_json(const CMatrix& m);
/// Accepts {"rows": ...} or a bare row list; entries may be [re, im] pairs or real numbers.
/// Throws std::invalid_argument on ragged, empty or non-finite input.
CMatrix matrix_from_json(const json& j);

json vector_to_json(const CVector& v);
json params_to_json(const ParamPoint& p);

json to_json(const Tolerances& tol);
json to_json(const Factorization& f);
json to_json(const FiberSampleReport& r);
json to_json(const SpecVerification& v);
json to_json(const PathLift& lift);

/// {"samples": [{"t": real, "matrix": {...}}, ...]}
std::vector<std::pair<double, CMatrix>> curve_samples_from_json(const json& j);

/// Integer matrix from a JSON row list such as [[1,2,1,2],[2,1,2,1]].
IntMatrix int_matrix_from_json(const json& j);
json to_json(const IntMatrix& m);

/// Reads and parses a JSON file; throws std::invalid_argument with the path on failure.
json read_json_file(const std::string& path);

/// Uniform envelope printed by every CLI command.
struct RunReport {
  std::string command;
  std::vector<std::string> argv;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  std::string status;  ///< ok, excluded-locus, fails, unknown, tracking-failure, error
  json outcome = json::object();
  std::vector<std::string> citations;

  json to_json() const;
};

}  // namespace mwc
