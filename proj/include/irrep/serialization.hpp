#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "irrep/bipartition.hpp"
#include "irrep/coarse_graining.hpp"
#include "irrep/lattice.hpp"
#include "irrep/scattering.hpp"
#include "irrep/types.hpp"

namespace irrep {

// insertion-ordered documents keep every dump deterministic
using Json = nlohmann::ordered_json;

// complex scalars travel as [re, im]; matrices as row-major nested arrays
Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

struct NamedMatrix {
  std::string name;
  Matrix matrix;
};

// a generator-set problem: what to decompose, optional extra operators to
// reduce against the result, and tolerance overrides
struct ProblemFile {
  int dim = 0;
  std::vector<NamedMatrix> generators;
  std::vector<NamedMatrix> matrices;
  bool include_identity = true;
  std::optional<double> tol_eig;
  std::optional<double> tol_zero;

  Tolerances tolerances() const;
  const Matrix& find(const std::string& name) const;  // searches both lists
};

ProblemFile problem_from_json(const Json& j);
Json problem_to_json(const ProblemFile& problem);

struct Diagnostics {
  long scatter_count = 0;
  long minimality_repairs = 0;
  long completeness_additions = 0;
  double max_residual = 0.0;
};

struct DecompositionReport {
  int dim = 0;
  BipartitionTable table;
  Diagnostics diagnostics;
};

DecompositionReport report_from_json(const Json& j);
Json report_to_json(const DecompositionReport& report);

// states are either a vector ("state") or a density matrix ("rho")
struct StateFile {
  int dim = 0;
  std::optional<Vector> pure;
  std::optional<Matrix> rho;

  Matrix density() const;  // outer product for pure inputs, as-is otherwise
};

StateFile state_from_json(const Json& j);
Json state_to_json(const StateFile& state);

PartialBipartitionTable pbpt_from_json(const Json& j);
Json pbpt_to_json(const PartialBipartitionTable& table);

std::vector<NamedMatrix> observables_from_json(const Json& j);

// file plumbing; parse failures surface as SchemaError
Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// deterministic serialization: fixed key order, floats at 17 significant
// digits, rejects non-finite values
std::string dump_json(const Json& j);

// fixed column orders for the CSV outputs
std::string regime_csv(const std::vector<RegimeRow>& rows);
std::string purity_csv(const std::vector<double>& times,
                       const std::vector<double>& purities);

}  // namespace irrep
