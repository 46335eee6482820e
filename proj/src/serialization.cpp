#include "irrep/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace irrep {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw SchemaError("schema error: " + message);
}

double number_from_json(const Json& j, const std::string& what) {
  require(j.is_number(), what + " must be a number");
  return j.get<double>();
}

int integer_from_json(const Json& j, const std::string& what) {
  require(j.is_number_integer(), what + " must be an integer");
  return j.get<int>();
}

const Json& member(const Json& j, const std::string& key) {
  require(j.is_object(), "expected an object with key '" + key + "'");
  auto it = j.find(key);
  require(it != j.end(), "missing key '" + key + "'");
  return *it;
}

std::vector<NamedMatrix> named_list_from_json(const Json& j, int dim,
                                              const std::string& what) {
  require(j.is_array(), what + " must be an array");
  std::vector<NamedMatrix> out;
  for (const Json& entry : j) {
    NamedMatrix named;
    const Json& name = member(entry, "name");
    require(name.is_string(), what + " entry name must be a string");
    named.name = name.get<std::string>();
    require(!named.name.empty(), what + " entry name must be non-empty");
    named.matrix = matrix_from_json(member(entry, "matrix"));
    require(named.matrix.rows() == dim && named.matrix.cols() == dim,
            "matrix '" + named.name + "' is not " + std::to_string(dim) +
                "x" + std::to_string(dim));
    out.push_back(std::move(named));
  }
  return out;
}

Json named_list_to_json(const std::vector<NamedMatrix>& list) {
  Json arr = Json::array();
  for (const NamedMatrix& named : list) {
    Json entry;
    entry["name"] = named.name;
    entry["matrix"] = matrix_to_json(named.matrix);
    arr.push_back(std::move(entry));
  }
  return arr;
}

void format_double(double value, std::string& out) {
  if (!std::isfinite(value))
    throw SchemaError("cannot serialize a non-finite number");
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  out += buffer;
}

void dump_value(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();  // reuse the library's string escaping
        out += ':';
        dump_value(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const Json& item : j) {
        if (!first) out += ',';
        first = false;
        dump_value(item, out);
      }
      out += ']';
      break;
    }
    case Json::value_t::string:
      out += j.dump();
      break;
    case Json::value_t::number_float:
      format_double(j.get<double>(), out);
      break;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::null:
      out += "null";
      break;
    default:  // integers keep their exact textual form
      out += j.dump();
      break;
  }
}

}  // namespace

Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

Complex complex_from_json(const Json& j) {
  require(j.is_array() && j.size() == 2,
          "complex numbers are [re, im] pairs");
  return Complex(number_from_json(j[0], "real part"),
                 number_from_json(j[1], "imaginary part"));
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), "matrices are non-empty row arrays");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  require(cols > 0, "matrix rows must be non-empty arrays");
  Matrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Json& row = j[r];
    require(row.is_array() && row.size() == cols,
            "matrix rows must all have the same length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[c]);
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    arr.push_back(complex_to_json(v(i)));
  return arr;
}

Vector vector_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), "vectors are non-empty arrays");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i]);
  return v;
}

Tolerances ProblemFile::tolerances() const {
  Tolerances tol;
  if (tol_eig) tol.eig_cluster = *tol_eig;
  if (tol_zero) tol.zero = *tol_zero;
  return tol;
}

const Matrix& ProblemFile::find(const std::string& name) const {
  for (const NamedMatrix& named : generators)
    if (named.name == name) return named.matrix;
  for (const NamedMatrix& named : matrices)
    if (named.name == name) return named.matrix;
  throw SchemaError("schema error: no matrix named '" + name + "'");
}

ProblemFile problem_from_json(const Json& j) {
  ProblemFile problem;
  problem.dim = integer_from_json(member(j, "dim"), "dim");
  require(problem.dim >= 1, "dim must be positive");
  problem.generators =
      named_list_from_json(member(j, "generators"), problem.dim, "generators");
  if (j.contains("matrices"))
    problem.matrices =
        named_list_from_json(j["matrices"], problem.dim, "matrices");

  std::set<std::string> seen;
  for (const auto* list : {&problem.generators, &problem.matrices})
    for (const NamedMatrix& named : *list)
      require(seen.insert(named.name).second,
              "duplicate matrix name '" + named.name + "'");

  if (j.contains("options")) {
    const Json& options = j["options"];
    require(options.is_object(), "options must be an object");
    if (options.contains("include_identity")) {
      require(options["include_identity"].is_boolean(),
              "include_identity must be a boolean");
      problem.include_identity = options["include_identity"].get<bool>();
    }
    if (options.contains("tol_eig"))
      problem.tol_eig = number_from_json(options["tol_eig"], "tol_eig");
    if (options.contains("tol_zero"))
      problem.tol_zero = number_from_json(options["tol_zero"], "tol_zero");
  }
  return problem;
}

Json problem_to_json(const ProblemFile& problem) {
  Json j;
  j["dim"] = problem.dim;
  j["generators"] = named_list_to_json(problem.generators);
  if (!problem.matrices.empty())
    j["matrices"] = named_list_to_json(problem.matrices);
  Json options;
  options["include_identity"] = problem.include_identity;
  if (problem.tol_eig) options["tol_eig"] = *problem.tol_eig;
  if (problem.tol_zero) options["tol_zero"] = *problem.tol_zero;
  j["options"] = std::move(options);
  return j;
}

DecompositionReport report_from_json(const Json& j) {
  DecompositionReport report;
  report.dim = integer_from_json(member(j, "dim"), "dim");
  require(report.dim >= 1, "dim must be positive");
  report.table.dim = report.dim;
  const Json& blocks = member(j, "blocks");
  require(blocks.is_array(), "blocks must be an array");
  for (const Json& block_json : blocks) {
    BptBlock block;
    block.rows = integer_from_json(member(block_json, "rows"), "rows");
    block.cols = integer_from_json(member(block_json, "cols"), "cols");
    require(block.rows >= 1 && block.cols >= 1,
            "block shape entries must be positive");
    const Json& basis = member(block_json, "basis");
    require(basis.is_array() &&
                basis.size() == std::size_t(block.rows) * block.cols,
            "block basis must list rows*cols vectors");
    block.basis.resize(report.dim, block.rows * block.cols);
    for (std::size_t v = 0; v < basis.size(); ++v) {
      const Vector vec = vector_from_json(basis[v]);
      require(vec.size() == report.dim,
              "basis vectors must have length dim");
      block.basis.col(v) = vec;
    }
    report.table.blocks.push_back(std::move(block));
  }

  const Json& diag = member(j, "diagnostics");
  report.diagnostics.scatter_count =
      integer_from_json(member(diag, "scatter_count"), "scatter_count");
  report.diagnostics.minimality_repairs = integer_from_json(
      member(diag, "minimality_repairs"), "minimality_repairs");
  report.diagnostics.completeness_additions = integer_from_json(
      member(diag, "completeness_additions"), "completeness_additions");
  report.diagnostics.max_residual =
      number_from_json(member(diag, "max_residual"), "max_residual");
  return report;
}

Json report_to_json(const DecompositionReport& report) {
  Json j;
  j["dim"] = report.dim;
  Json blocks = Json::array();
  for (std::size_t q = 0; q < report.table.blocks.size(); ++q) {
    const BptBlock& block = report.table.blocks[q];
    Json block_json;
    block_json["q"] = int(q);
    block_json["rows"] = block.rows;
    block_json["cols"] = block.cols;
    Json basis = Json::array();
    for (Eigen::Index c = 0; c < block.basis.cols(); ++c)
      basis.push_back(vector_to_json(block.basis.col(c)));
    block_json["basis"] = std::move(basis);
    blocks.push_back(std::move(block_json));
  }
  j["blocks"] = std::move(blocks);
  Json diag;
  diag["scatter_count"] = report.diagnostics.scatter_count;
  diag["minimality_repairs"] = report.diagnostics.minimality_repairs;
  diag["completeness_additions"] = report.diagnostics.completeness_additions;
  diag["max_residual"] = report.diagnostics.max_residual;
  j["diagnostics"] = std::move(diag);
  return j;
}

Matrix StateFile::density() const {
  if (pure) return (*pure) * pure->adjoint();
  return *rho;
}

StateFile state_from_json(const Json& j) {
  StateFile state;
  state.dim = integer_from_json(member(j, "dim"), "dim");
  require(state.dim >= 1, "dim must be positive");
  const bool has_pure = j.contains("state");
  const bool has_rho = j.contains("rho");
  require(has_pure != has_rho,
          "state files carry exactly one of 'state' or 'rho'");
  if (has_pure) {
    state.pure = vector_from_json(j["state"]);
    require(state.pure->size() == state.dim, "state length must equal dim");
  } else {
    state.rho = matrix_from_json(j["rho"]);
    require(state.rho->rows() == state.dim && state.rho->cols() == state.dim,
            "rho must be dim x dim");
  }
  return state;
}

Json state_to_json(const StateFile& state) {
  Json j;
  j["dim"] = state.dim;
  if (state.pure)
    j["state"] = vector_to_json(*state.pure);
  else
    j["rho"] = matrix_to_json(*state.rho);
  return j;
}

PartialBipartitionTable pbpt_from_json(const Json& j) {
  PartialBipartitionTable table;
  table.dim = integer_from_json(member(j, "dim"), "dim");
  table.rows = integer_from_json(member(j, "rows"), "rows");
  table.cols = integer_from_json(member(j, "cols"), "cols");
  const Json& cells = member(j, "cells");
  require(cells.is_array(), "cells must be an array");
  for (const Json& cell_json : cells) {
    PbptCell cell;
    cell.row = integer_from_json(member(cell_json, "row"), "cell row");
    cell.col = integer_from_json(member(cell_json, "col"), "cell col");
    cell.state = vector_from_json(member(cell_json, "state"));
    require(cell.state.size() == table.dim,
            "cell states must have length dim");
    table.cells.push_back(std::move(cell));
  }
  return table;
}

Json pbpt_to_json(const PartialBipartitionTable& table) {
  Json j;
  j["dim"] = table.dim;
  j["rows"] = table.rows;
  j["cols"] = table.cols;
  Json cells = Json::array();
  for (const PbptCell& cell : table.cells) {
    Json cell_json;
    cell_json["row"] = cell.row;
    cell_json["col"] = cell.col;
    cell_json["state"] = vector_to_json(cell.state);
    cells.push_back(std::move(cell_json));
  }
  j["cells"] = std::move(cells);
  return j;
}

std::vector<NamedMatrix> observables_from_json(const Json& j) {
  const int dim = integer_from_json(member(j, "dim"), "dim");
  require(dim >= 1, "dim must be positive");
  return named_list_from_json(member(j, "observables"), dim, "observables");
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read file: " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("invalid JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write file: " + path);
  out << text;
  if (!out) throw SchemaError("failed writing file: " + path);
}

std::string dump_json(const Json& j) {
  std::string out;
  dump_value(j, out);
  out += '\n';
  return out;
}

namespace {

std::string csv_number(double value) {
  std::string out;
  format_double(value, out);
  return out;
}

}  // namespace

std::string regime_csv(const std::vector<RegimeRow>& rows) {
  std::string out = "d,w_x,w_p,on_curve,closed,direct,upper,lower\n";
  for (const RegimeRow& row : rows) {
    out += std::to_string(row.d) + ',' + std::to_string(row.w_x) + ',' +
           std::to_string(row.w_p) + ',' + (row.on_curve ? "1" : "0") + ',' +
           csv_number(row.closed) + ',';
    if (row.direct) out += csv_number(*row.direct);
    out += ',';
    if (row.upper) out += csv_number(*row.upper);
    out += ',';
    if (row.lower) out += csv_number(*row.lower);
    out += '\n';
  }
  return out;
}

std::string purity_csv(const std::vector<double>& times,
                       const std::vector<double>& purities) {
  if (times.size() != purities.size())
    throw DimensionMismatch("time and purity lists differ in length");
  std::string out = "t,purity\n";
  for (std::size_t i = 0; i < times.size(); ++i)
    out += csv_number(times[i]) + ',' + csv_number(purities[i]) + '\n';
  return out;
}

}  // namespace irrep
