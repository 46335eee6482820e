// command line front end: decompose generator sets, reduce operators and
// states, coarse-grain over partial tables, evaluate the lattice agreement
// probability, and trace reduced purity over time
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irrep/bipartition.hpp"
#include "irrep/coarse_graining.hpp"
#include "irrep/fixtures.hpp"
#include "irrep/lattice.hpp"
#include "irrep/reduction.hpp"
#include "irrep/scattering.hpp"
#include "irrep/serialization.hpp"
#include "irrep/types.hpp"

namespace {

using namespace irrep;

constexpr int kExitFileOrSchema = 1;
constexpr int kExitCertification = 2;

struct CommonFlags {
  bool verbose = false;
  std::optional<long> seed;
  std::optional<double> tol_eig;
  std::optional<double> tol_zero;
  std::string output;

  Tolerances merge(const ProblemFile& problem) const {
    Tolerances tol = problem.tolerances();
    if (tol_eig) tol.eig_cluster = *tol_eig;
    if (tol_zero) tol.zero = *tol_zero;
    return tol;
  }
};

void add_common(CLI::App* cmd, CommonFlags& common, bool with_output = true) {
  cmd->add_flag("--verbose", common.verbose,
                "emit the full scattering trace on standard error");
  cmd->add_option("--seed", common.seed,
                  "run a seeded random verification pass");
  cmd->add_option("--tol-eig", common.tol_eig,
                  "eigenvalue clustering tolerance override");
  cmd->add_option("--tol-zero", common.tol_zero, "zero threshold override");
  if (with_output)
    cmd->add_option("--output", common.output,
                    "write the JSON result here instead of standard output");
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty())
    std::cout << text;
  else
    write_text_file(output, text);
}

std::string shape_list(const BipartitionTable& table) {
  std::string out;
  for (const BptBlock& block : table.blocks) {
    if (!out.empty()) out += ", ";
    out += std::to_string(block.rows) + "x" + std::to_string(block.cols);
  }
  return out;
}

// full decomposition pipeline with stderr diagnostics and the optional
// seeded spot check on a random hermitian combination of the generators
DecompositionReport run_decomposition(const ProblemFile& problem,
                                      const CommonFlags& common) {
  std::vector<Matrix> generators;
  for (const NamedMatrix& named : problem.generators)
    generators.push_back(named.matrix);

  const Tolerances tol = common.merge(problem);
  ScatterLog log;
  log.verbose = common.verbose;
  const ReflectionNetwork net =
      decompose_generators(generators, tol, problem.include_identity, &log);
  for (const std::string& line : log.trace) std::cerr << line << "\n";

  DecompositionReport report;
  report.dim = problem.dim;
  report.table = bpt_from_network(net, tol);
  validate(report.table);
  report.diagnostics.scatter_count = log.scatter_count;
  report.diagnostics.minimality_repairs = log.minimality_repairs;
  report.diagnostics.completeness_additions = log.completeness_additions;
  for (const Matrix& g : generators)
    report.diagnostics.max_residual =
        std::max(report.diagnostics.max_residual,
                 verify_membership(g, report.table).residual);

  std::cerr << "decomposed dim " << report.dim << " into blocks ["
            << shape_list(report.table) << "]; scatters "
            << log.scatter_count << ", repairs " << log.minimality_repairs
            << ", additions " << log.completeness_additions
            << ", max membership residual " << report.diagnostics.max_residual
            << "\n";

  if (common.seed) {
    std::mt19937 rng(static_cast<unsigned>(*common.seed));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix combo = Matrix::Zero(problem.dim, problem.dim);
    for (const Matrix& g : generators) combo += gauss(rng) * g;
    const double residual = verify_membership(combo, report.table).residual;
    std::cerr << "seeded combination residual " << residual << "\n";
  }
  return report;
}

// reuse a stored decomposition when provided, otherwise decompose in process
BipartitionTable table_for(const ProblemFile& problem,
                           const std::string& decomposition_path,
                           const CommonFlags& common) {
  if (decomposition_path.empty())
    return run_decomposition(problem, common).table;
  const DecompositionReport stored =
      report_from_json(load_json_file(decomposition_path));
  if (stored.dim != problem.dim)
    throw DimensionMismatch("stored decomposition has dim " +
                            std::to_string(stored.dim) + ", input has dim " +
                            std::to_string(problem.dim));
  validate(stored.table);
  return stored.table;
}

int cmd_reduce(const std::string& input, const std::string& decomposition,
               const std::string& mode, const std::string& target,
               const CommonFlags& common) {
  const ProblemFile problem = problem_from_json(load_json_file(input));
  const BipartitionTable table = table_for(problem, decomposition, common);

  Json j;
  j["mode"] = mode;
  if (mode == "commutant") {
    const BipartitionTable flipped = transpose(table);
    int isometries = 0;
    for (const BptBlock& block : flipped.blocks)
      isometries += block.cols * block.cols;
    std::cerr << "commutant blocks [" << shape_list(flipped)
              << "], spanned by " << isometries << " partial isometries\n";
    DecompositionReport report;
    report.dim = problem.dim;
    report.table = flipped;
    emit(dump_json(report_to_json(report)), common.output);
    return 0;
  }

  if (target.empty())
    throw SchemaError("mode '" + mode + "' needs --target");
  const Matrix& operand = problem.find(target);
  j["target"] = target;

  if (mode == "hamiltonian") {
    const ReducedHamiltonian reduced = reduce_hamiltonian(operand, table);
    std::cerr << "membership residual " << reduced.residual
              << ", cross row " << reduced.cross_row << "\n";
    j["residual"] = reduced.residual;
    j["cross_row"] = reduced.cross_row;
    Json blocks = Json::array();
    for (const Matrix& block : reduced.blocks)
      blocks.push_back(matrix_to_json(block));
    j["blocks"] = std::move(blocks);
  } else {  // state
    validate_density(operand, 1e-8);
    Json blocks = Json::array();
    const std::vector<Matrix> tables = reduce_state(operand, table);
    for (std::size_t q = 0; q < tables.size(); ++q) {
      Json entry;
      entry["rows"] = table.blocks[q].rows;
      entry["cols"] = table.blocks[q].cols;
      entry["state"] = matrix_to_json(tables[q]);
      blocks.push_back(std::move(entry));
    }
    j["blocks"] = std::move(blocks);
  }
  emit(dump_json(j), common.output);
  return 0;
}

int cmd_coarse_grain(const std::string& input, const std::string& pbpt_path,
                     const std::string& side_label,
                     const std::string& observables_path,
                     const CommonFlags& common) {
  const StateFile state = state_from_json(load_json_file(input));
  const PartialBipartitionTable pbpt =
      pbpt_from_json(load_json_file(pbpt_path));
  validate(pbpt);
  const Side side = side_label == "A" ? Side::rows : Side::cols;
  const Matrix rho = state.density();
  validate_density(rho, 1e-8);
  const Matrix reduced = trace_out_partial(rho, pbpt, side);

  Json j;
  j["side"] = side_label;
  j["dim"] = int(reduced.rows());
  j["rho"] = matrix_to_json(reduced);

  if (!observables_path.empty()) {
    const std::vector<NamedMatrix> observables =
        observables_from_json(load_json_file(observables_path));
    const OperatorSystemBasis basis = skl_from_partial_bpt(
        side == Side::rows ? transpose(pbpt) : pbpt);
    Json reports = Json::array();
    for (const NamedMatrix& named : observables) {
      const PullBack pulled = pull_back(named.matrix, basis);
      const double scale = std::max(named.matrix.norm(), 1e-300);
      const bool in_span = pulled.residual <= 1e-6 * scale;
      Json entry;
      entry["name"] = named.name;
      entry["residual"] = pulled.residual;
      entry["in_span"] = in_span;
      entry["reduced_op"] = matrix_to_json(pulled.reduced_op);
      if (in_span) {
        Json rows = Json::array();
        for (const DistortionRow& row :
             probability_distortion(named.matrix, basis, rho)) {
          Json row_json;
          row_json["outcome"] = row.outcome;
          row_json["ambient"] = row.ambient;
          row_json["reduced"] = row.reduced;
          row_json["difference"] = row.difference;
          rows.push_back(std::move(row_json));
        }
        entry["distortion"] = std::move(rows);
      }
      std::cerr << "observable " << named.name << ": residual "
                << pulled.residual << (in_span ? "" : " (outside the span)")
                << "\n";
      reports.push_back(std::move(entry));
    }
    j["observables"] = std::move(reports);
  }
  emit(dump_json(j), common.output);
  return 0;
}

int cmd_uncertainty(int d, std::optional<int> wx, std::optional<int> wp,
                    const std::string& scan, bool direct_oracle,
                    const std::string& csv_path) {
  std::vector<RegimeRow> rows;
  if (!scan.empty()) {
    rows = regime_scan(d, direct_oracle);
    if (scan == "diagonal") {
      std::vector<RegimeRow> diagonal;
      for (const RegimeRow& row : rows)
        if (row.w_x == row.w_p) diagonal.push_back(row);
      rows = std::move(diagonal);
    }
  } else {
    if (!wx || !wp)
      throw SchemaError("single point evaluation needs --wx and --wp");
    const LatticeConfig cfg{d, *wx, *wp};
    RegimeRow row;
    row.d = d;
    row.w_x = *wx;
    row.w_p = *wp;
    row.on_curve = (*wx) * (*wp) == d;
    row.closed = p_agree_closed(cfg);
    if (direct_oracle && d <= 256) row.direct = p_agree_dense(cfg);
    if (*wx == *wp) {
      const AgreementBounds bounds = p_agree_bounds(d, *wx);
      row.upper = bounds.upper;
      row.lower = bounds.lower;
    }
    rows.push_back(row);
  }
  emit(regime_csv(rows), csv_path);
  std::cerr << "evaluated " << rows.size() << " width configuration"
            << (rows.size() == 1 ? "" : "s") << " at d " << d << "\n";
  return 0;
}

std::vector<double> time_grid(double tmax, double dt) {
  if (!(dt > 0.0) || !(tmax >= 0.0))
    throw SchemaError("time grid needs tmax >= 0 and dt > 0");
  const int steps = int(std::lround(tmax / dt));
  std::vector<double> times;
  for (int i = 0; i <= steps; ++i) times.push_back(i * dt);
  return times;
}

int cmd_purity(const std::string& builtin, const std::string& input,
               const std::string& decomposition,
               const std::string& hamiltonian_name,
               const std::string& state_path, double tmax, double dt,
               const std::string& csv_path, const CommonFlags& common) {
  std::vector<double> purities;
  std::vector<double> times;
  if (builtin == "spin100") {
    const ProblemFile problem = spin100_problem();
    const BipartitionTable table = table_for(problem, decomposition, common);
    times = time_grid(4.0, 0.02);
    purities = purity_series(spin100_hamiltonian(), spin100_initial(), table,
                             times);
  } else if (builtin == "hydrogen") {
    const ProblemFile problem = hydrogen_fixture();
    const BipartitionTable table = table_for(problem, decomposition, common);
    times = time_grid(80.0, 0.05);
    purities = purity_series(problem.find("h"), hydrogen_initial(), table,
                             times);
  } else if (!builtin.empty()) {
    throw SchemaError("unknown builtin '" + builtin +
                      "' (expected spin100 or hydrogen)");
  } else {
    if (input.empty() || hamiltonian_name.empty() || state_path.empty())
      throw SchemaError(
          "purity needs --builtin or --input, --hamiltonian and --state");
    const ProblemFile problem = problem_from_json(load_json_file(input));
    const BipartitionTable table = table_for(problem, decomposition, common);
    const StateFile state = state_from_json(load_json_file(state_path));
    times = time_grid(tmax, dt);
    const Matrix& h = problem.find(hamiltonian_name);
    if (state.pure)
      purities = purity_series(h, *state.pure, table, times);
    else
      purities = purity_series(h, *state.rho, table, times);
  }
  emit(purity_csv(times, purities), csv_path);
  std::cerr << "purity traced over " << times.size() << " samples\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"irreducible representation structure of operator algebras"};
  app.require_subcommand(1);

  CommonFlags common;

  auto* decompose = app.add_subcommand(
      "decompose", "find the block structure of a generated algebra");
  std::string input;
  decompose->add_option("--input", input, "problem JSON file")->required();
  std::optional<bool> include_identity;
  decompose->add_option("--include-identity", include_identity,
                        "override the problem file's identity handling");
  add_common(decompose, common);

  auto* reduce = app.add_subcommand(
      "reduce", "compress an operator or state through a decomposition");
  std::string reduce_input, reduce_decomposition, reduce_target;
  std::string reduce_mode;
  reduce->add_option("--input", reduce_input, "problem JSON file")->required();
  reduce->add_option("--decomposition", reduce_decomposition,
                     "reuse a stored decomposition report");
  reduce->add_option("--mode", reduce_mode, "hamiltonian, state, or commutant")
      ->required()
      ->check(CLI::IsMember({"hamiltonian", "state", "commutant"}));
  reduce->add_option("--target", reduce_target,
                     "named matrix from the problem file");
  add_common(reduce, common);

  auto* coarse = app.add_subcommand(
      "coarse-grain", "reduce a state over a partial bipartition");
  std::string coarse_input, coarse_pbpt, coarse_side, coarse_observables;
  coarse->add_option("--input", coarse_input, "state JSON file")->required();
  coarse->add_option("--pbpt", coarse_pbpt, "partial bipartition JSON file")
      ->required();
  coarse->add_option("--side", coarse_side, "which side to keep")
      ->required()
      ->check(CLI::IsMember({"A", "B"}));
  coarse->add_option("--observables", coarse_observables,
                     "observable list JSON file for push/pull reports");
  add_common(coarse, common);

  auto* uncertainty = app.add_subcommand(
      "uncertainty", "position/momentum window agreement probability");
  int lattice_d = 0;
  std::optional<int> lattice_wx, lattice_wp;
  std::string scan_mode, csv_path;
  bool direct_oracle = false;
  uncertainty->add_option("--d", lattice_d, "lattice dimension")->required();
  uncertainty->add_option("--wx", lattice_wx, "position window width");
  uncertainty->add_option("--wp", lattice_wp, "momentum window width");
  uncertainty->add_option("--scan", scan_mode,
                          "sweep all divisor widths (full or diagonal)")
      ->check(CLI::IsMember({"full", "diagonal"}));
  uncertainty->add_flag("--direct-oracle", direct_oracle,
                        "add the dense reference column for d <= 256");
  uncertainty->add_option("--csv", csv_path,
                          "write CSV here instead of standard output");
  add_common(uncertainty, common, false);

  auto* purity = app.add_subcommand(
      "purity", "reduced purity along a hamiltonian evolution");
  std::string purity_builtin, purity_input, purity_decomposition;
  std::string purity_hamiltonian, purity_state, purity_csv_path;
  double purity_tmax = 0.0, purity_dt = 0.0;
  purity->add_option("--builtin", purity_builtin,
                     "bundled experiment: spin100 or hydrogen");
  purity->add_option("--input", purity_input, "problem JSON file");
  purity->add_option("--decomposition", purity_decomposition,
                     "reuse a stored decomposition report");
  purity->add_option("--hamiltonian", purity_hamiltonian,
                     "named matrix generating the evolution");
  purity->add_option("--state", purity_state, "initial state JSON file");
  purity->add_option("--tmax", purity_tmax, "final time");
  purity->add_option("--dt", purity_dt, "time step");
  purity->add_option("--csv", purity_csv_path,
                     "write CSV here instead of standard output");
  add_common(purity, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitFileOrSchema;
  }

  try {
    if (decompose->parsed()) {
      ProblemFile problem = problem_from_json(load_json_file(input));
      if (include_identity) problem.include_identity = *include_identity;
      const DecompositionReport report = run_decomposition(problem, common);
      emit(dump_json(report_to_json(report)), common.output);
      return 0;
    }
    if (reduce->parsed())
      return cmd_reduce(reduce_input, reduce_decomposition, reduce_mode,
                        reduce_target, common);
    if (coarse->parsed())
      return cmd_coarse_grain(coarse_input, coarse_pbpt, coarse_side,
                              coarse_observables, common);
    if (uncertainty->parsed())
      return cmd_uncertainty(lattice_d, lattice_wx, lattice_wp, scan_mode,
                             direct_oracle, csv_path);
    if (purity->parsed())
      return cmd_purity(purity_builtin, purity_input, purity_decomposition,
                        purity_hamiltonian, purity_state, purity_tmax,
                        purity_dt, purity_csv_path, common);
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFileOrSchema;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFileOrSchema;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCertification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFileOrSchema;
  }
  return kExitFileOrSchema;
}
