#include "irrep/fixtures.hpp"

#include <cmath>
#include <filesystem>
#include <utility>

#include "irrep/linalg.hpp"

namespace irrep {

namespace {

Matrix two_by_two(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Vector ket(int dim, int index) { return Vector::Unit(dim, index); }

Matrix projector(const Vector& v) { return v * v.adjoint(); }

Vector kron_vec(const Vector& a, const Vector& b) {
  return kron(Matrix(a), Matrix(b)).col(0);
}

// permutation unitary sending basis state k to perm[k]
Matrix permutation_unitary(const std::vector<int>& perm) {
  const int d = int(perm.size());
  Matrix u = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) u(perm[k], k) = 1.0;
  return u;
}

std::vector<int> transpositions(int d,
                                const std::vector<std::pair<int, int>>& swaps) {
  std::vector<int> perm(d);
  for (int k = 0; k < d; ++k) perm[k] = k;
  for (const auto& [a, b] : swaps) std::swap(perm[a], perm[b]);
  return perm;
}

// exchange of two qubit factors i and j out of n
Matrix qubit_swap(int n, int i, int j) {
  const int d = 1 << n;
  std::vector<int> perm(d);
  for (int k = 0; k < d; ++k) {
    const int bi = (k >> (n - 1 - i)) & 1;
    const int bj = (k >> (n - 1 - j)) & 1;
    int out = k & ~(1 << (n - 1 - i)) & ~(1 << (n - 1 - j));
    out |= bi << (n - 1 - j);
    out |= bj << (n - 1 - i);
    perm[k] = out;
  }
  return permutation_unitary(perm);
}

NamedMatrix named(std::string name, Matrix m) {
  return NamedMatrix{std::move(name), std::move(m)};
}

PbptCell cell(int row, int col, Vector state) {
  return PbptCell{row, col, std::move(state)};
}

// spin-pair basis: up-up, up-down, down-up, down-down
Vector triplet_top() { return ket(4, 0); }
Vector triplet_zero() {
  Vector v = Vector::Zero(4);
  v(1) = v(2) = 1.0 / std::sqrt(2.0);
  return v;
}
Vector triplet_bottom() { return ket(4, 3); }
Vector singlet() {
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return v;
}

Matrix pair_spin(char axis) {
  const Matrix i2 = Matrix::Identity(2, 2);
  const Matrix s = axis == 'x' ? pauli_x() : axis == 'y' ? pauli_y()
                                                         : pauli_z();
  return (kron(s, i2) + kron(i2, s)) / 2.0;
}

}  // namespace

Matrix pauli_x() { return two_by_two(0, 1, 1, 0); }

Matrix pauli_y() {
  return two_by_two(0, Complex(0, -1), Complex(0, 1), 0);
}

Matrix pauli_z() { return two_by_two(1, 0, 0, -1); }

Matrix spin_axis(int two_j, char axis) {
  if (two_j < 0) throw DimensionMismatch("spin label cannot be negative");
  const int dim = two_j + 1;
  const double j = two_j / 2.0;
  if (axis == 'z') {
    Matrix m = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) m(k, k) = j - k;
    return m;
  }
  // raising operator in the descending-m basis
  Matrix raise = Matrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) {
    const double m = j - k;
    raise(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  if (axis == 'x') return (raise + raise.adjoint()) / 2.0;
  if (axis == 'y') return (raise - raise.adjoint()) / Complex(0, 2);
  throw DimensionMismatch("spin axis must be one of x, y, z");
}

ProblemFile three_qubit_fixture() {
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Vector zero = ket(2, 0);
  const Vector one = ket(2, 1);
  const Matrix h_int =
      projector(kron_vec(kron_vec(plus, plus), zero)) +
      projector(kron_vec(kron_vec(plus, one), one));
  const Matrix h_z1 =
      kron(kron(pauli_z(), Matrix::Identity(2, 2)), Matrix::Identity(2, 2));

  ProblemFile problem;
  problem.dim = 8;
  problem.generators = {named("h_int", h_int), named("h_z1", h_z1)};
  problem.matrices = {named("h_eps_0.25", h_int + 0.25 * h_z1),
                      named("h_eps_1.0", h_int + 1.0 * h_z1)};
  return problem;
}

namespace {

ProblemFile heisenberg_chain(int sites) {
  const int d = 1 << sites;
  ProblemFile problem;
  problem.dim = d;
  for (int i = 0; i + 1 < sites; ++i) {
    const Matrix h =
        qubit_swap(sites, i, i + 1) / 2.0 - Matrix::Identity(d, d) / 4.0;
    problem.generators.push_back(
        named("h" + std::to_string(i + 1) + std::to_string(i + 2), h));
  }
  return problem;
}

}  // namespace

ProblemFile heisenberg3_fixture() {
  ProblemFile problem = heisenberg_chain(3);
  const Matrix& h12 = problem.generators[0].matrix;
  const Matrix& h23 = problem.generators[1].matrix;
  problem.matrices = {named("h_1_2", 1.0 * h12 + 2.0 * h23),
                      named("h_03_m11", 0.3 * h12 - 1.1 * h23)};
  return problem;
}

ProblemFile heisenberg4_fixture() {
  ProblemFile problem = heisenberg_chain(4);
  Matrix sum = Matrix::Zero(16, 16);
  for (const NamedMatrix& g : problem.generators) sum += g.matrix;
  problem.matrices = {named("h_uniform", sum)};
  return problem;
}

ProblemFile ctqw_fixture() {
  const int d = 10;
  // two glued binary trees plus one symmetry-breaking rung; zero-based labels
  const std::vector<std::pair<int, int>> edges = {
      {0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}, {3, 7},
      {4, 7}, {5, 8}, {6, 8}, {7, 9}, {8, 9}, {5, 6}};
  Matrix h = Matrix::Zero(d, d);
  for (const auto& [a, b] : edges) {
    h(a, a) += 1.0;
    h(b, b) += 1.0;
    h(a, b) -= 1.0;
    h(b, a) -= 1.0;
  }
  const Matrix u_pi1 = permutation_unitary(
      transpositions(d, {{1, 2}, {3, 6}, {4, 5}, {7, 8}}));
  const Matrix u_pi2 = permutation_unitary(transpositions(d, {{3, 4}}));
  // the rung permutation sits inside the group algebra, so the hopping term
  // splits into an invariant part plus this symmetry-breaking member
  const Matrix h_mu =
      -permutation_unitary(transpositions(d, {{5, 6}}));

  ProblemFile problem;
  problem.dim = d;
  problem.generators = {named("u_pi1", u_pi1), named("u_pi2", u_pi2)};
  problem.matrices = {named("h", h), named("h_mu", h_mu),
                      named("h_nu", h - h_mu)};
  return problem;
}

ProblemFile spin_half_fixture(int l) {
  if (l < 1) throw DimensionMismatch("spin label must be at least 1");
  const int dim_l = 2 * l + 1;
  const Matrix i_l = Matrix::Identity(dim_l, dim_l);
  const Matrix lz_sz = kron(spin_axis(2 * l, 'z'), pauli_z());
  const Matrix sx = kron(i_l, pauli_x());

  ProblemFile problem;
  problem.dim = 2 * dim_l;
  problem.generators = {named("lz_sz", lz_sz), named("sx", sx)};
  problem.matrices = {named("h_eps_0.7", (lz_sz + 0.7 * sx) / 2.0)};
  return problem;
}

ProblemFile collective_rotation_fixture() {
  const Matrix i2 = Matrix::Identity(2, 2);
  auto collective = [&](const Matrix& s) -> Matrix {
    return (kron(kron(s, i2), i2) + kron(kron(i2, s), i2) +
            kron(kron(i2, i2), s)) /
           2.0;
  };
  const Matrix jx = collective(pauli_x());
  const Matrix jy = collective(pauli_y());
  const Matrix jz = collective(pauli_z());

  ProblemFile problem;
  problem.dim = 8;
  problem.generators = {named("j_x", jx), named("j_z", jz)};
  problem.matrices = {named("casimir", jx * jx + jy * jy + jz * jz)};
  return problem;
}

namespace {

// orbital l=3 with two spin-1/2 particles, ordered orbital x spin x spin
constexpr int kOrbitalL = 3;
constexpr int kOrbitalDim = 2 * kOrbitalL + 1;
constexpr int kHydrogenDim = 4 * kOrbitalDim;

Matrix hydrogen_total_angular(char axis) {
  const Matrix i2 = Matrix::Identity(2, 2);
  const Matrix half = spin_axis(1, axis);  // spin-1/2 operator, not Pauli
  return kron(spin_axis(2 * kOrbitalL, axis), Matrix::Identity(4, 4)) +
         kron(Matrix::Identity(kOrbitalDim, kOrbitalDim),
              kron(half, i2) + kron(i2, half));
}

// orthonormal total-j = l multiplet inside the triplet sector, built by
// lowering from the orthogonalized top state with a positive-overlap phase
std::vector<Vector> hydrogen_triplet_multiplet() {
  const int l = kOrbitalL;
  const Matrix lower =
      hydrogen_total_angular('x') - Complex(0, 1) * hydrogen_total_angular('y');

  const Vector stretched = kron_vec(ket(kOrbitalDim, 0), triplet_top());
  const Vector top_above = (lower * stretched).normalized();  // j = l+1, m = l
  const Vector candidate = kron_vec(ket(kOrbitalDim, 0), triplet_zero());
  Vector top = candidate - top_above * top_above.dot(candidate);
  top.normalize();
  const Complex overlap = candidate.dot(top);
  top *= std::conj(overlap) / std::abs(overlap);

  std::vector<Vector> states = {top};
  for (int m = l; m > -l; --m) {
    const double coeff = std::sqrt(l * (l + 1.0) - m * (m - 1.0));
    states.push_back(Vector(lower * states.back() / coeff));
  }
  return states;
}

}  // namespace

ProblemFile hydrogen_fixture() {
  const int l = kOrbitalL;
  const Matrix jx = hydrogen_total_angular('x');
  const Matrix jy = hydrogen_total_angular('y');
  const Matrix jz = hydrogen_total_angular('z');
  const Matrix j_squared = jx * jx + jy * jy + jz * jz;

  // spectral pieces of total J^2: j = l+1 and j = l-1 are purely triplet
  Matrix q_up, q_down;
  for (const SpectralComponent& c : spectral_projections(j_squared)) {
    if (std::abs(c.value - (l + 1.0) * (l + 2.0)) < 1e-6) q_up = c.projection;
    if (std::abs(c.value - (l - 1.0) * l) < 1e-6) q_down = c.projection;
  }
  if (q_up.size() == 0 || q_down.size() == 0)
    throw EigensolverFailure("unexpected total angular momentum spectrum");
  const Matrix p_singlet = kron(Matrix::Identity(kOrbitalDim, kOrbitalDim),
                                projector(singlet()));
  const Matrix a1 = q_up + 2.0 * q_down + 3.0 * p_singlet;

  // exchange between the two total-j = l multiplets
  const std::vector<Vector> triplet_side = hydrogen_triplet_multiplet();
  Matrix s_ts = Matrix::Zero(kHydrogenDim, kHydrogenDim);
  for (int k = 0; k < kOrbitalDim; ++k) {
    const Vector singlet_side = kron_vec(ket(kOrbitalDim, k), singlet());
    s_ts += triplet_side[k] * singlet_side.adjoint();
  }
  const Matrix a2 = s_ts + Matrix(s_ts.adjoint());

  const Matrix i2 = Matrix::Identity(2, 2);
  const Matrix half_y = spin_axis(1, 'y');
  const Matrix h =
      0.9 * kron(spin_axis(2 * l, 'y'), Matrix::Identity(4, 4)) +
      kron(Matrix::Identity(kOrbitalDim, kOrbitalDim),
           kron(half_y, i2) + kron(i2, half_y));

  ProblemFile problem;
  problem.dim = kHydrogenDim;
  problem.generators = {named("a1", a1), named("a2", a2)};
  problem.matrices = {named("h", h)};
  return problem;
}

Vector hydrogen_initial() {
  // even superposition of the m = 0 members of the two j = l multiplets:
  // the triplet-side column ket and the singlet-side product ket
  const Vector triplet_m0 = hydrogen_triplet_multiplet()[kOrbitalL];
  const Vector singlet_m0 = kron_vec(ket(kOrbitalDim, kOrbitalL), singlet());
  return Vector((triplet_m0 + singlet_m0) / std::sqrt(2.0));
}

ProblemFile spin100_problem() {
  const int dim_l = 201;
  const Matrix i_l = Matrix::Identity(dim_l, dim_l);

  ProblemFile problem;
  problem.dim = 2 * dim_l;
  problem.generators = {named("sx", kron(i_l, pauli_x())),
                        named("sz", kron(i_l, pauli_z()))};
  return problem;
}

Matrix spin100_hamiltonian() {
  return -kron(spin_axis(200, 'z'), pauli_z());
}

Vector spin100_initial() {
  const int l = 100;
  // transverse coherent state of the big spin
  Vector coherent(2 * l + 1);
  for (int k = 0; k <= 2 * l; ++k) {
    const int m = l - k;
    const double log_binomial = std::lgamma(2.0 * l + 1) -
                                std::lgamma(l + m + 1.0) -
                                std::lgamma(l - m + 1.0);
    coherent(k) = std::exp(0.5 * log_binomial - l * std::log(2.0));
  }
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return kron_vec(coherent, plus);
}

PartialBipartitionTable qutrit_pbpt() {
  PartialBipartitionTable table;
  table.dim = 3;
  table.rows = 2;
  table.cols = 2;
  table.cells = {cell(0, 0, ket(3, 0)), cell(0, 1, ket(3, 1)),
                 cell(1, 1, ket(3, 2))};
  return table;
}

Vector qutrit_state() {
  Vector psi(3);
  psi << 0.6, Complex(0.0, 0.48), 0.64;
  return psi;
}

PartialBipartitionTable weather_pbpt() {
  // joint basis order: sun-warm, sun-cold, rain-warm, rain-cold;
  // rows are hat choices, columns are garments
  PartialBipartitionTable table;
  table.dim = 4;
  table.rows = 2;
  table.cols = 3;
  table.cells = {cell(1, 0, ket(4, 0)), cell(1, 1, ket(4, 1)),
                 cell(0, 1, ket(4, 2)), cell(1, 2, ket(4, 3))};
  return table;
}

PartialBipartitionTable weather_rect_pbpt() {
  // rows are sky states, columns are temperatures
  PartialBipartitionTable table;
  table.dim = 4;
  table.rows = 2;
  table.cols = 2;
  table.cells = {cell(0, 0, ket(4, 0)), cell(0, 1, ket(4, 1)),
                 cell(1, 0, ket(4, 2)), cell(1, 1, ket(4, 3))};
  return table;
}

Matrix weather_state() {
  Matrix rho = Matrix::Zero(4, 4);
  rho.diagonal() << 0.05, 0.30, 0.15, 0.50;
  return rho;
}

PartialBipartitionTable singlet_triplet_pbpt() {
  // rows: triplet, singlet; columns: magnetic number +1, 0, -1
  PartialBipartitionTable table;
  table.dim = 4;
  table.rows = 2;
  table.cols = 3;
  table.cells = {cell(0, 0, triplet_top()), cell(0, 1, triplet_zero()),
                 cell(0, 2, triplet_bottom()), cell(1, 1, singlet())};
  return table;
}

std::vector<NamedMatrix> singlet_triplet_observables() {
  const Matrix jx = pair_spin('x');
  return {named("j_z", pair_spin('z')), named("j_x", jx),
          named("j_y", pair_spin('y')), named("j_x_sq", jx * jx)};
}

void write_fixture_corpus(const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  auto write = [&](const std::string& name, const Json& j) {
    write_text_file(directory + "/" + name, dump_json(j));
  };

  write("three_qubit.json", problem_to_json(three_qubit_fixture()));
  write("heisenberg3.json", problem_to_json(heisenberg3_fixture()));
  write("heisenberg4.json", problem_to_json(heisenberg4_fixture()));
  write("ctqw.json", problem_to_json(ctqw_fixture()));
  for (int l : {1, 2, 3})
    write("spin_half_" + std::to_string(l) + ".json",
          problem_to_json(spin_half_fixture(l)));
  write("collective_rotation.json",
        problem_to_json(collective_rotation_fixture()));
  write("hydrogen.json", problem_to_json(hydrogen_fixture()));

  StateFile hydrogen_state;
  hydrogen_state.dim = kHydrogenDim;
  hydrogen_state.pure = hydrogen_initial();
  write("hydrogen_state.json", state_to_json(hydrogen_state));

  write("qutrit_pbpt.json", pbpt_to_json(qutrit_pbpt()));
  write("weather_pbpt.json", pbpt_to_json(weather_pbpt()));
  write("weather_rect_pbpt.json", pbpt_to_json(weather_rect_pbpt()));
  write("singlet_triplet_pbpt.json", pbpt_to_json(singlet_triplet_pbpt()));

  StateFile qutrit;
  qutrit.dim = 3;
  qutrit.pure = qutrit_state();
  write("qutrit_state.json", state_to_json(qutrit));

  StateFile weather;
  weather.dim = 4;
  weather.rho = weather_state();
  write("weather_state.json", state_to_json(weather));

  Json observables;
  observables["dim"] = 4;
  Json list = Json::array();
  for (const NamedMatrix& o : singlet_triplet_observables()) {
    Json entry;
    entry["name"] = o.name;
    entry["matrix"] = matrix_to_json(o.matrix);
    list.push_back(std::move(entry));
  }
  observables["observables"] = std::move(list);
  write("singlet_triplet_observables.json", observables);
}

}  // namespace irrep
