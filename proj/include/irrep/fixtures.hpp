#pragma once

#include <vector>

#include "irrep/coarse_graining.hpp"
#include "irrep/serialization.hpp"
#include "irrep/types.hpp"

namespace irrep {

// elementary building blocks
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

// spin operator for total spin j = two_j/2 along 'x', 'y', or 'z'; basis is
// ordered by descending magnetic quantum number
Matrix spin_axis(int two_j, char axis);

// ---------------------------------------------------------------------------
// generator-set problems
// ---------------------------------------------------------------------------

// two interaction terms on three qubits whose algebra splits into two scalar
// blocks and one qubit block
ProblemFile three_qubit_fixture();

// nearest-neighbour exchange couplings on chains of three and four spins
ProblemFile heisenberg3_fixture();
ProblemFile heisenberg4_fixture();

// permutation symmetries of a walk on two glued binary trees (ten vertices),
// with the walk generator and its symmetric/asymmetric parts
ProblemFile ctqw_fixture();

// spin-l coupled to a single qubit through L_z sigma_z and a transverse field
ProblemFile spin_half_fixture(int l);

// collective rotations of three qubits
ProblemFile collective_rotation_fixture();

// orbital angular momentum l=3 with two spin-1/2 particles: total-spin
// projections plus a singlet/triplet exchange generator
ProblemFile hydrogen_fixture();
Vector hydrogen_initial();

// spin-100 coupled to a qubit; built in code only (the matrices are large)
ProblemFile spin100_problem();
Matrix spin100_hamiltonian();
Vector spin100_initial();

// ---------------------------------------------------------------------------
// partial bipartitions and states
// ---------------------------------------------------------------------------

PartialBipartitionTable qutrit_pbpt();
Vector qutrit_state();

PartialBipartitionTable weather_pbpt();       // ragged hat/garment table
PartialBipartitionTable weather_rect_pbpt();  // plain sky/temperature split
Matrix weather_state();

PartialBipartitionTable singlet_triplet_pbpt();
std::vector<NamedMatrix> singlet_triplet_observables();

// write the full corpus (everything except the spin-100 problem) as JSON
// files under the given directory
void write_fixture_corpus(const std::string& directory);

}  // namespace irrep
