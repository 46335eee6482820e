#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace irrep {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// every failure mode gets its own type so callers can tell mathematical
// rejections apart from input/shape problems
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define IRREP_DEFINE_ERROR(NAME)                    \
  struct NAME : Error {                             \
    using Error::Error;                             \
  }

IRREP_DEFINE_ERROR(NonHermitianInput);
IRREP_DEFINE_ERROR(EigensolverFailure);
IRREP_DEFINE_ERROR(ZeroOperator);
IRREP_DEFINE_ERROR(NotIsometry);
IRREP_DEFINE_ERROR(DimensionMismatch);
IRREP_DEFINE_ERROR(EmptyGeneratorSet);
IRREP_DEFINE_ERROR(NonTermination);
IRREP_DEFINE_ERROR(DisconnectedPath);
IRREP_DEFINE_ERROR(MultipleSingularValues);
IRREP_DEFINE_ERROR(NotFullySupported);
IRREP_DEFINE_ERROR(NotInAlgebra);
IRREP_DEFINE_ERROR(NotAGroup);
IRREP_DEFINE_ERROR(CapExceeded);
IRREP_DEFINE_ERROR(NotInSpan);
IRREP_DEFINE_ERROR(SchemaError);

#undef IRREP_DEFINE_ERROR

// shared numeric knobs; the two scale-dependent ones are applied as
// eig_cluster * spectral norm and zero * dimension at the point of use
struct Tolerances {
  double eig_cluster = 1e-8;  // relative gap that separates eigenvalue clusters
  double zero = 1e-10;        // per-dimension threshold for treating values as zero

  double cluster_gap(double spectral_norm) const {
    return eig_cluster * std::max(spectral_norm, 1e-300);
  }
  double zero_threshold(int dim) const { return zero * static_cast<double>(dim); }
};

}  // namespace irrep
