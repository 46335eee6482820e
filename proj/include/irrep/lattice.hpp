#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "irrep/types.hpp"

namespace irrep {

// periodic lattice with coarse position and momentum intervals; both widths
// must divide the site count
struct LatticeConfig {
  int d = 0;
  int w_x = 0;
  int w_p = 0;
  int k_x() const { return d / w_x; }
  int k_p() const { return d / w_p; }
};

void validate(const LatticeConfig& cfg);

// discrete Fourier transform with entries exp(i 2 pi n m / d) / sqrt(d)
Matrix dft_matrix(int d);

// interval indicator projections in position, and their Fourier conjugates in
// momentum; each family resolves the identity
std::pair<std::vector<Matrix>, std::vector<Matrix>> coarse_projections(
    const LatticeConfig& cfg, int cap = 4096);

// probability that the position readings of an instantaneous
// position-momentum-position measurement sequence agree, for a given state
double p_agree_state(const Matrix& rho, const LatticeConfig& cfg,
                     int cap = 4096);

// the same quantity averaged over all states (evaluated at the maximally
// mixed state) in closed form; the width-exchanged expression is evaluated
// alongside and must agree
double p_agree_closed(const LatticeConfig& cfg);

// closed form specialized to the critical curve w_x * w_p = d; meaningful for
// any w_p between 1 and d, no divisibility required
double p_agree_on_curve(int d, int w_p);

// reference evaluation at the maximally mixed state from explicitly
// constructed projections, kept free of the closed-form shortcuts
double p_agree_dense(const LatticeConfig& cfg, int cap = 4096);

// analytic bounds for the symmetric width w_x = w_p = w; each bound is only
// exposed where its validity condition holds
struct AgreementBounds {
  std::optional<double> upper;  // w*w/d, for w strictly below sqrt(d)
  std::optional<double> lower;  // requires floor(w*w/d) >= 2
};

AgreementBounds p_agree_bounds(int d, int w);

// periodic averaged exponential sum and its sine-ratio closed form
Complex delta_fn_sum(int q, double x);
Complex delta_fn_closed(int q, double x);
Complex delta_fn(int q, double x);  // evaluates both and checks agreement

// one row of the width-plane survey
struct RegimeRow {
  int d = 0;
  int w_x = 0;
  int w_p = 0;
  bool on_curve = false;  // w_x * w_p == d
  double closed = 0.0;
  std::optional<double> direct;  // dense evaluation, small lattices only
  std::optional<double> upper;   // bounds appear on symmetric rows only
  std::optional<double> lower;
};

std::vector<RegimeRow> regime_scan(int d, bool direct_oracle = false);

}  // namespace irrep
