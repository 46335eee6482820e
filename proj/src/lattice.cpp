#include "irrep/lattice.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "irrep/linalg.hpp"

namespace irrep {

namespace {

constexpr double kPi = std::numbers::pi;

void check_cap(int d, int cap) {
  if (d > cap)
    throw CapExceeded("lattice size " + std::to_string(d) +
                      " exceeds the cap of " + std::to_string(cap));
}

// entries of one momentum interval projection depend only on the index
// difference; this evaluates that kernel by summing the defining exponentials
Complex momentum_kernel(int d, int w_p, int delta) {
  Complex acc(0.0, 0.0);
  for (int j = 0; j < w_p; ++j) {
    const double arg = 2.0 * kPi * j * delta / d;
    acc += Complex(std::cos(arg), std::sin(arg));
  }
  return acc / double(d);
}

double closed_form(int d, int w_x, int w_p) {
  double acc = double(w_x) / d;
  const double scale = 2.0 / (double(w_x) * w_p * d);
  for (int n = 1; n < w_p; ++n) {
    const double num = std::sin(kPi * n * w_x / d);
    const double den = std::sin(kPi * n / d);
    acc += scale * (w_p - n) * num * num / (den * den);
  }
  return acc;
}

}  // namespace

void validate(const LatticeConfig& cfg) {
  if (cfg.d < 1)
    throw DimensionMismatch("lattice size must be positive, got " +
                            std::to_string(cfg.d));
  if (cfg.w_x < 1 || cfg.w_p < 1)
    throw DimensionMismatch("interval widths must be positive");
  if (cfg.w_x > cfg.d || cfg.w_p > cfg.d)
    throw DimensionMismatch("interval widths cannot exceed the lattice size");
  if (cfg.d % cfg.w_x != 0)
    throw DimensionMismatch("position width " + std::to_string(cfg.w_x) +
                            " does not divide lattice size " +
                            std::to_string(cfg.d));
  if (cfg.d % cfg.w_p != 0)
    throw DimensionMismatch("momentum width " + std::to_string(cfg.w_p) +
                            " does not divide lattice size " +
                            std::to_string(cfg.d));
}

Matrix dft_matrix(int d) {
  if (d < 1) throw DimensionMismatch("lattice size must be positive");
  Matrix f(d, d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) {
      const double arg = 2.0 * kPi * n * m / d;
      f(n, m) = Complex(std::cos(arg), std::sin(arg)) / std::sqrt(double(d));
    }
  return f;
}

std::pair<std::vector<Matrix>, std::vector<Matrix>> coarse_projections(
    const LatticeConfig& cfg, int cap) {
  validate(cfg);
  check_cap(cfg.d, cap);
  const Matrix f = dft_matrix(cfg.d);
  std::vector<Matrix> position, momentum;
  for (int nu = 0; nu < cfg.k_x(); ++nu) {
    Matrix p = Matrix::Zero(cfg.d, cfg.d);
    for (int a = 0; a < cfg.w_x; ++a)
      p(nu * cfg.w_x + a, nu * cfg.w_x + a) = 1.0;
    position.push_back(std::move(p));
  }
  for (int mu = 0; mu < cfg.k_p(); ++mu) {
    // columns of the transform spanning this momentum interval
    const Matrix c = f.middleCols(mu * cfg.w_p, cfg.w_p);
    momentum.push_back(c * c.adjoint());
  }
  return {std::move(position), std::move(momentum)};
}

double p_agree_state(const Matrix& rho, const LatticeConfig& cfg, int cap) {
  validate(cfg);
  check_cap(cfg.d, cap);
  const int d = cfg.d;
  if (rho.rows() != d || rho.cols() != d)
    throw DimensionMismatch("state dimension does not match the lattice");
  const double scale = std::max(1.0, rho.norm());
  if ((rho - rho.adjoint()).norm() > 1e-8 * scale)
    throw NonHermitianInput("state is not hermitian");
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-8)
    throw Error("state trace is not one");

  // a full-width interval on either side makes the two position readings
  // agree with certainty
  if (cfg.w_x == d || cfg.w_p == d) return 1.0;

  const int w_x = cfg.w_x;
  const int k_p = cfg.k_p();

  // every position window sees the same momentum-interval block up to a
  // diagonal phase, so one small square serves all interval pairs
  Matrix w0(w_x, w_x);
  for (int a = 0; a < w_x; ++a)
    for (int b = 0; b < w_x; ++b) w0(a, b) = momentum_kernel(d, cfg.w_p, a - b);
  const Matrix s0 = w0 * w0;

  // summing the momentum-interval phases leaves only index differences that
  // are multiples of the interval count
  Complex acc(0.0, 0.0);
  for (int nu = 0; nu < cfg.k_x(); ++nu) {
    const int base = nu * w_x;
    for (int a = 0; a < w_x; ++a)
      for (int b = a % k_p; b < w_x; b += k_p)
        acc += s0(a, b) * rho(base + b, base + a);
  }
  acc *= double(k_p);

  if (std::abs(acc.imag()) > 1e-8)
    throw Error("agreement probability has a non-real value");
  double p = acc.real();
  if (p < -1e-9 || p > 1.0 + 1e-9)
    throw Error("agreement probability out of range: " + std::to_string(p));
  return std::min(1.0, std::max(0.0, p));
}

double p_agree_closed(const LatticeConfig& cfg) {
  validate(cfg);
  const double main_form = closed_form(cfg.d, cfg.w_x, cfg.w_p);
  const double swapped = closed_form(cfg.d, cfg.w_p, cfg.w_x);
  if (std::abs(main_form - swapped) > 1e-12)
    throw Error("width-exchanged closed forms disagree");
  return main_form;
}

double p_agree_on_curve(int d, int w_p) {
  if (d < 1 || w_p < 1 || w_p > d)
    throw DimensionMismatch("momentum width must lie between 1 and the "
                            "lattice size");
  double acc = 1.0 / w_p;
  for (int n = 1; n < w_p; ++n) {
    const double num = std::sin(kPi * n / w_p);
    const double den = std::sin(kPi * n / d);
    acc += (2.0 / (double(d) * d)) * (w_p - n) * num * num / (den * den);
  }
  return acc;
}

double p_agree_dense(const LatticeConfig& cfg, int cap) {
  validate(cfg);
  check_cap(cfg.d, cap);
  const int d = cfg.d;
  const Matrix f = dft_matrix(d);
  double acc = 0.0;
  for (int mu = 0; mu < cfg.k_p(); ++mu) {
    for (int nu = 0; nu < cfg.k_x(); ++nu) {
      // the sandwiched product restricted to one position window
      const Matrix c = f.block(nu * cfg.w_x, mu * cfg.w_p, cfg.w_x, cfg.w_p);
      const Matrix block = c * c.adjoint();
      // the block is hermitian, so the trace of its square is its squared
      // Frobenius norm
      acc += block.squaredNorm();
    }
  }
  return acc / d;
}

AgreementBounds p_agree_bounds(int d, int w) {
  if (d < 1 || w < 1 || w > d)
    throw DimensionMismatch("width must lie between 1 and the lattice size");
  AgreementBounds bounds;
  const double g = double(w) * w / d;
  if (double(w) * w < d) bounds.upper = g;
  if (std::floor(g) >= 2.0)
    bounds.lower = 1.0 - (2.0 / (kPi * kPi)) *
                             (std::log(g) + 1.5 * kPi * kPi) / g;
  return bounds;
}

Complex delta_fn_sum(int q, double x) {
  if (q < 1) throw DimensionMismatch("period must be positive");
  Complex acc(0.0, 0.0);
  for (int n = 0; n < q; ++n) {
    const double arg = 2.0 * kPi * x * n / q;
    acc += Complex(std::cos(arg), std::sin(arg));
  }
  return acc / double(q);
}

Complex delta_fn_closed(int q, double x) {
  if (q < 1) throw DimensionMismatch("period must be positive");
  // removable singularity: at multiples of the period every term is one
  if (std::abs(x - q * std::round(x / q)) < 1e-12) return Complex(1.0, 0.0);
  const double phase = kPi * (x - x / q);
  const Complex rotate(std::cos(phase), std::sin(phase));
  return rotate * std::sin(kPi * x) / (q * std::sin(kPi * x / q));
}

Complex delta_fn(int q, double x) {
  const Complex sum = delta_fn_sum(q, x);
  const Complex closed = delta_fn_closed(q, x);
  if (std::abs(sum - closed) > 1e-12 * std::max(1.0, std::abs(sum)))
    throw Error("periodic delta forms disagree");
  return sum;
}

std::vector<RegimeRow> regime_scan(int d, bool direct_oracle) {
  check_cap(d, 4096);
  if (d < 1) throw DimensionMismatch("lattice size must be positive");
  std::vector<int> divisors;
  for (int w = 1; w <= d; ++w)
    if (d % w == 0) divisors.push_back(w);

  std::vector<RegimeRow> rows;
  for (int w_x : divisors)
    for (int w_p : divisors) {
      RegimeRow row;
      row.d = d;
      row.w_x = w_x;
      row.w_p = w_p;
      row.on_curve = (long(w_x) * w_p == d);
      rows.push_back(row);
    }

  const bool with_direct = direct_oracle && d <= 256;
  parallel_for(rows.size(), [&](std::size_t i) {
    RegimeRow& row = rows[i];
    const LatticeConfig cfg{row.d, row.w_x, row.w_p};
    row.closed = p_agree_closed(cfg);
    if (with_direct) row.direct = p_agree_dense(cfg);
    if (row.w_x == row.w_p) {
      const AgreementBounds bounds = p_agree_bounds(row.d, row.w_x);
      row.upper = bounds.upper;
      row.lower = bounds.lower;
    }
  });
  return rows;
}

}  // namespace irrep
