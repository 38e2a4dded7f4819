#include "uamo/duality.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace uamo {

namespace {

Complex expi(double x) { return Complex(std::cos(x), std::sin(x)); }

// Transposed coin with coupling lambda1 at angle 2 pi x.
Matrix2c coin_transposed(const Couplings& c, double x) {
  double cc = std::cos(kTwoPi * x), ss = std::sin(kTwoPi * x);
  Matrix2c q;
  q << Complex(c.lambda1 * cc, c.lambda1p), Complex(c.lambda1 * ss, 0),
       Complex(-c.lambda1 * ss, 0), Complex(c.lambda1 * cc, -c.lambda1p);
  return q;
}

// One step of the transfer recurrence of the transposed walk
// W^T_{lambda2, lambda1}: maps (phi_n^+, phi_{n-1}^-) to (phi_{n+1}^+, phi_n^-).
Matrix2c dual_transfer_step(const Couplings& c, double x, Complex z) {
  if (c.lambda2 <= 1e-14)
    throw std::domain_error("dual transfer: singular (lambda2 = 0)");
  Matrix2c qt = coin_transposed(c, x);
  Matrix2c lhs, rhs;
  lhs << qt(0, 0) * c.lambda2, qt(0, 0) * c.lambda2p,
         qt(1, 0) * c.lambda2, qt(1, 0) * c.lambda2p - z;
  rhs << z + qt(0, 1) * c.lambda2p, -qt(0, 1) * c.lambda2,
         qt(1, 1) * c.lambda2p, -qt(1, 1) * c.lambda2;
  return lhs.partialPivLu().solve(rhs);
}

}  // namespace

Complex FourierVector::eval_plus(double x) const {
  Complex acc(0, 0);
  for (size_t i = 0; i < plus.size(); ++i)
    acc += plus[i] * expi(kTwoPi * static_cast<double>(mlo + static_cast<long>(i)) * x);
  return acc;
}

Complex FourierVector::eval_minus(double x) const {
  Complex acc(0, 0);
  for (size_t i = 0; i < minus.size(); ++i)
    acc += minus[i] * expi(kTwoPi * static_cast<double>(mlo + static_cast<long>(i)) * x);
  return acc;
}

double FourierVector::coeff_norm() const {
  double s = 0.0;
  for (const auto& c : plus) s += std::norm(c);
  for (const auto& c : minus) s += std::norm(c);
  return std::sqrt(s);
}

Couplings dual_params(const Couplings& c) { return Couplings::of(c.lambda2, c.lambda1); }

double isospectrality_check(const Couplings& c, const Frequency& rational,
                            int zeta_resolution, int theta_grid_size) {
  BandStructure a = band_arcs(c, rational, theta_grid_size, zeta_resolution);
  BandStructure b = band_arcs(dual_params(c), rational, theta_grid_size, zeta_resolution);
  return hausdorff_distance(a.arcs, b.arcs);
}

double rotation_match_check(const Couplings& c, const Frequency& freq, double zeta,
                            long n) {
  CocycleSpec fwd{CocycleFamily::TwoStep, c, freq, wrap_angle(zeta)};
  CocycleSpec dual{CocycleFamily::DualTwoStep, c, freq, wrap_angle(zeta)};
  double r1 = rotation_number(fwd, n, Phase(0.0));
  double r2 = rotation_number(dual, n, Phase(0.0));
  return torus_norm(r1 - r2);
}

FourierVector duality_transform(const FourierVector& phi) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  FourierVector psi;
  psi.mlo = phi.mlo;
  psi.plus.resize(phi.plus.size());
  psi.minus.resize(phi.minus.size());
  const Complex mi(0, -1);
  for (size_t i = 0; i < phi.plus.size(); ++i) {
    psi.plus[i] = inv_sqrt2 * (phi.plus[i] + mi * phi.minus[i]);
    psi.minus[i] = inv_sqrt2 * (mi * phi.plus[i] + phi.minus[i]);
  }
  return psi;
}

DualityResidualReport duality_residual(const Couplings& c, const Frequency& freq,
                                       Phase theta, Complex z, const FourierVector& phi,
                                       Phase xi, int window, double input_tol) {
  DualityResidualReport rep;
  if (phi.coeff_norm() < 1e-14) {
    rep.degenerate = true;
    return rep;
  }

  // precondition: phi solves the transposed-walk recurrences at (xi, z)
  auto phi_at = [&](long n) -> Vector2c {
    double x = frac(xi.theta + static_cast<double>(n) * freq.value());
    Complex f = expi(kTwoPi * static_cast<double>(n) * theta.theta);
    return Vector2c(f * phi.eval_plus(x), f * phi.eval_minus(x));
  };
  double in_res = 0.0;
  for (long n = -window - 1; n <= window + 1; ++n) {
    double x = frac(xi.theta + static_cast<double>(n) * freq.value());
    Matrix2c qt = coin_transposed(c, x);
    Vector2c pn = phi_at(n), pp = phi_at(n + 1), pm = phi_at(n - 1);
    Complex u = c.lambda2 * pp(0) + c.lambda2p * pn(1);
    Complex w = -c.lambda2p * pn(0) + c.lambda2 * pm(1);
    Complex r1 = z * pn(0) - (qt(0, 0) * u + qt(0, 1) * w);
    Complex r2 = z * pn(1) - (qt(1, 0) * u + qt(1, 1) * w);
    in_res = std::max(in_res, std::max(std::abs(r1), std::abs(r2)));
  }
  rep.input_residual = in_res;
  if (in_res > input_tol)
    throw std::invalid_argument("duality_residual: input wave fails the dual recurrences (residual " +
                                std::to_string(in_res) + ")");

  // transformed coefficients solve the walk eigenvalue recurrences at theta
  FourierVector psi = duality_transform(phi);
  auto cw = [&](long m) { return c.lambda2 * std::cos(kTwoPi * freq.phase_at(theta.theta, m)); };
  auto sw = [&](long m) { return c.lambda2 * std::sin(kTwoPi * freq.phase_at(theta.theta, m)); };
  const Complex ilp(0, 1);
  double res = 0.0;
  for (long m = -window; m <= window; ++m) {
    Complex gp = psi.coeff_plus(m), gm = psi.coeff_minus(m);
    Complex gpm1 = psi.coeff_plus(m - 1), gmm1 = psi.coeff_minus(m - 1);
    Complex gpp1 = psi.coeff_plus(m + 1), gmp1 = psi.coeff_minus(m + 1);
    Complex r1 = z * gp -
                 (c.lambda1 * (cw(m - 1) + ilp * c.lambda2p) * gpm1 -
                  c.lambda1 * sw(m - 1) * gmm1 -
                  c.lambda1p * (cw(m) - ilp * c.lambda2p) * gm -
                  c.lambda1p * sw(m) * gp);
    Complex r2 = z * gm -
                 (c.lambda1 * (cw(m + 1) - ilp * c.lambda2p) * gmp1 +
                  c.lambda1 * sw(m + 1) * gpp1 +
                  c.lambda1p * (cw(m) + ilp * c.lambda2p) * gp -
                  c.lambda1p * sw(m) * gm);
    res = std::max(res, std::max(std::abs(r1), std::abs(r2)));
  }
  rep.residual = res;
  return rep;
}

std::optional<BlochWave> make_dual_floquet_wave(const Couplings& c,
                                                const Frequency& rational, Phase xi,
                                                double zeta, double unimodular_tol) {
  if (!rational.is_rational())
    throw std::invalid_argument("make_dual_floquet_wave: frequency must be rational");
  const long q = rational.q();
  Complex z = expi(wrap_angle(zeta));

  std::vector<Matrix2c> steps;
  steps.reserve(static_cast<size_t>(q));
  Matrix2c mono = Matrix2c::Identity();
  for (long n = 0; n < q; ++n) {
    steps.push_back(dual_transfer_step(c, rational.phase_at(xi.theta, n), z));
    mono = steps.back() * mono;
  }

  // 2x2 eigren pair; keep the unimodular Floquet multiplier
  Complex tr = mono(0, 0) + mono(1, 1), det = mono.determinant();
  Complex disc = std::sqrt(tr * tr - 4.0 * det);
  Complex mu1 = 0.5 * (tr + disc), mu2 = 0.5 * (tr - disc);
  Complex mu = std::fabs(std::abs(mu1) - 1.0) <= std::fabs(std::abs(mu2) - 1.0) ? mu1 : mu2;
  if (std::fabs(std::abs(mu) - 1.0) > unimodular_tol) return std::nullopt;

  Vector2c v0;
  {
    Vector2c cand1(mono(0, 1), mu - mono(0, 0));
    Vector2c cand2(mu - mono(1, 1), mono(1, 0));
    v0 = cand1.norm() >= cand2.norm() ? cand1 : cand2;
    if (v0.norm() < 1e-14) v0 = Vector2c(1, 0);
    v0.normalize();
  }

  double theta_f = frac(std::arg(mu) / (kTwoPi * static_cast<double>(q)));

  // phick values at the q orbit points
  std::vector<Vector2c> x(static_cast<size_t>(q) + 1);
  x[0] = v0;
  for (long n = 0; n < q; ++n) x[static_cast<size_t>(n + 1)] = steps[static_cast<size_t>(n)] * x[static_cast<size_t>(n)];

  Eigen::VectorXcd vp(q), vm(q);
  std::vector<double> xs(static_cast<size_t>(q));
  for (long n = 0; n < q; ++n) {
    xs[static_cast<size_t>(n)] = rational.phase_at(xi.theta, n);
    Complex damp = expi(-kTwoPi * static_cast<double>(n) * theta_f);
    vp(n) = damp * x[static_cast<size_t>(n)](0);       // phi_n^+
    vm(n) = damp * x[static_cast<size_t>(n + 1)](1);   // phi_n^-
  }

  // trig interpolation on a centered frequency window of size q
  long mlo = -(q / 2);
  Eigen::MatrixXcd a(q, q);
  for (long j = 0; j < q; ++j)
    for (long m = 0; m < q; ++m)
      a(j, m) = expi(kTwoPi * static_cast<double>(mlo + m) * xs[static_cast<size_t>(j)]);
  Eigen::VectorXcd cp = a.partialPivLu().solve(vp);
  Eigen::VectorXcd cm = a.partialPivLu().solve(vm);

  BlochWave wave;
  wave.base.mlo = mlo;
  wave.base.plus.assign(cp.data(), cp.data() + q);
  wave.base.minus.assign(cm.data(), cm.data() + q);
  wave.theta = Phase(theta_f);
  wave.z = z;
  wave.xi = xi;
  return wave;
}

Complex wronskian(const SolutionSamples& u, const SolutionSamples& v, long n) {
  const Vector2c& a = u.at(n);
  const Vector2c& b = v.at(n);
  return a(0) * b(1) - a(1) * b(0);
}

double wronskian_drift(const SolutionSamples& u, const SolutionSamples& v) {
  long lo = std::max(u.nlo, v.nlo);
  long hi = std::min(u.nlo + static_cast<long>(u.pairs.size()), v.nlo + static_cast<long>(v.pairs.size())) - 1;
  Complex w0 = wronskian(u, v, lo);
  double drift = 0.0;
  for (long n = lo; n <= hi; ++n) drift = std::max(drift, std::abs(wronskian(u, v, n) - w0));
  return drift;
}

}  // namespace uamo
