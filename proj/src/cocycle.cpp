#include "uamo/cocycle.hpp"

#include <algorithm>
#include <cmath>

namespace uamo {

namespace {

constexpr double kSingularTol = 1e-14;

// Operator norm of a general complex 2x2 matrix from its Frobenius norm and
// determinant: s_max^2 = (f + sqrt(f^2 - 4 |det|^2)) / 2.
double op_norm2c(const Matrix2c& m) {
  double f = m.squaredNorm();
  double d = std::abs(m.determinant());
  double disc = std::max(0.0, f * f - 4.0 * d * d);
  return std::sqrt(0.5 * (f + std::sqrt(disc)));
}

}  // namespace

Su11 Su11::from_matrix(const Matrix2c& m, double tol) {
  if (std::abs(m(1, 0) - std::conj(m(0, 1))) > tol ||
      std::abs(m(1, 1) - std::conj(m(0, 0))) > tol)
    throw std::domain_error("Su11::from_matrix: matrix lacks the SU(1,1) form");
  Su11 s{m(0, 0), m(0, 1)};
  if (s.member_residual() > tol)
    throw std::domain_error("Su11::from_matrix: |a|^2 - |b|^2 != 1");
  return s;
}

Su11 szego_step(const VerblunskyPair& gauged, Complex z) {
  if (std::abs(gauged.rho.imag()) > 1e-12)
    throw std::domain_error("szego_step: rho must be gauged real");
  double rho = gauged.rho.real();
  if (rho <= kSingularTol)
    throw std::domain_error("szego_step: singular pair (rho = 0)");
  double zeta = wrap_angle(std::arg(z));
  Complex half(std::cos(0.5 * zeta), std::sin(0.5 * zeta));  // z^{1/2}, arg z in [0, 2pi)
  return Su11{half / rho, -std::conj(gauged.alpha) * std::conj(half) / rho};
}

Su11 two_step_map(const Couplings& c, Complex z, double theta) {
  if (c.lambda1 <= kSingularTol)
    throw std::domain_error("two_step_map: singular cocycle (lambda1 = 0)");
  double s = std::sin(kTwoPi * theta);
  double den = 1.0 - c.lambda2 * c.lambda2 * s * s;
  if (den <= kSingularTol)
    throw std::domain_error("two_step_map: singular cocycle (vanishing denominator)");
  double d = c.lambda1 * std::sqrt(den);
  Complex zi = 1.0 / z;
  return Su11{(z + c.lambda1p * c.lambda2 * s) / d,
              (-c.lambda1p * zi - c.lambda2 * s) / d};
}

Matrix2c two_step_map_complex(const Couplings& c, Complex z, Complex theta) {
  if (c.lambda1 <= kSingularTol)
    throw std::domain_error("two_step_map_complex: singular cocycle (lambda1 = 0)");
  Complex s = std::sin(kTwoPi * theta);
  Complex den = 1.0 - c.lambda2 * c.lambda2 * s * s;
  if (std::abs(den) <= 1e-12)
    throw std::domain_error("two_step_map_complex: vanishing denominator in the strip");
  Complex d = c.lambda1 * std::sqrt(den);
  Complex zi = 1.0 / z;
  Matrix2c m;
  m << (z + c.lambda1p * c.lambda2 * s) / d, (-c.lambda1p * zi - c.lambda2 * s) / d,
       (-c.lambda1p * z - c.lambda2 * s) / d, (zi + c.lambda1p * c.lambda2 * s) / d;
  return m;
}

Su11 dual_two_step_map(const Couplings& c, Complex z, double theta) {
  Couplings swapped = Couplings::of(c.lambda2, c.lambda1);
  try {
    return two_step_map(swapped, z, theta);
  } catch (const std::domain_error&) {
    throw std::domain_error("dual_two_step_map: singular cocycle (lambda2 = 0 or vanishing denominator)");
  }
}

Matrix2c eigen_transfer_pairs(const VerblunskyPair& p2n, const VerblunskyPair& p2nm1,
                              const VerblunskyPair& p2nm2, Complex z) {
  if (std::abs(p2n.rho) <= kSingularTol || std::abs(p2nm1.rho) <= kSingularTol)
    throw std::domain_error("eigen_transfer: singular pair (rho = 0)");
  if (z == Complex(0, 0)) throw std::domain_error("eigen_transfer: z = 0");
  Complex a2 = p2n.alpha, a1 = p2nm1.alpha, a0 = p2nm2.alpha;
  Complex r2 = p2n.rho, r0 = p2nm2.rho;
  Complex zi = 1.0 / z;
  Matrix2c m;
  m << zi + a2 * std::conj(a1) + a1 * std::conj(a0) + a2 * std::conj(a0) * z,
       -std::conj(r0) * a1 - std::conj(r0) * a2 * z,
       -r2 * std::conj(a1) - r2 * std::conj(a0) * z,
       r2 * std::conj(r0) * z;
  return m / (p2n.rho * p2nm1.rho);
}

Matrix2c eigen_transfer(const Couplings& c, const Frequency& freq, Phase phase, long n,
                        Complex z) {
  return eigen_transfer_pairs(verblunsky_gauged(c, freq, phase, 2 * n),
                              verblunsky_gauged(c, freq, phase, 2 * n - 1),
                              verblunsky_gauged(c, freq, phase, 2 * n - 2), z);
}

double conjugation_residual(const Couplings& c, const Frequency& freq, Phase phase,
                            long n, Complex z) {
  Matrix2c a = eigen_transfer(c, freq, phase, n, z);
  Su11 sp = szego_step(verblunsky_gauged(c, freq, phase, 2 * n), z) *
            szego_step(verblunsky_gauged(c, freq, phase, 2 * n - 1), z);
  auto rmat = [&](long k) {
    VerblunskyPair pk = verblunsky_gauged(c, freq, phase, k);
    Matrix2c r;
    r << Complex(1, 0), Complex(0, 0), -std::conj(pk.alpha), pk.rho;
    return r;
  };
  Matrix2c j;
  j << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  Matrix2c rhs = rmat(2 * n).inverse() * j * sp.matrix() * j * rmat(2 * n - 2);
  return std::min((a - rhs).norm(), (a + rhs).norm());
}

Eigen::Matrix2d to_sl2r(const Su11& m) {
  if (m.member_residual() > 1e-9)
    throw std::domain_error("to_sl2r: input is not in SU(1,1)");
  // closed form of M^{-1} m M with M = (1/(1+i)) [[1, -i], [1, i]]
  Eigen::Matrix2d r;
  r << (m.a + m.b).real(), (m.a - m.b).imag(),
       -(m.a + m.b).imag(), (m.a - m.b).real();
  return r;
}

namespace {

// Per-step matrix of the cocycle family at a given phase.
Matrix2c family_step(const CocycleSpec& spec, double theta) {
  switch (spec.family) {
    case CocycleFamily::TwoStep:
      return two_step_map(spec.couplings, spec.z(), theta).matrix();
    case CocycleFamily::DualTwoStep:
      return dual_two_step_map(spec.couplings, spec.z(), theta).matrix();
    case CocycleFamily::EigenTransfer: {
      // A_{n,z} at phase theta: pairs (2n, 2n-1, 2n-2) with the odd pair at
      // angle 2*pi*theta; even pairs are constant.
      const Couplings& c = spec.couplings;
      VerblunskyPair even{Complex(c.lambda1p, 0), Complex(c.lambda1, 0)};
      double s = std::sin(kTwoPi * theta);
      VerblunskyPair odd{Complex(c.lambda2 * s, 0),
                         Complex(std::sqrt(std::max(0.0, 1.0 - c.lambda2 * c.lambda2 * s * s)), 0)};
      return eigen_transfer_pairs(even, odd, even, spec.z());
    }
  }
  throw std::logic_error("family_step: unknown family");
}

// Exact lift displacement of the direction v under an SL(2,R) matrix b.
// Polar-decompose b = R_phi P: the rotation contributes phi to the lift
// exactly, and the symmetric positive factor P moves any direction by less
// than pi/2, so its nearest-branch displacement is unambiguous.  v is
// updated to the normalized image.
double lift_displacement(const Eigen::Matrix2d& b, Eigen::Vector2d& v) {
  double phi = std::atan2(b(1, 0) - b(0, 1), b(0, 0) + b(1, 1));
  double before = std::atan2(v(1), v(0));
  v = b * v;
  v.normalize();
  double after = std::atan2(v(1), v(0));
  double resid = after - before - phi;
  while (resid > kPi) resid -= kTwoPi;
  while (resid < -kPi) resid += kTwoPi;
  return phi + resid;
}

// theta advance; rational frequencies use exact modular arithmetic via an
// index, irrational ones accumulate with frac().
struct PhaseOrbit {
  const Frequency& freq;
  double theta0;
  long idx = 0;
  double current;
  explicit PhaseOrbit(const Frequency& f, double t0) : freq(f), theta0(t0), current(frac(t0)) {}
  void advance() {
    ++idx;
    if (freq.is_rational())
      current = freq.phase_at(theta0, idx);
    else
      current = frac(current + freq.value());
  }
};

}  // namespace

std::pair<Su11, OrbitStats> cocycle_product(const CocycleSpec& spec, Phase theta, long n) {
  if (spec.family == CocycleFamily::EigenTransfer)
    throw std::invalid_argument(
        "cocycle_product: EigenTransfer products are not SU(1,1); use propagate_eigen_solution");
  auto su_step = [&](double th) {
    return spec.family == CocycleFamily::TwoStep
               ? two_step_map(spec.couplings, spec.z(), th)
               : dual_two_step_map(spec.couplings, spec.z(), th);
  };

  OrbitStats stats;
  Su11 acc = Su11::identity();
  double scale_log = 0.0;

  // lift of the reference direction (1,0) in the SL(2,R) picture
  Eigen::Vector2d v(1.0, 0.0);

  long count = std::labs(n);
  for (long k = 0; k < count; ++k) {
    Su11 step;
    if (n >= 0) {
      double th = spec.freq.phase_at(theta.theta, k);
      step = su_step(th);
    } else {
      // A^{-m}(theta) = A^{-1}(theta - m Phi) ... A^{-1}(theta - Phi)
      double th = spec.freq.phase_at(theta.theta, -(k + 1));
      step = su_step(th).inverse();
    }
    stats.angle_winding += lift_displacement(to_sl2r(step), v);

    acc = step * acc;
    double nrm = acc.op_norm();
    acc.a /= nrm;
    acc.b /= nrm;
    scale_log += std::log(nrm);
  }
  stats.steps = count;
  stats.log_norm_sum = scale_log;
  return {acc, stats};
}

namespace {

// log ||A^k(theta)|| sampled at the requested k values (ascending); shared
// renormalized iteration for all families.
std::vector<double> log_norm_samples(const CocycleSpec& spec, double theta0, long n,
                                     const std::vector<long>& ks) {
  std::vector<double> out;
  out.reserve(ks.size());
  Matrix2c acc = Matrix2c::Identity();
  double scale_log = 0.0;
  size_t next = 0;
  PhaseOrbit orbit(spec.freq, theta0);
  for (long k = 1; k <= n && next < ks.size(); ++k) {
    acc = family_step(spec, orbit.current) * acc;
    orbit.advance();
    double nrm = op_norm2c(acc);
    acc /= nrm;
    scale_log += std::log(nrm);
    while (next < ks.size() && ks[next] == k) {
      out.push_back(scale_log);
      ++next;
    }
  }
  return out;
}

double fit_slope(const std::vector<long>& ks, const std::vector<double>& ys) {
  double n = static_cast<double>(ks.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < ks.size(); ++i) {
    double x = static_cast<double>(ks[i]);
    sx += x;
    sy += ys[i];
    sxx += x * x;
    sxy += x * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

LyapunovEstimate lyapunov_exponent(const CocycleSpec& spec, long n, int theta_samples) {
  if (n < 1) throw std::invalid_argument("lyapunov_exponent: n must be positive");
  if (theta_samples < 1) theta_samples = 1;
  std::vector<long> ks{n};
  double sum = 0.0, lo = 0.0, hi = 0.0;
  for (int i = 0; i < theta_samples; ++i) {
    double theta = static_cast<double>(i) / theta_samples;
    double v = log_norm_samples(spec, theta, n, ks)[0] / static_cast<double>(n);
    sum += v;
    if (i == 0) {
      lo = hi = v;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  LyapunovEstimate e;
  e.value = std::max(0.0, sum / theta_samples);
  e.spread = hi - lo;
  return e;
}

double rotation_number(const CocycleSpec& spec, long n, Phase theta) {
  if (n < 1) throw std::invalid_argument("rotation_number: n must be positive");
  if (spec.family == CocycleFamily::EigenTransfer) {
    // constant conjugation onto the two-step cocycle; same rotation number
    CocycleSpec s2 = spec;
    s2.family = CocycleFamily::TwoStep;
    return rotation_number(s2, n, theta);
  }

  auto sl2_step = [&](double th) {
    Su11 s = spec.family == CocycleFamily::TwoStep
                 ? two_step_map(spec.couplings, spec.z(), th)
                 : dual_two_step_map(spec.couplings, spec.z(), th);
    return to_sl2r(s);
  };

  // rational frequencies cycle through q matrices
  std::vector<Eigen::Matrix2d> cache;
  bool cached = spec.freq.is_rational() && spec.freq.q() <= 65536;
  if (cached) {
    long q = spec.freq.q();
    cache.reserve(static_cast<size_t>(q));
    for (long j = 0; j < q; ++j) cache.push_back(sl2_step(spec.freq.phase_at(theta.theta, j)));
  }

  // A burn-in discards the approach to the invariant direction, so locked
  // hyperbolic plateaus come out exact instead of O(1/n).
  const long burn = std::min<long>(1024, n / 8);
  Eigen::Vector2d v(1.0, 0.0);
  double winding = 0.0;
  PhaseOrbit orbit(spec.freq, theta.theta);
  for (long k = 0; k < n + burn; ++k) {
    Eigen::Matrix2d b;
    if (cached)
      b = cache[static_cast<size_t>(k % spec.freq.q())];
    else {
      b = sl2_step(orbit.current);
      orbit.advance();
    }
    double d = lift_displacement(b, v);
    if (k >= burn) winding += d;
  }
  // orientation fixed so that the rotation number increases with zeta and
  // matches the integrated density of states
  return frac(-winding / (kTwoPi * static_cast<double>(n)));
}

HyperbolicityReport hyperbolicity_probe(const CocycleSpec& spec, long n, int theta_samples,
                                        double slope_threshold) {
  if (n < 8) throw std::invalid_argument("hyperbolicity_probe: n too small");
  if (theta_samples < 1) theta_samples = 1;
  const int K = 33;
  std::vector<long> ks;
  for (int i = 0; i < K; ++i)
    ks.push_back(n / 2 + static_cast<long>((static_cast<double>(i) / (K - 1)) * (n - n / 2)));
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  double min_slope = 0.0;
  double min_half = 0.0, min_full = 0.0;
  for (int i = 0; i < theta_samples; ++i) {
    double theta = static_cast<double>(i) / theta_samples;
    std::vector<double> ys = log_norm_samples(spec, theta, n, ks);
    double slope = fit_slope(ks, ys);
    if (i == 0 || slope < min_slope) min_slope = slope;
    if (i == 0 || ys.front() < min_half) min_half = ys.front();
    if (i == 0 || ys.back() < min_full) min_full = ys.back();
  }
  HyperbolicityReport r;
  r.min_slope = min_slope;
  r.uniformly_hyperbolic = min_slope > slope_threshold && min_full > min_half;
  return r;
}

SubcriticalityReport subcriticality_probe(const CocycleSpec& spec, double strip_eps, long n,
                                          double rate_threshold) {
  if (strip_eps <= 0.0) throw std::invalid_argument("subcriticality_probe: strip_eps must be positive");
  if (spec.family == CocycleFamily::EigenTransfer) {
    CocycleSpec s2 = spec;
    s2.family = CocycleFamily::TwoStep;
    return subcriticality_probe(s2, strip_eps, n, rate_threshold);
  }
  const Couplings c = spec.family == CocycleFamily::TwoStep
                          ? spec.couplings
                          : Couplings::of(spec.couplings.lambda2, spec.couplings.lambda1);
  Complex z = spec.z();

  // analyticity check: 1 - lambda2^2 sin^2(2 pi (x + i y)) first vanishes at
  // |y| = acosh(1/lambda2) / (2 pi)
  if (c.lambda2 > 0.0) {
    double y_crit = std::acosh(1.0 / c.lambda2) / kTwoPi;
    if (strip_eps >= y_crit)
      throw std::domain_error("subcriticality_probe: cocycle denominator vanishes at |Im theta| = " +
                              std::to_string(y_crit) + " inside the requested strip");
  }

  const int K = 17;
  std::vector<long> ks;
  for (int i = 0; i < K; ++i)
    ks.push_back(n / 2 + static_cast<long>((static_cast<double>(i) / (K - 1)) * (n - n / 2)));
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  SubcriticalityReport rep;
  rep.strip_offsets = {-0.98 * strip_eps, -0.5 * strip_eps, 0.0, 0.5 * strip_eps, 0.98 * strip_eps};
  const int theta_samples = 8;
  for (double y : rep.strip_offsets) {
    double worst = 0.0;
    for (int i = 0; i < theta_samples; ++i) {
      double theta0 = static_cast<double>(i) / theta_samples;
      Matrix2c acc = Matrix2c::Identity();
      double scale_log = 0.0;
      std::vector<double> ys;
      size_t next = 0;
      double cur = theta0;
      for (long k = 1; k <= n && next < ks.size(); ++k) {
        acc = two_step_map_complex(c, z, Complex(cur, y)) * acc;
        cur = frac(cur + spec.freq.value());
        double nrm = op_norm2c(acc);
        acc /= nrm;
        scale_log += std::log(nrm);
        while (next < ks.size() && ks[next] == k) {
          ys.push_back(scale_log);
          ++next;
        }
      }
      worst = std::max(worst, fit_slope(ks, ys));
    }
    rep.strip_rates.push_back(worst);
    rep.max_rate = std::max(rep.max_rate, worst);
  }
  rep.subcritical = rep.max_rate < rate_threshold;
  return rep;
}

SolutionSamples propagate_eigen_solution(const Couplings& c, const Frequency& freq,
                                         Phase phase, Complex z, const Vector2c& init,
                                         long nlo, long nhi) {
  if (nlo > 0 || nhi < 0 || nlo > nhi)
    throw std::invalid_argument("propagate_eigen_solution: need nlo <= 0 <= nhi");
  SolutionSamples s;
  s.nlo = nlo;
  s.pairs.assign(static_cast<size_t>(nhi - nlo + 1), Vector2c::Zero());
  s.pairs[static_cast<size_t>(-nlo)] = init;
  Vector2c cur = init;
  for (long n = 1; n <= nhi; ++n) {
    cur = eigen_transfer(c, freq, phase, n, z) * cur;
    s.pairs[static_cast<size_t>(n - nlo)] = cur;
  }
  cur = init;
  for (long n = 0; n > nlo; --n) {
    // state(n-1) = A_{n,z}^{-1} state(n)
    Matrix2c a = eigen_transfer(c, freq, phase, n, z);
    cur = a.inverse() * cur;
    s.pairs[static_cast<size_t>(n - 1 - nlo)] = cur;
  }
  return s;
}

}  // namespace uamo
