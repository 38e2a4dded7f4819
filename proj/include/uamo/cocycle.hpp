#ifndef UAMO_COCYCLE_HPP
#define UAMO_COCYCLE_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "uamo/model.hpp"
#include "uamo/types.hpp"

namespace uamo {

/// Element of SU(1,1): [[a, b], [conj(b), conj(a)]] with |a|^2 - |b|^2 = 1.
struct Su11 {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};

  Matrix2c matrix() const {
    Matrix2c m;
    m << a, b, std::conj(b), std::conj(a);
    return m;
  }

  double member_residual() const { return std::fabs(std::norm(a) - std::norm(b) - 1.0); }
  double trace() const { return 2.0 * a.real(); }

  Su11 inverse() const { return Su11{std::conj(a), -b}; }

  Su11 operator*(const Su11& o) const {
    return Su11{a * o.a + b * std::conj(o.b), a * o.b + b * std::conj(o.a)};
  }

  double frobenius_sq() const { return 2.0 * (std::norm(a) + std::norm(b)); }

  /// Operator norm; singular values of an SU(1,1) element are s, 1/s.
  double op_norm() const {
    double h = std::norm(a) + std::norm(b);  // (s^2 + s^-2)/2
    return std::sqrt(h + std::sqrt(std::max(0.0, h * h - 1.0)));
  }

  static Su11 identity() { return Su11{}; }

  /// Checked conversion; throws std::domain_error if m is not SU(1,1).
  static Su11 from_matrix(const Matrix2c& m, double tol = 1e-9);
};

enum class CocycleFamily { TwoStep, DualTwoStep, EigenTransfer };

/// A quasi-periodic cocycle (Phi, A_z) with spectral parameter z = e^{i zeta}.
struct CocycleSpec {
  CocycleFamily family = CocycleFamily::TwoStep;
  Couplings couplings;
  Frequency freq;
  double zeta = 0.0;  // z = exp(i zeta), zeta in [0, 2pi)

  Complex z() const { return Complex(std::cos(zeta), std::sin(zeta)); }
};

/// Accumulated data of a renormalized cocycle product.
struct OrbitStats {
  long steps = 0;
  double log_norm_sum = 0.0;   // sum of logs of the per-step rescaling factors
  double angle_winding = 0.0;  // lift displacement of the projective action, radians
};

/// Normalized Szego transfer matrix (z^{-1/2}/rho) [[z, -conj(alpha)], [-alpha z, 1]].
/// Principal branch with arg z in [0, 2pi).  Requires gauged rho > 0.
Su11 szego_step(const VerblunskyPair& gauged, Complex z);

/// Branch-free two-step map S_z^+(theta); equals S_{2n,z} S_{2n-1,z} at
/// theta = theta_0 + n*Phi up to overall sign.  Requires lambda1 > 0 and
/// 1 - lambda2^2 sin^2(2 pi theta) > 0.
Su11 two_step_map(const Couplings& c, Complex z, double theta);

/// Analytic continuation of the two-step map to complex phases; entries are
/// no longer SU(1,1) but the determinant stays 1.
Matrix2c two_step_map_complex(const Couplings& c, Complex z, Complex theta);

/// Reduced two-step cocycle of the transposed (Aubry-dual) operator; equals
/// two_step_map with lambda1 and lambda2 exchanged.
Su11 dual_two_step_map(const Couplings& c, Complex z, double theta);

/// Eigenfunction transfer matrix A_{n,z} built from gauged coefficients:
/// (u_{2n+1}, u_{2n}) = A_{n,z} (u_{2n-1}, u_{2n-2}).  det = 1.
Matrix2c eigen_transfer(const Couplings& c, const Frequency& freq, Phase phase,
                        long n, Complex z);

/// General-coefficient transfer matrix from three consecutive pairs
/// (index 2n, 2n-1, 2n-2).
Matrix2c eigen_transfer_pairs(const VerblunskyPair& p2n, const VerblunskyPair& p2nm1,
                              const VerblunskyPair& p2nm2, Complex z);

/// || A_{n,z} - R_{2n}^{-1} J S^+_{n,z} J R_{2n-2} ||, minimized over the
/// projective sign of S^+.
double conjugation_residual(const Couplings& c, const Frequency& freq, Phase phase,
                            long n, Complex z);

/// Conjugation M^{-1} m M with M = (1/(1+i)) [[1, -i], [1, i]]; lands in
/// SL(2,R).  Throws std::domain_error if m is not SU(1,1).
Eigen::Matrix2d to_sl2r(const Su11& m);

/// n-fold cocycle product with per-step operator-norm rescaling;
/// log ||A^n(theta)|| = stats.log_norm_sum.  n may be negative (inverse
/// iterates).  Only the SU(1,1) families are supported here.
std::pair<Su11, OrbitStats> cocycle_product(const CocycleSpec& spec, Phase theta, long n);

struct LyapunovEstimate {
  double value = 0.0;   // clamped at 0 from below
  double spread = 0.0;  // max - min over the phase samples
};

/// Average of log||A^n(theta)||/n over equidistributed phases.
LyapunovEstimate lyapunov_exponent(const CocycleSpec& spec, long n, int theta_samples);

/// Fibered rotation number: winding of the projective action in the SL(2,R)
/// picture over n steps, as a fraction of a full turn, in [0,1).  The
/// orientation is fixed so that the rotation number increases with zeta and
/// agrees with the integrated density of states.
double rotation_number(const CocycleSpec& spec, long n, Phase theta);

struct HyperbolicityReport {
  bool uniformly_hyperbolic = false;
  double min_slope = 0.0;  // smallest fitted growth rate over the phase samples
};

/// Fits log||A^k|| against k on [n/2, n] over sampled phases; declares
/// uniform hyperbolicity when the smallest slope clears `slope_threshold`
/// and the minimal norm over phases keeps growing.
HyperbolicityReport hyperbolicity_probe(const CocycleSpec& spec, long n,
                                        int theta_samples,
                                        double slope_threshold = 1e-3);

struct SubcriticalityReport {
  bool subcritical = false;
  double max_rate = 0.0;
  std::vector<double> strip_offsets;  // imaginary phase offsets probed
  std::vector<double> strip_rates;    // fitted growth rate at each offset
};

/// Probes the growth of the cocycle at complexified phases theta + i y for
/// y on a grid in (-strip_eps, strip_eps).  Subcritical when every fitted
/// rate stays below `rate_threshold`.  Throws std::domain_error when the
/// cocycle denominator vanishes inside the strip.
SubcriticalityReport subcriticality_probe(const CocycleSpec& spec, double strip_eps,
                                          long n, double rate_threshold = 1e-3);

/// Samples (u_{2n+1}, u_{2n}) of a solution of E u = z u obtained by
/// transfer-matrix propagation from the pair at n = 0.
struct SolutionSamples {
  long nlo = 0;
  std::vector<Vector2c> pairs;  // pairs[i] = (u_{2(nlo+i)+1}, u_{2(nlo+i)})

  const Vector2c& at(long n) const { return pairs[static_cast<size_t>(n - nlo)]; }
};

/// Propagates initial data (u_1, u_0) at n = 0 across n in [nlo, nhi].
SolutionSamples propagate_eigen_solution(const Couplings& c, const Frequency& freq,
                                         Phase phase, Complex z, const Vector2c& init,
                                         long nlo, long nhi);

}  // namespace uamo

#endif  // UAMO_COCYCLE_HPP
