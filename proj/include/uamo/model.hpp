#ifndef UAMO_MODEL_HPP
#define UAMO_MODEL_HPP

#include <Eigen/Dense>
#include <vector>

#include "uamo/types.hpp"

namespace uamo {

using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

/// One Verblunsky pair (alpha, rho) with |alpha|^2 + |rho|^2 = 1.
/// After gauging, rho is real and nonnegative.
struct VerblunskyPair {
  Complex alpha{0.0, 0.0};
  Complex rho{1.0, 0.0};

  double sphere_residual() const {
    return std::fabs(std::norm(alpha) + std::norm(rho) - 1.0);
  }
};

/// Finitely supported state on l^2(Z) (x) C^2.  amps[i](0) is the plus
/// component at site lo+i, amps[i](1) the minus component.
struct StateWindow {
  long lo = 0;
  long hi = -1;
  std::vector<Vector2c> amps;

  StateWindow() = default;
  StateWindow(long lo_, long hi_)
      : lo(lo_), hi(hi_), amps(static_cast<size_t>(hi_ - lo_ + 1), Vector2c::Zero()) {
    if (hi_ < lo_) throw std::domain_error("StateWindow: empty window");
  }

  bool contains(long n) const { return n >= lo && n <= hi; }
  Complex plus(long n) const { return contains(n) ? amps[static_cast<size_t>(n - lo)](0) : Complex(0, 0); }
  Complex minus(long n) const { return contains(n) ? amps[static_cast<size_t>(n - lo)](1) : Complex(0, 0); }
  Complex& plus_ref(long n) { return amps[static_cast<size_t>(n - lo)](0); }
  Complex& minus_ref(long n) { return amps[static_cast<size_t>(n - lo)](1); }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a(0)) + std::norm(a(1));
    return std::sqrt(s);
  }
};

/// Verblunsky coefficients on a contiguous index range [lo, hi], lo even.
struct CmvWindow {
  long lo = 0;
  long hi = -1;
  std::vector<VerblunskyPair> pairs;

  CmvWindow() = default;
  CmvWindow(long lo_, long hi_)
      : lo(lo_), hi(hi_), pairs(static_cast<size_t>(hi_ - lo_ + 1)) {
    if (lo_ % 2 != 0) throw std::domain_error("CmvWindow: lo must be even");
    if (hi_ < lo_) throw std::domain_error("CmvWindow: empty window");
  }

  bool contains(long k) const { return k >= lo && k <= hi; }
  const VerblunskyPair& pair(long k) const { return pairs[static_cast<size_t>(k - lo)]; }
  VerblunskyPair& pair(long k) { return pairs[static_cast<size_t>(k - lo)]; }
};

/// Local coin: a modified counterclockwise rotation through `angle` (radians),
/// [[l cos a + i l', -l sin a], [l sin a, l cos a - i l']].  Unitary with
/// determinant one for lambda in [0,1].
Matrix2c coin_matrix(double lambda, double angle);

/// Conditional shift S_lambda: delta_n^{\pm} -> lambda delta_{n\pm1}^{\pm}
/// \pm lambda' delta_n^{\mp}.  The window grows by one site on each side;
/// the result is exact for finitely supported input.
StateWindow shift_apply(double lambda1, const StateWindow& state);

/// One step of the walk W = S_{lambda1} Q_{lambda2} with coin angles
/// 2*pi*(n*Phi + theta) at site n.
StateWindow walk_apply(const Couplings& c, const Frequency& freq, Phase phase,
                       const StateWindow& state);

/// Verblunsky pair at integer index k.  Odd k = 2n-1 carries the coin data
/// at angle 2*pi*(theta + n*Phi); even k = 2n is the constant shift pair
/// (lambda1', lambda1).
VerblunskyPair verblunsky_raw(const Couplings& c, const Frequency& freq,
                              Phase phase, long k);

/// Same alphas, but odd rho replaced by its gauge-normalized modulus
/// (1 - lambda2^2 sin^2)^{1/2} >= 0.
VerblunskyPair verblunsky_gauged(const Couplings& c, const Frequency& freq,
                                 Phase phase, long k);

/// Result of applying the five-diagonal matrix E = L M on a coefficient
/// window.  contaminated[i] marks output entries whose row referenced a
/// Verblunsky pair outside the window or an input coefficient outside v.
struct GecmvResult {
  std::vector<Complex> out;
  std::vector<bool> contaminated;
};

/// Apply E = L M.  v[i] is the coefficient at site window.lo + i and must
/// have the same length as the window.
GecmvResult gecmv_apply(const CmvWindow& window, const std::vector<Complex>& v);

/// Identification between l^2(Z) (x) C^2 and l^2(Z).
/// PlusEven:  delta_n^+ <-> delta_{2n},   delta_n^- <-> delta_{2n+1}
/// MinusEven: delta_n^- <-> delta_{2n},   delta_n^+ <-> delta_{2n-1}
enum class Interleaving { PlusEven, MinusEven };

/// The interleaving under which the walk equals the GECMV matrix with raw
/// coefficients, as detected by gecmv_vs_walk_check and frozen here.
inline constexpr Interleaving kWalkInterleaving = Interleaving::MinusEven;

struct WalkMatchResult {
  double deviation = 0.0;          // best interior deviation
  Interleaving interleaving = Interleaving::MinusEven;
  double deviation_other = 0.0;    // deviation of the rejected candidate
};

/// Builds one walk step and the GECMV action with raw coefficients on a
/// window of `window_size` sites, tries both interleavings and returns the
/// smaller interior deviation.  Throws std::runtime_error if neither
/// matches below 1e-8.
WalkMatchResult gecmv_vs_walk_check(const Couplings& c, const Frequency& freq,
                                    Phase phase, int window_size);

}  // namespace uamo

#endif  // UAMO_MODEL_HPP
