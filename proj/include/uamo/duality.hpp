#ifndef UAMO_DUALITY_HPP
#define UAMO_DUALITY_HPP

#include <optional>
#include <vector>

#include "uamo/spectrum.hpp"
#include "uamo/types.hpp"

namespace uamo {

/// Finitely supported Fourier data of a spinor pair (plus, minus):
/// coefficients for frequencies m in [mlo, mlo + size - 1].
struct FourierVector {
  long mlo = 0;
  std::vector<Complex> plus;
  std::vector<Complex> minus;

  long mhi() const { return mlo + static_cast<long>(plus.size()) - 1; }
  Complex coeff_plus(long m) const {
    return (m >= mlo && m <= mhi()) ? plus[static_cast<size_t>(m - mlo)] : Complex(0, 0);
  }
  Complex coeff_minus(long m) const {
    return (m >= mlo && m <= mhi()) ? minus[static_cast<size_t>(m - mlo)] : Complex(0, 0);
  }

  /// Exact trigonometric-sum evaluation at x in T.
  Complex eval_plus(double x) const;
  Complex eval_minus(double x) const;

  double coeff_norm() const;
};

/// A Bloch wave phi_n = e^{2 pi i n theta} [phick^+(xi + n Phi), phick^-(xi + n Phi)].
struct BlochWave {
  FourierVector base;
  Phase theta;    // Floquet exponent
  Complex z;      // spectral parameter
  Phase xi;       // phase of the dual operator
};

/// lambda1 <-> lambda2.
Couplings dual_params(const Couplings& c);

/// Hausdorff distance between the band structures of c and dual_params(c)
/// at the same rational frequency.
double isospectrality_check(const Couplings& c, const Frequency& rational,
                            int zeta_resolution = 0, int theta_grid_size = 16);

/// |rot(TwoStep) - rot(DualTwoStep)| at the same z = e^{i zeta}.
double rotation_match_check(const Couplings& c, const Frequency& freq, double zeta,
                            long n);

/// Coefficientwise unitary (1/sqrt2) [[1, -i], [-i, 1]] applied to
/// (phick^+, phick^-).
FourierVector duality_transform(const FourierVector& phi);

struct DualityResidualReport {
  double residual = 0.0;        // max residual of the walk recurrences over the window
  double input_residual = 0.0;  // residual of phi in the dual recurrences
  bool degenerate = false;      // input wave is (numerically) zero
};

/// Feeds the Bloch wave phi (dual Floquet data at phase xi) through the
/// duality transform and measures how well the resulting Fourier
/// coefficients solve the walk eigenvalue recurrences at phase theta, over
/// rows |m| <= window.  Throws std::invalid_argument when phi itself fails
/// the dual recurrences beyond input_tol.
DualityResidualReport duality_residual(const Couplings& c, const Frequency& freq,
                                       Phase theta, Complex z, const FourierVector& phi,
                                       Phase xi, int window, double input_tol = 1e-8);

/// Builds an exact Floquet solution of the dual eigenvalue equation at a
/// rational frequency from the eigenvector of the 2x2 dual monodromy.
/// Returns nothing when the monodromy is hyperbolic at this z (no bounded
/// Bloch wave).  The base FourierVector interpolates through the q phase
/// points on a centered frequency window.
std::optional<BlochWave> make_dual_floquet_wave(const Couplings& c,
                                                const Frequency& rational, Phase xi,
                                                double zeta, double unimodular_tol = 1e-8);

/// det [[u_{2n+1}, u_{2n}], [v_{2n+1}, v_{2n}]]; constant in n for solution
/// samples propagated at the same z.
Complex wronskian(const SolutionSamples& u, const SolutionSamples& v, long n);

/// max_n |W(n) - W(nlo)| over the common index range.
double wronskian_drift(const SolutionSamples& u, const SolutionSamples& v);

}  // namespace uamo

#endif  // UAMO_DUALITY_HPP
