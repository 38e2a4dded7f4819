#ifndef UAMO_ARITHMETIC_HPP
#define UAMO_ARITHMETIC_HPP

#include <utility>
#include <vector>

#include "uamo/types.hpp"

namespace uamo {

struct ContinuedFraction {
  double x = 0.0;
  std::vector<long> partial_quotients;              // a_1, a_2, ...
  std::vector<std::pair<long, long>> convergents;   // (p_k, q_k), k = 1, 2, ...
  bool rational_flagged = false;                    // expansion terminated early
};

/// Standard continued fraction expansion of x in (0,1); convergents are
/// reduced and satisfy |x - p/q| < 1/q^2.  depth <= 40.
ContinuedFraction continued_fraction(double x, int depth);

struct DiophantineParams {
  double kappa = 0.1;
  double tau = 1.01;
  long horizon = 10000;  // finite check horizon N
};

struct DiophantineReport {
  bool pass = false;
  long worst_n = 0;
  double worst_ratio = 0.0;  // min over n of ||n phi|| * n^{tau+2} / kappa
};

/// Checks ||n phi||_T >= kappa / n^{tau+2} for 0 < n <= N.  A finite scan:
/// "pass" means no violation up to the horizon, never a proof.
DiophantineReport diophantine_check(double phi, const DiophantineParams& params);

struct NonresonanceReport {
  bool pass = false;
  std::vector<long> violations;  // n with |sin 2 pi (theta + n phi)| < exp(-|n|^{1/(2 tau)})
};

/// Scans 0 < |n| <= N for near-resonances of theta along the phi-orbit;
/// passes when no violation occurs beyond |n| > n_floor.
NonresonanceReport nonresonance_check(double theta, double phi, double tau, long N,
                                      long n_floor = 2);

/// log[lambda2 (1 + lambda1') / (lambda1 (1 + lambda2'))]; the on-spectrum
/// Lyapunov value in the supercritical regime.  Returns +inf for lambda1 = 0
/// and -inf for lambda2 = 0.
double lyapunov_floor(const Couplings& c);

enum class Regime { Subcritical, Critical, Supercritical };

/// lambda1 > lambda2 subcritical, equal critical, else supercritical
/// (tolerance 1e-12 on the difference).
Regime phase_classify(const Couplings& c);

const char* regime_name(Regime r);

}  // namespace uamo

#endif  // UAMO_ARITHMETIC_HPP
