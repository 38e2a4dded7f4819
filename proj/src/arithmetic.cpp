#include "uamo/arithmetic.hpp"

#include <cmath>
#include <limits>

namespace uamo {

ContinuedFraction continued_fraction(double x, int depth) {
  if (!(x > 0.0 && x < 1.0))
    throw std::domain_error("continued_fraction: x must lie in (0,1)");
  if (depth < 1 || depth > 40)
    throw std::invalid_argument("continued_fraction: depth must be in [1,40]");
  ContinuedFraction cf;
  cf.x = x;
  long pm1 = 1, qm1 = 0;  // p_{k-1}, q_{k-1}
  long pm0 = 0, qm0 = 1;  // p_k, q_k at k = 0
  double r = x;
  for (int k = 1; k <= depth; ++k) {
    double inv = 1.0 / r;
    double fl = std::floor(inv);
    if (fl > 9.0e14) {  // remainder is zero to machine precision
      cf.rational_flagged = true;
      break;
    }
    long a = static_cast<long>(fl);
    r = inv - fl;
    long p = a * pm0 + pm1;
    long qd = a * qm0 + qm1;
    pm1 = pm0;
    qm1 = qm0;
    pm0 = p;
    qm0 = qd;
    cf.partial_quotients.push_back(a);
    cf.convergents.emplace_back(p, qd);
    if (r < 1e-15) {
      cf.rational_flagged = true;
      break;
    }
  }
  return cf;
}

DiophantineReport diophantine_check(double phi, const DiophantineParams& params) {
  if (params.kappa <= 0.0) throw std::domain_error("diophantine_check: kappa must be positive");
  DiophantineReport rep;
  rep.worst_ratio = std::numeric_limits<double>::infinity();
  for (long n = 1; n <= params.horizon; ++n) {
    double dist = torus_norm(static_cast<double>(n) * phi);
    double ratio = dist * std::pow(static_cast<double>(n), params.tau + 2.0) / params.kappa;
    if (ratio < rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_n = n;
    }
  }
  rep.pass = rep.worst_ratio >= 1.0;
  return rep;
}

NonresonanceReport nonresonance_check(double theta, double phi, double tau, long N,
                                      long n_floor) {
  NonresonanceReport rep;
  for (long n = -N; n <= N; ++n) {
    if (n == 0) continue;
    double s = std::fabs(std::sin(kTwoPi * frac(theta + static_cast<double>(n) * phi)));
    double bound = std::exp(-std::pow(std::fabs(static_cast<double>(n)), 1.0 / (2.0 * tau)));
    if (s < bound) rep.violations.push_back(n);
  }
  rep.pass = true;
  for (long n : rep.violations)
    if (std::labs(n) > n_floor) rep.pass = false;
  return rep;
}

double lyapunov_floor(const Couplings& c) {
  if (c.lambda1 == 0.0) return std::numeric_limits<double>::infinity();
  if (c.lambda2 == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(c.lambda2 * (1.0 + c.lambda1p) / (c.lambda1 * (1.0 + c.lambda2p)));
}

Regime phase_classify(const Couplings& c) {
  if (std::fabs(c.lambda1 - c.lambda2) <= 1e-12) return Regime::Critical;
  return c.lambda1 > c.lambda2 ? Regime::Subcritical : Regime::Supercritical;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Subcritical: return "subcritical";
    case Regime::Critical: return "critical";
    case Regime::Supercritical: return "supercritical";
  }
  return "unknown";
}

}  // namespace uamo
