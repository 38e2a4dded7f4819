#ifndef UAMO_TYPES_HPP
#define UAMO_TYPES_HPP

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace uamo {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wrap x to [0, 1).
inline double frac(double x) {
  double f = x - std::floor(x);
  return f < 1.0 ? f : 0.0;
}

/// Wrap an angle to [0, 2*pi).
inline double wrap_angle(double zeta) {
  double w = std::fmod(zeta, kTwoPi);
  return w < 0.0 ? w + kTwoPi : w;
}

/// Distance to the nearest integer, ||x||_T.
inline double torus_norm(double x) {
  double f = frac(x);
  return std::min(f, 1.0 - f);
}

/// Circular distance between two angles in radians.
inline double circle_dist(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

/// Shift and coin strengths (lambda1, lambda2) with their complements
/// lambda' = sqrt(1 - lambda^2).
struct Couplings {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda1p = 0.0;
  double lambda2p = 0.0;

  static Couplings of(double l1, double l2) {
    if (!(l1 >= 0.0 && l1 <= 1.0) || !(l2 >= 0.0 && l2 <= 1.0))
      throw std::domain_error("Couplings: lambda values must lie in [0,1]");
    Couplings c;
    c.lambda1 = l1;
    c.lambda2 = l2;
    c.lambda1p = std::sqrt(std::max(0.0, 1.0 - l1 * l1));
    c.lambda2p = std::sqrt(std::max(0.0, 1.0 - l2 * l2));
    return c;
  }
};

/// Driving frequency, either an exact reduced rational p/q or a real in [0,1).
/// Rational frequencies keep integer arithmetic available so that orbits
/// theta + n*p/q can be evaluated without drift.
class Frequency {
 public:
  static Frequency rational(long p, long q) {
    if (q <= 0) throw std::domain_error("Frequency: q must be positive");
    p %= q;
    if (p < 0) p += q;
    long g = std::gcd(p, q);
    Frequency f;
    f.rational_ = true;
    f.p_ = p / g;
    f.q_ = q / g;
    f.value_ = static_cast<double>(f.p_) / static_cast<double>(f.q_);
    return f;
  }

  static Frequency real(double x) {
    Frequency f;
    f.rational_ = false;
    f.p_ = 0;
    f.q_ = 0;
    f.value_ = frac(x);
    return f;
  }

  bool is_rational() const { return rational_; }
  long p() const { return p_; }
  long q() const { return q_; }
  double value() const { return value_; }

  /// frac(theta + n * Phi); exact modular arithmetic in the rational case.
  double phase_at(double theta, long n) const {
    if (rational_) {
      long r = (n % q_) * (p_ % q_) % q_;
      if (r < 0) r += q_;
      return frac(theta + static_cast<double>(r) / static_cast<double>(q_));
    }
    return frac(theta + static_cast<double>(n) * value_);
  }

 private:
  bool rational_ = false;
  long p_ = 0;
  long q_ = 1;
  double value_ = 0.0;
};

/// A point of T = R/Z.
struct Phase {
  double theta = 0.0;
  Phase() = default;
  explicit Phase(double t) : theta(frac(t)) {}
};

}  // namespace uamo

#endif  // UAMO_TYPES_HPP
