#include "uamo/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace uamo {

Matrix2c coin_matrix(double lambda, double angle) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::domain_error("coin_matrix: lambda must lie in [0,1]");
  double lp = std::sqrt(std::max(0.0, 1.0 - lambda * lambda));
  double c = std::cos(angle), s = std::sin(angle);
  Matrix2c q;
  q << Complex(lambda * c, lp), Complex(-lambda * s, 0.0),
       Complex(lambda * s, 0.0), Complex(lambda * c, -lp);
  return q;
}

StateWindow shift_apply(double lambda1, const StateWindow& state) {
  if (!(lambda1 >= 0.0 && lambda1 <= 1.0))
    throw std::domain_error("shift_apply: lambda must lie in [0,1]");
  double lp = std::sqrt(std::max(0.0, 1.0 - lambda1 * lambda1));
  StateWindow out(state.lo - 1, state.hi + 1);
  for (long n = out.lo; n <= out.hi; ++n) {
    out.plus_ref(n) = lambda1 * state.plus(n - 1) - lp * state.minus(n);
    out.minus_ref(n) = lambda1 * state.minus(n + 1) + lp * state.plus(n);
  }
  return out;
}

StateWindow walk_apply(const Couplings& c, const Frequency& freq, Phase phase,
                       const StateWindow& state) {
  StateWindow coined(state.lo, state.hi);
  for (long n = state.lo; n <= state.hi; ++n) {
    double angle = kTwoPi * freq.phase_at(phase.theta, n);
    Matrix2c q = coin_matrix(c.lambda2, angle);
    coined.amps[static_cast<size_t>(n - state.lo)] =
        q * state.amps[static_cast<size_t>(n - state.lo)];
  }
  return shift_apply(c.lambda1, coined);
}

VerblunskyPair verblunsky_raw(const Couplings& c, const Frequency& freq, Phase phase,
                              long k) {
  if (k % 2 == 0) return VerblunskyPair{Complex(c.lambda1p, 0.0), Complex(c.lambda1, 0.0)};
  long n = (k + 1) / 2;  // k = 2n - 1
  double x = kTwoPi * freq.phase_at(phase.theta, n);
  return VerblunskyPair{Complex(c.lambda2 * std::sin(x), 0.0),
                        Complex(c.lambda2 * std::cos(x), -c.lambda2p)};
}

VerblunskyPair verblunsky_gauged(const Couplings& c, const Frequency& freq, Phase phase,
                                 long k) {
  VerblunskyPair v = verblunsky_raw(c, freq, phase, k);
  if (k % 2 != 0)
    v.rho = Complex(std::sqrt(std::max(0.0, 1.0 - std::norm(v.alpha))), 0.0);
  return v;
}

GecmvResult gecmv_apply(const CmvWindow& window, const std::vector<Complex>& v) {
  if (v.size() != window.pairs.size())
    throw std::invalid_argument("gecmv_apply: v must span the window");
  const long lo = window.lo, hi = window.hi;
  GecmvResult r;
  r.out.assign(v.size(), Complex(0, 0));
  r.contaminated.assign(v.size(), false);

  auto vv = [&](long k) -> Complex {
    return (k >= lo && k <= hi) ? v[static_cast<size_t>(k - lo)] : Complex(0, 0);
  };

  for (long j = lo; j <= hi; ++j) {
    // row 2m references pairs {2m-1, 2m, 2m+1} and columns [2m-1, 2m+2];
    // row 2m+1 references the same pairs and the same columns
    long m = (j % 2 == 0) ? j / 2 : (j - 1) / 2;
    bool have_pairs = window.contains(2 * m - 1) && window.contains(2 * m + 1);
    bool contaminated = !have_pairs || (2 * m - 1 < lo) || (2 * m + 2 > hi);
    Complex acc(0, 0);
    if (have_pairs) {
      const VerblunskyPair& pe = window.pair(2 * m);      // even pair
      const VerblunskyPair& pm = window.pair(2 * m - 1);  // odd pair below
      const VerblunskyPair& pp = window.pair(2 * m + 1);  // odd pair above
      if (j % 2 == 0) {
        acc += std::conj(pe.alpha) * std::conj(pm.rho) * vv(2 * m - 1);
        acc += -std::conj(pe.alpha) * pm.alpha * vv(2 * m);
        acc += std::conj(pp.alpha) * pe.rho * vv(2 * m + 1);
        acc += pp.rho * pe.rho * vv(2 * m + 2);
      } else {
        acc += std::conj(pe.rho) * std::conj(pm.rho) * vv(2 * m - 1);
        acc += -std::conj(pe.rho) * pm.alpha * vv(2 * m);
        acc += -std::conj(pp.alpha) * pe.alpha * vv(2 * m + 1);
        acc += -pp.rho * pe.alpha * vv(2 * m + 2);
      }
    }
    r.out[static_cast<size_t>(j - lo)] = acc;
    r.contaminated[static_cast<size_t>(j - lo)] = contaminated;
  }
  return r;
}

namespace {

// Map a spinor state to the CMV line under the given interleaving.
// PlusEven:  v_{2n} = psi_n^+, v_{2n+1} = psi_n^-
// MinusEven: v_{2n} = psi_n^-, v_{2n-1} = psi_n^+
void scatter_state(const StateWindow& psi, Interleaving il, const CmvWindow& w,
                   std::vector<Complex>& v) {
  v.assign(w.pairs.size(), Complex(0, 0));
  auto put = [&](long k, Complex val) {
    if (k >= w.lo && k <= w.hi) v[static_cast<size_t>(k - w.lo)] = val;
  };
  for (long n = psi.lo; n <= psi.hi; ++n) {
    if (il == Interleaving::PlusEven) {
      put(2 * n, psi.plus(n));
      put(2 * n + 1, psi.minus(n));
    } else {
      put(2 * n, psi.minus(n));
      put(2 * n - 1, psi.plus(n));
    }
  }
}

Complex gather_component(const std::vector<Complex>& v, const CmvWindow& w, long k) {
  return (k >= w.lo && k <= w.hi) ? v[static_cast<size_t>(k - w.lo)] : Complex(0, 0);
}

}  // namespace

WalkMatchResult gecmv_vs_walk_check(const Couplings& c, const Frequency& freq,
                                    Phase phase, int window_size) {
  if (window_size < 8)
    throw std::invalid_argument("gecmv_vs_walk_check: window_size must be >= 8");
  const long W = window_size / 2;
  CmvWindow cmv(-2 * W - 2, 2 * W + 2);
  for (long k = cmv.lo; k <= cmv.hi; ++k)
    cmv.pair(k) = verblunsky_raw(c, freq, phase, k);

  std::mt19937 rng(0xC0FFEE);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  double dev[2] = {0.0, 0.0};
  for (int trial = 0; trial < 4; ++trial) {
    StateWindow psi(-W + 2, W - 2);
    for (auto& a : psi.amps) a = Vector2c(Complex(uni(rng), uni(rng)), Complex(uni(rng), uni(rng)));
    StateWindow wpsi = walk_apply(c, freq, phase, psi);

    for (int which = 0; which < 2; ++which) {
      Interleaving il = which == 0 ? Interleaving::PlusEven : Interleaving::MinusEven;
      std::vector<Complex> v;
      scatter_state(psi, il, cmv, v);
      GecmvResult ev = gecmv_apply(cmv, v);
      // compare on interior walk sites
      for (long n = psi.lo - 1; n <= psi.hi + 1; ++n) {
        long kp = il == Interleaving::PlusEven ? 2 * n : 2 * n - 1;
        long km = il == Interleaving::PlusEven ? 2 * n + 1 : 2 * n;
        if (kp - 2 < cmv.lo || km + 2 > cmv.hi) continue;
        if (ev.contaminated[static_cast<size_t>(kp - cmv.lo)] ||
            ev.contaminated[static_cast<size_t>(km - cmv.lo)])
          continue;
        dev[which] = std::max(dev[which],
                              std::abs(gather_component(ev.out, cmv, kp) - wpsi.plus(n)));
        dev[which] = std::max(dev[which],
                              std::abs(gather_component(ev.out, cmv, km) - wpsi.minus(n)));
      }
    }
  }

  WalkMatchResult r;
  if (dev[0] <= dev[1]) {
    r.deviation = dev[0];
    r.interleaving = Interleaving::PlusEven;
    r.deviation_other = dev[1];
  } else {
    r.deviation = dev[1];
    r.interleaving = Interleaving::MinusEven;
    r.deviation_other = dev[0];
  }
  if (r.deviation > 1e-8)
    throw std::runtime_error("gecmv_vs_walk_check: no interleaving matches (structural mismatch)");
  return r;
}

}  // namespace uamo
