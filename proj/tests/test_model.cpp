#include <random>

#include "doctest.h"
#include "uamo/model.hpp"

using namespace uamo;

namespace {

const double kGoldenMean = 0.5 * (std::sqrt(5.0) - 1.0);

StateWindow basis_state(long n, int comp, long lo, long hi) {
  StateWindow s(lo, hi);
  if (comp == 0)
    s.plus_ref(n) = 1.0;
  else
    s.minus_ref(n) = 1.0;
  return s;
}

// dense one-step walk matrix on [lo,hi] assembled from explicit coin and
// shift blocks; the independent oracle for walk_apply
Eigen::MatrixXcd dense_walk_matrix(const Couplings& c, const Frequency& f, Phase ph,
                                   long lo, long hi) {
  long nsites = hi - lo + 1;
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(2 * nsites, 2 * nsites);
  for (long n = lo; n <= hi; ++n) {
    Matrix2c coin = coin_matrix(c.lambda2, kTwoPi * f.phase_at(ph.theta, n));
    long i = 2 * (n - lo);
    q.block<2, 2>(i, i) = coin;
  }
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2 * nsites, 2 * nsites);
  for (long n = lo; n <= hi; ++n) {
    long i = 2 * (n - lo);
    if (n + 1 <= hi) s(2 * (n + 1 - lo), i) += c.lambda1;      // + moves right
    s(i + 1, i) += c.lambda1p;                                 // + flips down
    if (n - 1 >= lo) s(2 * (n - 1 - lo) + 1, i + 1) += c.lambda1;  // - moves left
    s(i, i + 1) += -c.lambda1p;                                // - flips up with sign
  }
  return s * q;
}

}  // namespace

TEST_CASE("coin_matrix closed forms") {
  Matrix2c q = coin_matrix(1.0, 0.0);
  CHECK((q - Matrix2c::Identity()).norm() == doctest::Approx(0.0).epsilon(1e-15));

  q = coin_matrix(0.0, 1.234);
  CHECK(std::abs(q(0, 0) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(q(1, 1) - Complex(0, -1)) < 1e-15);
  CHECK(std::abs(q(0, 1)) < 1e-15);
  CHECK(std::abs(q(1, 0)) < 1e-15);

  q = coin_matrix(0.6, kPi / 2);
  CHECK(std::abs(q(0, 0) - Complex(0, 0.8)) < 1e-15);
  CHECK(std::abs(q(0, 1) - Complex(-0.6, 0)) < 1e-15);
  CHECK(std::abs(q(1, 0) - Complex(0.6, 0)) < 1e-15);
  CHECK(std::abs(q(1, 1) - Complex(0, -0.8)) < 1e-15);
}

TEST_CASE("coin_matrix is unitary with determinant one") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    double l = uni(rng), a = kTwoPi * uni(rng);
    Matrix2c q = coin_matrix(l, a);
    CHECK((q * q.adjoint() - Matrix2c::Identity()).norm() < 1e-14);
    CHECK(std::abs(q.determinant() - Complex(1, 0)) < 1e-14);
  }
  CHECK_THROWS_AS(coin_matrix(1.2, 0.0), std::domain_error);
  CHECK_THROWS_AS(coin_matrix(-0.1, 0.0), std::domain_error);
}

TEST_CASE("shift_apply on basis states") {
  StateWindow s = basis_state(0, 0, -2, 2);

  StateWindow a = shift_apply(1.0, s);
  CHECK(std::abs(a.plus(1) - Complex(1, 0)) < 1e-15);
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-14));

  StateWindow b = shift_apply(0.0, s);
  CHECK(std::abs(b.minus(0) - Complex(1, 0)) < 1e-15);

  StateWindow m = basis_state(0, 1, -2, 2);
  StateWindow c = shift_apply(0.6, m);
  CHECK(std::abs(c.minus(-1) - Complex(0.6, 0)) < 1e-15);
  CHECK(std::abs(c.plus(0) - Complex(-0.8, 0)) < 1e-15);
}

TEST_CASE("shift_apply preserves the norm") {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (double lambda : {0.0, 0.3, 0.77, 1.0}) {
    StateWindow s(-10, 10);
    for (auto& a : s.amps) a = Vector2c(Complex(uni(rng), uni(rng)), Complex(uni(rng), uni(rng)));
    StateWindow out = shift_apply(lambda, s);
    CHECK(out.norm() == doctest::Approx(s.norm()).epsilon(1e-13));
  }
}

TEST_CASE("walk_apply trivial cases") {
  Couplings c = Couplings::of(1.0, 1.0);
  Frequency f = Frequency::rational(0, 1);
  StateWindow s = basis_state(0, 0, -2, 2);
  StateWindow out = walk_apply(c, f, Phase(0.0), s);
  CHECK(std::abs(out.plus(1) - Complex(1, 0)) < 1e-14);

  // lambda2 = 0: the walk acts as S_{lambda1} diag(i, -i)
  Couplings c2 = Couplings::of(0.6, 0.0);
  StateWindow out2 = walk_apply(c2, f, Phase(0.3), s);
  StateWindow coined = basis_state(0, 0, -2, 2);
  coined.plus_ref(0) = Complex(0, 1);
  StateWindow expect = shift_apply(0.6, coined);
  for (long n = out2.lo; n <= out2.hi; ++n) {
    CHECK(std::abs(out2.plus(n) - expect.plus(n)) < 1e-14);
    CHECK(std::abs(out2.minus(n) - expect.minus(n)) < 1e-14);
  }
}

TEST_CASE("walk_apply is unitary and matches the dense block oracle") {
  Couplings c = Couplings::of(0.6, 0.8);
  Frequency f = Frequency::real(kGoldenMean);
  Phase ph(0.1);

  std::mt19937 rng(13);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  StateWindow s(-32, 31);
  for (auto& a : s.amps) a = Vector2c(Complex(uni(rng), uni(rng)), Complex(uni(rng), uni(rng)));
  double nrm = s.norm();
  for (auto& a : s.amps) a /= nrm;

  StateWindow out = walk_apply(c, f, ph, s);
  CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));

  // oracle: dense matrix-vector product on a window padded by one site
  long lo = s.lo - 1, hi = s.hi + 1;
  Eigen::MatrixXcd w = dense_walk_matrix(c, f, ph, lo, hi);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * (hi - lo + 1));
  for (long n = s.lo; n <= s.hi; ++n) {
    v(2 * (n - lo)) = s.plus(n);
    v(2 * (n - lo) + 1) = s.minus(n);
  }
  Eigen::VectorXcd wv = w * v;
  for (long n = out.lo; n <= out.hi; ++n) {
    CHECK(std::abs(out.plus(n) - wv(2 * (n - lo))) < 1e-13);
    CHECK(std::abs(out.minus(n) - wv(2 * (n - lo) + 1)) < 1e-13);
  }
}

TEST_CASE("verblunsky coefficients") {
  Couplings c = Couplings::of(0.6, 0.8);
  Frequency f = Frequency::real(kGoldenMean);

  // theta = 0, n = 0 <-> odd index -1: alpha = 0, rho = lambda2 - i lambda2'
  VerblunskyPair v = verblunsky_raw(c, f, Phase(0.0), -1);
  CHECK(std::abs(v.alpha) < 1e-15);
  CHECK(std::abs(v.rho - Complex(0.8, -0.6)) < 1e-15);

  // even index independent of n and theta
  for (long k : {-4L, 0L, 8L}) {
    VerblunskyPair e = verblunsky_raw(c, f, Phase(0.37), k);
    CHECK(std::abs(e.alpha - Complex(0.8, 0)) < 1e-15);
    CHECK(std::abs(e.rho - Complex(0.6, 0)) < 1e-15);
  }

  // sphere identity and gauge preserve moduli
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    Couplings cc = Couplings::of(uni(rng), uni(rng));
    Phase ph(uni(rng));
    long k = static_cast<long>(rng() % 41) - 20;
    VerblunskyPair raw = verblunsky_raw(cc, f, ph, k);
    VerblunskyPair g = verblunsky_gauged(cc, f, ph, k);
    CHECK(raw.sphere_residual() < 1e-14);
    CHECK(g.sphere_residual() < 1e-14);
    CHECK(std::abs(std::abs(raw.alpha) - std::abs(g.alpha)) < 1e-14);
    CHECK(std::abs(std::abs(raw.rho) - std::abs(g.rho)) < 1e-14);
    CHECK(g.rho.imag() == 0.0);
    CHECK(g.rho.real() >= 0.0);
  }

  // gauged odd rho at theta = 0, n = 0 is 1; degenerate pair at sin = 1
  VerblunskyPair g0 = verblunsky_gauged(c, f, Phase(0.0), -1);
  CHECK(std::abs(g0.rho - Complex(1, 0)) < 1e-15);
  Couplings cone = Couplings::of(0.6, 1.0);
  VerblunskyPair gd = verblunsky_gauged(cone, Frequency::rational(0, 1), Phase(0.25), -1);
  CHECK(std::abs(gd.rho) < 1e-7);
  CHECK(std::abs(gd.alpha - Complex(1, 0)) < 1e-12);
}

namespace {

// dense E = L M from explicit 2x2 blocks; oracle for gecmv_apply
Eigen::MatrixXcd dense_gecmv(const CmvWindow& w) {
  long n = w.hi - w.lo + 1;
  Eigen::MatrixXcd lf = Eigen::MatrixXcd::Zero(n, n), mf = Eigen::MatrixXcd::Zero(n, n);
  for (long j = w.lo; j < w.hi; ++j) {
    const VerblunskyPair& p = w.pair(j);
    Eigen::MatrixXcd& tgt = (j % 2 == 0) ? lf : mf;
    long i = j - w.lo;
    tgt(i, i) += std::conj(p.alpha);
    tgt(i, i + 1) += p.rho;
    tgt(i + 1, i) += std::conj(p.rho);
    tgt(i + 1, i + 1) += -p.alpha;
  }
  return lf * mf;
}

}  // namespace

TEST_CASE("gecmv_apply: free case is the two-step shift") {
  CmvWindow w(-8, 9);  // all alpha = 0, rho = 1 by default
  for (long k = w.lo + 2; k <= w.hi - 2; k += 1) {
    std::vector<Complex> v(w.pairs.size(), Complex(0, 0));
    v[static_cast<size_t>(k - w.lo)] = 1.0;
    GecmvResult r = gecmv_apply(w, v);
    long target = (k % 2 == 0) ? k - 2 : k + 2;
    if (target < w.lo || target > w.hi) continue;
    if (r.contaminated[static_cast<size_t>(target - w.lo)]) continue;
    CHECK(std::abs(r.out[static_cast<size_t>(target - w.lo)] - Complex(1, 0)) < 1e-15);
  }
}

TEST_CASE("gecmv_apply: single nonzero alpha entries") {
  CmvWindow w(-6, 7);
  w.pair(0) = VerblunskyPair{Complex(1, 0), Complex(0, 0)};
  // <delta_0, E delta_0> = -conj(alpha_0) alpha_{-1} = 0
  std::vector<Complex> v(w.pairs.size(), Complex(0, 0));
  v[static_cast<size_t>(0 - w.lo)] = 1.0;
  GecmvResult r = gecmv_apply(w, v);
  CHECK(std::abs(r.out[static_cast<size_t>(0 - w.lo)]) < 1e-15);
  // <delta_0, E delta_{-1}> = conj(alpha_0 rho_{-1}) = 1
  std::fill(v.begin(), v.end(), Complex(0, 0));
  v[static_cast<size_t>(-1 - w.lo)] = 1.0;
  r = gecmv_apply(w, v);
  CHECK(std::abs(r.out[static_cast<size_t>(0 - w.lo)] - Complex(1, 0)) < 1e-15);
}

TEST_CASE("gecmv_apply matches the dense block product and is unitary inside") {
  std::mt19937 rng(15);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  CmvWindow w(-8, 9);
  for (auto& p : w.pairs) {
    Complex a(0.6 * uni(rng), 0.6 * uni(rng));
    double r2 = 1.0 - std::norm(a);
    Complex rho = std::sqrt(r2) * std::exp(Complex(0, uni(rng)));
    p = VerblunskyPair{a, rho};
    CHECK(p.sphere_residual() < 1e-14);
  }
  Eigen::MatrixXcd dense = dense_gecmv(w);

  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Complex> v(w.pairs.size());
    for (auto& x : v) x = Complex(uni(rng), uni(rng));
    GecmvResult r = gecmv_apply(w, v);
    Eigen::VectorXcd vv(w.pairs.size());
    for (size_t i = 0; i < v.size(); ++i) vv(static_cast<long>(i)) = v[i];
    Eigen::VectorXcd dv = dense * vv;
    for (long j = w.lo; j <= w.hi; ++j) {
      if (r.contaminated[static_cast<size_t>(j - w.lo)]) continue;
      CHECK(std::abs(r.out[static_cast<size_t>(j - w.lo)] - dv(j - w.lo)) < 1e-14);
    }
  }

  // interior columns of the dense product are orthonormal
  long n = w.hi - w.lo + 1;
  Eigen::MatrixXcd gram = dense.adjoint() * dense;
  for (long i = 3; i < n - 3; ++i)
    for (long j = 3; j < n - 3; ++j)
      CHECK(std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) < 1e-13);
}

TEST_CASE("gecmv_vs_walk_check identifies the interleaving") {
  Frequency golden = Frequency::real(kGoldenMean);

  WalkMatchResult r = gecmv_vs_walk_check(Couplings::of(0.6, 0.0), golden, Phase(0.2), 24);
  CHECK(r.deviation < 1e-12);
  CHECK(r.interleaving == Interleaving::MinusEven);

  r = gecmv_vs_walk_check(Couplings::of(1.0, 1.0), Frequency::rational(0, 1), Phase(0.0), 24);
  CHECK(r.deviation < 1e-12);

  r = gecmv_vs_walk_check(Couplings::of(0.6, 0.8), golden, Phase(0.1), 64);
  CHECK(r.deviation < 1e-10);
  CHECK(r.interleaving == kWalkInterleaving);
  CHECK(r.deviation_other > 1e-2);  // the rejected candidate is far off
}
