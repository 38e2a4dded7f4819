#include <random>

#include "doctest.h"
#include "uamo/arithmetic.hpp"
#include "uamo/spectrum.hpp"

using namespace uamo;

namespace {
const double kGoldenMean = 0.5 * (std::sqrt(5.0) - 1.0);
}

TEST_CASE("monodromy trace closed forms") {
  // q = 1, theta = 0: trace = 2 cos(zeta) / lambda1 for any lambda2
  Frequency one = Frequency::rational(0, 1);
  for (double l2 : {0.0, 0.5, 0.9}) {
    Couplings c = Couplings::of(0.6, l2);
    for (double zeta : {0.1, 1.3, 2.9, 4.4}) {
      double tr = monodromy_trace(c, one, Phase(0.0), zeta);
      CHECK(tr == doctest::Approx(2.0 * std::cos(zeta) / 0.6).epsilon(1e-13));
    }
  }

  // lambda2 = 0, any q: trace of the q-th power of the constant matrix;
  // for |2 cos zeta / l1| <= 2 elliptic: tr M_q = 2 cos(q arccos(cos zeta / l1))
  Couplings c0 = Couplings::of(0.6, 0.0);
  Frequency f25 = Frequency::rational(2, 5);
  for (double zeta : {1.2, 1.8}) {
    double rho = std::acos(std::cos(zeta) / 0.6);
    double expect = 2.0 * std::cos(5.0 * rho);
    CHECK(monodromy_trace(c0, f25, Phase(0.37), zeta) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("monodromy trace is real (SU(1,1) product structure)") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Frequency f = Frequency::rational(3, 8);
  for (int i = 0; i < 1000; ++i) {
    Couplings c = Couplings::of(0.1 + 0.85 * uni(rng), 0.95 * uni(rng));
    CocycleSpec spec{CocycleFamily::TwoStep, c, f, kTwoPi * uni(rng)};
    auto [prod, stats] = cocycle_product(spec, Phase(uni(rng)), f.q());
    // unnormalized trace = e^{log_norm_sum} * trace of the normalized product
    Complex tr_full = std::exp(stats.log_norm_sum) * (prod.a + std::conj(prod.a));
    CHECK(std::fabs(tr_full.imag()) < 1e-12 * std::max(1.0, std::abs(tr_full)));
  }
}

TEST_CASE("band_arcs closed form at lambda2 = 0") {
  Couplings c = Couplings::of(0.6, 0.0);
  BandStructure bs = band_arcs(c, Frequency::rational(0, 1));
  REQUIRE(bs.arcs.size() == 2);
  CHECK(bs.count_ok);
  double a = std::acos(0.6);
  CHECK(bs.arcs[0].lo == doctest::Approx(a).epsilon(1e-10));
  CHECK(bs.arcs[0].hi == doctest::Approx(kPi - a).epsilon(1e-10));
  CHECK(bs.arcs[1].lo == doctest::Approx(kPi + a).epsilon(1e-10));
  CHECK(bs.arcs[1].hi == doctest::Approx(kTwoPi - a).epsilon(1e-10));

  // the two gaps both have width 2 arccos(lambda1)
  auto gs = gaps(bs);
  REQUIRE(gs.size() == 2);
  CHECK(gs[0].width == doctest::Approx(2.0 * a).epsilon(1e-9));
  CHECK(gs[1].width == doctest::Approx(2.0 * a).epsilon(1e-9));
}

TEST_CASE("band_arcs full-circle case lambda1 = 1, lambda2 = 0") {
  Couplings c = Couplings::of(1.0, 0.0);
  BandStructure bs = band_arcs(c, Frequency::rational(0, 1));
  CHECK(bs.arcs.size() == 2);  // two touching bands split at the closed gaps
  CHECK(bs.total_measure() == doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK(gaps(bs).empty());
}

TEST_CASE("band counts are 2q") {
  Couplings ca = Couplings::of(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(3.0));
  BandStructure b12 = band_arcs(ca, Frequency::rational(1, 2));
  CHECK(b12.arcs.size() == 4);

  for (auto [p, q] : {std::pair<long, long>{2, 5}, {3, 8}, {5, 13}}) {
    BandStructure bs = band_arcs(ca, Frequency::rational(p, q));
    CHECK(bs.arcs.size() == static_cast<size_t>(2 * q));
    CHECK(bs.count_ok);
  }

  Couplings cb = Couplings::of(0.6, 0.8);
  for (auto [p, q] : {std::pair<long, long>{1, 3}, {3, 8}, {5, 13}, {13, 21}}) {
    BandStructure bs = band_arcs(cb, Frequency::rational(p, q));
    CHECK(bs.arcs.size() == static_cast<size_t>(2 * q));
  }
}

TEST_CASE("critical couplings have smaller total band measure") {
  Frequency f = Frequency::rational(3, 5);
  double crit = band_arcs(Couplings::of(0.7, 0.7), f).total_measure();
  double sub = band_arcs(Couplings::of(0.8, 0.6), f).total_measure();
  double sup = band_arcs(Couplings::of(0.6, 0.8), f).total_measure();
  CHECK(crit < sub);
  CHECK(crit < sup);
}

TEST_CASE("spectrum_approx follows the continued fraction") {
  Couplings c = Couplings::of(0.6, 0.8);
  BandStructure bs = spectrum_approx(c, kGoldenMean, 5);
  CHECK(bs.freq.p() == 5);
  CHECK(bs.freq.q() == 8);
  CHECK(bs.arcs.size() == 16);

  // Hausdorff distance between consecutive depths decreases along 4 -> 7
  BandStructure b4 = spectrum_approx(c, kGoldenMean, 4);
  BandStructure b5 = spectrum_approx(c, kGoldenMean, 5);
  BandStructure b6 = spectrum_approx(c, kGoldenMean, 6);
  BandStructure b7 = spectrum_approx(c, kGoldenMean, 7);
  double d45 = hausdorff_distance(b4.arcs, b5.arcs);
  double d56 = hausdorff_distance(b5.arcs, b6.arcs);
  double d67 = hausdorff_distance(b6.arcs, b7.arcs);
  CHECK(d45 > d56);
  CHECK(d56 > d67);

  // lambda2 = 0: identical arcs at every depth
  Couplings c0 = Couplings::of(0.6, 0.0);
  BandStructure x3 = spectrum_approx(c0, kGoldenMean, 3);
  BandStructure x6 = spectrum_approx(c0, kGoldenMean, 6);
  CHECK(hausdorff_distance(x3.arcs, x6.arcs) < 1e-10);
}

TEST_CASE("gap count on a circle") {
  Couplings ca = Couplings::of(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(3.0));
  BandStructure b12 = band_arcs(ca, Frequency::rational(1, 2));
  auto gs = gaps(b12);
  CHECK(gs.size() <= 3);  // 4 bands on a circle, some gaps closed
}

TEST_CASE("gap labels: lambda2 = 0") {
  Couplings c = Couplings::of(0.6, 0.0);
  Frequency f = Frequency::rational(0, 1);
  BandStructure bs = band_arcs(c, f);
  auto gs = gaps(bs);
  REQUIRE(gs.size() == 2);
  gap_labels(c, f, gs);
  for (const auto& g : gs) {
    CHECK(g.labeled);
    CHECK(g.residual < 1e-4);
  }
  // constant cocycle: ids plateaus at 0 (gap through z = 1) and 1/2 (z = -1)
  CHECK(std::min(gs[0].ids, 1.0 - gs[0].ids) < 1e-6);
  CHECK(gs[1].ids == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("gap labels at 2/5: lattice, residuals, symmetry pairing") {
  Couplings c = Couplings::of(0.6, 0.8);
  Frequency f = Frequency::rational(2, 5);
  BandStructure bs = band_arcs(c, f);
  REQUIRE(bs.arcs.size() == 10);
  auto gs = gaps(bs, 1e-6);
  gap_labels(c, f, gs, 300000);
  long q = 5;
  for (const auto& g : gs) {
    CHECK(g.labeled);
    CHECK(g.residual < 1e-3);
    // ids on the lattice m / (2q)
    double lat = g.ids * 2.0 * static_cast<double>(q);
    CHECK(std::fabs(lat - std::round(lat)) < 1e-4);
  }
  // gaps paired under zeta -> zeta + pi carry ids differing by 1/2
  for (const auto& g : gs) {
    double mid = wrap_angle(0.5 * (g.arc.lo + g.arc.hi) + kPi);
    for (const auto& h : gs) {
      double hm = wrap_angle(0.5 * (h.arc.lo + h.arc.hi));
      if (circle_dist(mid, hm) < 0.3 * h.width) {
        CHECK(torus_norm(g.ids + 0.5 - h.ids) < 1e-4);
      }
    }
  }
}

TEST_CASE("butterfly sweep") {
  Couplings c = Couplings::of(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(3.0));
  auto rec = butterfly(c, 2);
  REQUIRE(rec.size() == 1);
  CHECK(rec[0].p == 1);
  CHECK(rec[0].q == 2);
  CHECK(rec[0].bands.arcs.size() == 4);

  // record count is the totient sum
  auto rec8 = butterfly(c, 8, 0, 2);
  size_t expect = 0;
  for (long q = 2; q <= 8; ++q)
    for (long p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) ++expect;
  CHECK(rec8.size() == expect);
  // canonical ordering and 2q arcs per record
  for (size_t i = 1; i < rec8.size(); ++i)
    CHECK((rec8[i - 1].q < rec8[i].q ||
           (rec8[i - 1].q == rec8[i].q && rec8[i - 1].p < rec8[i].p)));
  for (const auto& e : rec8) CHECK(e.bands.arcs.size() == static_cast<size_t>(2 * e.q));
}

TEST_CASE("hausdorff distance sanity") {
  std::vector<Arc> a{{0.5, 1.0}, {2.0, 2.5}};
  CHECK(hausdorff_distance(a, a) == 0.0);
  // rotated copy: distance equals the rotation angle
  double rot = 0.07;
  std::vector<Arc> b;
  for (const auto& x : a) b.push_back({x.lo + rot, x.hi + rot});
  CHECK(hausdorff_distance(a, b) == doctest::Approx(rot).epsilon(1e-12));
  // a gap of b inside a: the gap half-width dominates
  std::vector<Arc> c{{0.5, 1.0}};
  std::vector<Arc> d{{0.5, 0.7}, {0.9, 1.0}};
  CHECK(hausdorff_distance(c, d) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("symmetry check") {
  // closed-form symmetric arcs
  Couplings c0 = Couplings::of(0.6, 0.0);
  BandStructure bs0 = band_arcs(c0, Frequency::rational(0, 1));
  auto [dc0, dn0] = symmetry_check(bs0);
  CHECK(dc0 < 1e-12);
  CHECK(dn0 < 1e-12);

  Couplings c = Couplings::of(0.6, 0.8);
  BandStructure bs = band_arcs(c, Frequency::rational(2, 5));
  auto [dc, dn] = symmetry_check(bs);
  CHECK(dc < 1e-8);
  CHECK(dn < 1e-8);

  // deliberately rotated arc set: deviation equals the rotation angle
  BandStructure rotated = bs0;
  for (auto& a : rotated.arcs) {
    a.lo = wrap_angle(a.lo + 0.03);
    a.hi = a.lo + (bs0.arcs[0].hi - bs0.arcs[0].lo);
  }
  auto [dcr, dnr] = symmetry_check(rotated);
  CHECK(dcr == doctest::Approx(0.03).epsilon(1e-6));
  (void)dnr;
}

TEST_CASE("isospectral band structures under the coupling swap") {
  // quick q = 5 check here; the full q <= 20 sweep runs in the acceptance suite
  Frequency f = Frequency::rational(2, 5);
  BandStructure a = band_arcs(Couplings::of(0.6, 0.8), f);
  BandStructure b = band_arcs(Couplings::of(0.8, 0.6), f);
  CHECK(hausdorff_distance(a.arcs, b.arcs) < 1e-8);
}
