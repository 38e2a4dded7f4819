#include "uamo/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "uamo/arithmetic.hpp"

namespace uamo {

namespace {

constexpr double kGolden = 0.6180339887498949;  // (sqrt 5 - 1)/2
constexpr double kClosedGapTol = 1e-11;

// lambda1 = 0 makes the two-step cocycle singular; the swapped couplings
// give the same spectrum (Aubry duality), so the band machinery falls back
// to them.
Couplings effective_couplings(const Couplings& c) {
  if (c.lambda1 > 0.0) return c;
  if (c.lambda2 > 0.0) return Couplings::of(c.lambda2, c.lambda1);
  throw std::domain_error("band_arcs: lambda1 = lambda2 = 0 has no transfer cocycle");
}

// sin values and inverse denominators along one period of the phase orbit
struct OrbitData {
  std::vector<double> s;
  std::vector<double> dinv;
};

OrbitData make_orbit(const Couplings& c, const Frequency& f, double theta) {
  long q = f.q();
  OrbitData od;
  od.s.resize(static_cast<size_t>(q));
  od.dinv.resize(static_cast<size_t>(q));
  for (long j = 0; j < q; ++j) {
    double s = std::sin(kTwoPi * f.phase_at(theta, j));
    double den = 1.0 - c.lambda2 * c.lambda2 * s * s;
    if (den <= 1e-14)
      throw std::domain_error("monodromy: singular cocycle step (lambda2 = 1 at a resonant phase)");
    od.s[static_cast<size_t>(j)] = s;
    od.dinv[static_cast<size_t>(j)] = 1.0 / (c.lambda1 * std::sqrt(den));
  }
  return od;
}

double trace_from_orbit(const Couplings& c, const OrbitData& od, Complex z) {
  const Complex zi = std::conj(z);  // |z| = 1
  Complex a(1, 0), b(0, 0), cc(0, 0), d(1, 0);
  const double lp = c.lambda1p, l2 = c.lambda2;
  for (size_t j = 0; j < od.s.size(); ++j) {
    const double s = od.s[j], di = od.dinv[j];
    const Complex m11 = (z + lp * l2 * s) * di;
    const Complex m12 = (-lp * zi - l2 * s) * di;
    const Complex m21 = (-lp * z - l2 * s) * di;
    const Complex m22 = (zi + lp * l2 * s) * di;
    const Complex na = m11 * a + m12 * cc;
    const Complex nb = m11 * b + m12 * d;
    const Complex nc = m21 * a + m22 * cc;
    const Complex nd = m21 * b + m22 * d;
    a = na;
    b = nb;
    cc = nc;
    d = nd;
  }
  return (a + d).real();
}

// Trace envelope over theta at fixed zeta.  The trace has exact period 1/q
// in theta; a per-period sample grid is cached, and the extremes are
// refined by golden section.
class TraceEnvelope {
 public:
  TraceEnvelope(const Couplings& c, const Frequency& f, int per_period)
      : c_(c), f_(f), q_(f.q()), per_(std::max(4, per_period)) {
    grid_.reserve(static_cast<size_t>(per_));
    double cell = 1.0 / (static_cast<double>(per_) * static_cast<double>(q_));
    for (int j = 0; j < per_; ++j) grid_.push_back(make_orbit(c_, f_, j * cell));
    cell_ = cell;
  }

  double trace_at(double theta, double zeta) const {
    OrbitData od = make_orbit(c_, f_, frac(theta));
    return trace_from_orbit(c_, od, zfor(zeta));
  }

  struct Coarse {
    double lo, hi;  // min / max over the cached grid
    int ilo, ihi;   // indices of the extremal grid points
  };

  Coarse coarse(double zeta) const {
    Complex z = zfor(zeta);
    Coarse r{0, 0, 0, 0};
    for (int j = 0; j < per_; ++j) {
      double t = trace_from_orbit(c_, grid_[static_cast<size_t>(j)], z);
      if (j == 0) {
        r.lo = r.hi = t;
      } else {
        if (t < r.lo) {
          r.lo = t;
          r.ilo = j;
        }
        if (t > r.hi) {
          r.hi = t;
          r.ihi = j;
        }
      }
    }
    return r;
  }

  // margin by which refinement can move past the coarse extremes
  double margin(const Coarse& co) const {
    double amp = co.hi - co.lo;
    return 0.25 * amp * (kTwoPi / per_) * (kTwoPi / per_) + 1e-13;
  }

  double refined_min(double zeta) const { return refine(zeta, +1.0); }
  double refined_max(double zeta) const { return -refine(zeta, -1.0); }

  bool member(double zeta) const {
    Coarse co = coarse(zeta);
    if (co.lo <= 2.0 && co.hi >= -2.0) return true;  // refinement only widens the range
    double mg = margin(co);
    if (co.lo - mg > 2.0) return false;   // min cannot reach 2
    if (co.hi + mg < -2.0) return false;  // max cannot reach -2
    if (co.lo > 2.0) return refined_min(zeta) <= 2.0;
    return refined_max(zeta) >= -2.0;
  }

  long q() const { return q_; }
  double cell() const { return cell_; }
  const Couplings& couplings() const { return c_; }
  const Frequency& freq() const { return f_; }

 private:
  static Complex zfor(double zeta) { return Complex(std::cos(zeta), std::sin(zeta)); }

  // golden-section extremum of sign * trace around the best grid point
  double refine(double zeta, double sign) const {
    Complex z = zfor(zeta);
    Coarse co = coarse(zeta);
    int i0 = sign > 0 ? co.ilo : co.ihi;
    double a = (i0 - 1) * cell_, b = (i0 + 1) * cell_;
    auto f = [&](double th) {
      OrbitData od = make_orbit(c_, f_, frac(th));
      return sign * trace_from_orbit(c_, od, z);
    };
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    double best = std::min(sign * (sign > 0 ? co.lo : co.hi), std::min(f1, f2));
    for (int it = 0; it < 32; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGolden * (b - a);
        f1 = f(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGolden * (b - a);
        f2 = f(x2);
      }
      best = std::min(best, std::min(f1, f2));
    }
    return sign * best;
  }

  Couplings c_;
  Frequency f_;
  long q_;
  int per_;
  double cell_;
  std::vector<OrbitData> grid_;
};

double bisect_edge(const TraceEnvelope& env, double lo, double hi, bool lo_member,
                   int iters = 42) {
  for (int i = 0; i < iters; ++i) {
    double mid = 0.5 * (lo + hi);
    if (env.member(wrap_angle(mid)) == lo_member)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// scalar bisection of g on [lo, hi] where sign(g(lo)) != sign(g(hi))
template <typename F>
double bisect_scalar(F&& g, double lo, double hi, int iters = 48) {
  double glo = g(lo);
  for (int i = 0; i < iters; ++i) {
    double mid = 0.5 * (lo + hi);
    if ((g(mid) > 0) == (glo > 0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// golden-section maximum of f on [a, b]
template <typename F>
double golden_max_arg(F&& f, double a, double b, int iters = 40) {
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  return f1 > f2 ? x1 : x2;
}

struct SplitEvent {
  double lo, hi;  // zero-width for a closed gap, an open hairline gap otherwise
};

// Represent x in the arc's own coordinate chart [lo, lo + 2pi)
double wrap_rel(double x, double lo) {
  double y = x;
  while (y < lo) y += kTwoPi;
  while (y >= lo + kTwoPi) y -= kTwoPi;
  return y;
}

// Search a solid arc for interior touch points (closed gaps) and hairline
// gaps narrower than the scan grid.
std::vector<SplitEvent> find_splits(const TraceEnvelope& env, double lo, double hi) {
  std::vector<SplitEvent> events;
  long q = env.q();
  int npts = std::max<int>(65, static_cast<int>(8 * q) + 1);
  double step = (hi - lo) / (npts - 1);

  for (int side = 0; side < 2; ++side) {
    // side 0: local maxima of min-envelope near +2; side 1: local minima of
    // max-envelope near -2 (handled by sign flip)
    auto value = [&](double zeta) {
      double w = wrap_angle(zeta);
      return side == 0 ? env.refined_min(w) : -env.refined_max(w);
    };
    auto coarse_value = [&](double zeta) {
      auto co = env.coarse(wrap_angle(zeta));
      return side == 0 ? co.lo : -co.hi;
    };
    std::vector<double> cv(static_cast<size_t>(npts));
    for (int i = 0; i < npts; ++i) cv[static_cast<size_t>(i)] = coarse_value(lo + i * step);

    for (int i = 1; i + 1 < npts; ++i) {
      if (cv[i] < 1.5) continue;  // far from touching
      if (cv[i] < cv[i - 1] || cv[i] < cv[i + 1]) continue;
      double za = lo + (i - 1) * step, zb = lo + (i + 1) * step;
      double zstar = golden_max_arg(value, za, zb);
      double vstar = value(zstar);
      if (vstar < 2.0 - kClosedGapTol) continue;  // grazing from below, no gap
      if (vstar <= 2.0 + kClosedGapTol) {
        events.push_back({wrap_rel(zstar, lo), wrap_rel(zstar, lo)});
        continue;
      }
      // open hairline gap: bracket both edges where the envelope crosses 2
      double l = zstar, r = zstar;
      while (l > lo && value(l) > 2.0) l -= step;
      while (r < hi && value(r) > 2.0) r += step;
      if (value(l) > 2.0 || value(r) > 2.0) continue;  // touches the arc boundary; already split
      auto g = [&](double zz) { return value(zz) - 2.0; };
      double e1 = bisect_scalar(g, l, zstar);
      double e2 = bisect_scalar(g, zstar, r);
      events.push_back({wrap_rel(e1, lo), wrap_rel(e2, lo)});
    }
  }
  std::sort(events.begin(), events.end(),
            [](const SplitEvent& a, const SplitEvent& b) { return a.lo < b.lo; });
  // dedupe near-coincident events
  std::vector<SplitEvent> out;
  for (const auto& e : events)
    if (out.empty() || e.lo > out.back().hi + 1e-9) out.push_back(e);
  return out;
}

}  // namespace

double monodromy_trace(const Couplings& c, const Frequency& rational, Phase theta,
                       double zeta) {
  if (!rational.is_rational())
    throw std::invalid_argument("monodromy_trace: frequency must be rational");
  Couplings ec = effective_couplings(c);
  OrbitData od = make_orbit(ec, rational, theta.theta);
  return trace_from_orbit(ec, od, Complex(std::cos(zeta), std::sin(zeta)));
}

std::pair<double, double> monodromy_trace_range(const Couplings& c,
                                                const Frequency& rational, double zeta,
                                                int samples_per_period) {
  if (!rational.is_rational())
    throw std::invalid_argument("monodromy_trace_range: frequency must be rational");
  TraceEnvelope env(effective_couplings(c), rational, samples_per_period);
  return {env.refined_min(wrap_angle(zeta)), env.refined_max(wrap_angle(zeta))};
}

BandStructure band_arcs(const Couplings& c, const Frequency& rational,
                        int theta_grid_size, int zeta_resolution) {
  if (!rational.is_rational())
    throw std::invalid_argument("band_arcs: frequency must be rational (see spectrum_approx)");
  const long q = rational.q();
  BandStructure bs;
  bs.freq = rational;
  bs.couplings = c;
  bs.theta_grid = std::max(4, theta_grid_size);

  TraceEnvelope env(effective_couplings(c), rational, bs.theta_grid);

  int n = zeta_resolution > 0 ? zeta_resolution : static_cast<int>(std::max<long>(512, 24 * q));
  n = ((n + 3) / 4) * 4;  // keep the symmetric points 0, pi/2, pi, 3pi/2 on the grid

  for (int attempt = 0; attempt < 3; ++attempt) {
    bs.arcs.clear();
    std::vector<char> member(static_cast<size_t>(n));
    double cell = kTwoPi / n;
    for (int i = 0; i < n; ++i) member[static_cast<size_t>(i)] = env.member(i * cell) ? 1 : 0;

    bool any = false, all = true;
    for (int i = 0; i < n; ++i) {
      any = any || member[static_cast<size_t>(i)];
      all = all && member[static_cast<size_t>(i)];
    }

    std::vector<Arc> solid;
    if (!any) {
      bs.count_ok = false;
      bs.warning = "no spectrum found (resolution insufficient)";
      return bs;
    }
    if (all) {
      solid.push_back({0.0, kTwoPi});
    } else {
      // circular transitions
      std::vector<double> enters, leaves;
      for (int i = 0; i < n; ++i) {
        int ni = (i + 1) % n;
        if (member[static_cast<size_t>(i)] != member[static_cast<size_t>(ni)]) {
          double lo = i * cell, hi = (i + 1) * cell;
          double e = bisect_edge(env, lo, hi, member[static_cast<size_t>(i)] == 1);
          if (member[static_cast<size_t>(i)])
            leaves.push_back(e);
          else
            enters.push_back(e);
        }
      }
      std::sort(enters.begin(), enters.end());
      std::sort(leaves.begin(), leaves.end());
      for (double s : enters) {
        auto it = std::upper_bound(leaves.begin(), leaves.end(), s);
        double e = it != leaves.end() ? *it : leaves.front() + kTwoPi;
        solid.push_back({s, e});
      }
      std::sort(solid.begin(), solid.end(),
                [](const Arc& a, const Arc& b) { return a.lo < b.lo; });
    }

    // split solid arcs at closed gaps and hairline gaps
    std::vector<Arc> arcs;
    for (const Arc& a : solid) {
      auto events = find_splits(env, a.lo, a.hi);
      double cur = a.lo;
      for (const auto& e : events) {
        if (e.lo <= cur + 1e-12 || e.hi >= a.hi - 1e-12) continue;
        arcs.push_back({cur, e.lo});
        cur = e.hi;
      }
      arcs.push_back({cur, a.hi});
    }

    // canonical form: lo in [0, 2pi), sorted
    for (auto& a : arcs) {
      double w = a.hi - a.lo;
      a.lo = wrap_angle(a.lo);
      a.hi = a.lo + w;
    }
    std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.lo < b.lo; });
    bs.arcs = std::move(arcs);

    if (static_cast<long>(bs.arcs.size()) == 2 * q || attempt == 2) break;
    n *= 4;  // retry at higher resolution
  }

  bs.count_ok = static_cast<long>(bs.arcs.size()) == 2 * q;
  if (!bs.count_ok)
    bs.warning = "band count " + std::to_string(bs.arcs.size()) + " != 2q = " +
                 std::to_string(2 * q) + " (resolution insufficient)";
  return bs;
}

BandStructure spectrum_approx(const Couplings& c, double phi, int depth,
                              int theta_grid_size, int zeta_resolution) {
  double x = frac(phi);
  if (x == 0.0)
    return band_arcs(c, Frequency::rational(0, 1), theta_grid_size, zeta_resolution);
  ContinuedFraction cf = continued_fraction(x, std::min(depth, 40));
  if (cf.convergents.empty())
    throw std::domain_error("spectrum_approx: no convergents available");
  size_t idx = std::min(static_cast<size_t>(depth), cf.convergents.size()) - 1;
  auto [p, q] = cf.convergents[idx];
  BandStructure bs = band_arcs(c, Frequency::rational(p, q), theta_grid_size, zeta_resolution);
  if (cf.rational_flagged && bs.warning.empty())
    bs.warning = "input frequency is rational to machine precision; bands are exact";
  return bs;
}

std::vector<GapRecord> gaps(const BandStructure& bs, double width_floor) {
  std::vector<GapRecord> out;
  size_t m = bs.arcs.size();
  if (m == 0) return out;
  for (size_t i = 0; i < m; ++i) {
    const Arc& a = bs.arcs[i];
    const Arc& b = bs.arcs[(i + 1) % m];
    double lo = a.hi;
    double hi = (i + 1 < m) ? b.lo : b.lo + kTwoPi;
    if (hi - lo > width_floor) {
      GapRecord g;
      g.arc = {wrap_angle(lo), wrap_angle(lo) + (hi - lo)};
      g.width = hi - lo;
      out.push_back(g);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const GapRecord& a, const GapRecord& b) { return a.arc.lo < b.arc.lo; });
  return out;
}

void gap_labels(const Couplings& c, const Frequency& freq, std::vector<GapRecord>& gs,
                long rot_iters, long k_max) {
  if (k_max <= 0) k_max = std::max<long>(freq.is_rational() ? 2 * freq.q() : 0, 50);
  Couplings ec = effective_couplings(c);
  double phi = freq.value();
  for (auto& g : gs) {
    double mid = wrap_angle(0.5 * (g.arc.lo + g.arc.hi));
    CocycleSpec spec{CocycleFamily::TwoStep, ec, freq, mid};
    g.ids = rotation_number(spec, rot_iters, Phase(0.0));
    double best = 2.0;
    long best_k = 0;
    for (long k = 0; k <= k_max; ++k) {
      for (long sk : {k, -k}) {
        double r = torus_norm(2.0 * g.ids - static_cast<double>(sk) * phi);
        if (r < best - 1e-15) {
          best = r;
          best_k = sk;
        }
        if (k == 0) break;
      }
    }
    g.label = best_k;
    g.residual = best;
    g.labeled = best <= 1e-3;
  }
}

std::vector<ButterflyEntry> butterfly(const Couplings& c, int q_max, int zeta_resolution,
                                      int workers, int theta_grid_size) {
  if (q_max < 2) throw std::invalid_argument("butterfly: q_max must be >= 2");
  std::vector<ButterflyEntry> entries;
  for (long q = 2; q <= q_max; ++q)
    for (long p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) entries.push_back({p, q, BandStructure{}});

  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(entries.size())));

  std::atomic<size_t> next{0};
  auto task = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= entries.size()) return;
      auto& e = entries[i];
      try {
        e.bands = band_arcs(c, Frequency::rational(e.p, e.q), theta_grid_size, zeta_resolution);
      } catch (const std::exception& ex) {
        e.bands.freq = Frequency::rational(e.p, e.q);
        e.bands.couplings = c;
        e.bands.count_ok = false;
        e.bands.warning = std::string("failed: ") + ex.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(task);
  task();
  for (auto& t : pool) t.join();
  return entries;
}

namespace {

// merge arcs into disjoint sorted intervals on [0, 2pi), unrolled where needed
std::vector<std::pair<double, double>> normalize_set(const std::vector<Arc>& arcs) {
  std::vector<std::pair<double, double>> iv;
  for (const auto& a : arcs) {
    double lo = wrap_angle(a.lo);
    double hi = lo + a.width();
    if (hi <= kTwoPi + 1e-15) {
      iv.emplace_back(lo, std::min(hi, kTwoPi));
    } else {
      iv.emplace_back(lo, kTwoPi);
      iv.emplace_back(0.0, hi - kTwoPi);
    }
  }
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& x : iv) {
    if (!merged.empty() && x.first <= merged.back().second + 1e-12)
      merged.back().second = std::max(merged.back().second, x.second);
    else
      merged.push_back(x);
  }
  // wrap-around merge
  if (merged.size() > 1 && merged.front().first <= 1e-12 &&
      merged.back().second >= kTwoPi - 1e-12) {
    merged.front().first = merged.back().first - kTwoPi;
    merged.pop_back();
  }
  return merged;
}

double point_to_set(double x, const std::vector<std::pair<double, double>>& set) {
  double best = kTwoPi;
  for (const auto& [lo, hi] : set) {
    for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
      double l = lo + shift, h = hi + shift;
      if (x >= l && x <= h) return 0.0;
      best = std::min(best, std::min(std::fabs(x - l), std::fabs(x - h)));
    }
  }
  return best;
}

double directed_hausdorff(const std::vector<std::pair<double, double>>& a,
                          const std::vector<std::pair<double, double>>& b) {
  // sup over x in A of dist(x, B): check arc endpoints of A and the deepest
  // covered points of B's gaps
  double worst = 0.0;
  for (const auto& [lo, hi] : a) {
    worst = std::max(worst, point_to_set(lo, b));
    worst = std::max(worst, point_to_set(hi, b));
  }
  // gap centers of B that lie inside A
  size_t m = b.size();
  for (size_t i = 0; i < m; ++i) {
    double glo = b[i].second;
    double ghi = (i + 1 < m) ? b[i + 1].first : b[0].first + kTwoPi;
    if (ghi <= glo) continue;
    double center = 0.5 * (glo + ghi);
    double cw = wrap_angle(center);
    for (const auto& [lo, hi] : a) {
      for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
        double x = cw + shift;
        if (x >= lo && x <= hi) worst = std::max(worst, 0.5 * (ghi - glo));
      }
    }
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<Arc>& a, const std::vector<Arc>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return kPi;
  auto sa = normalize_set(a), sb = normalize_set(b);
  return std::max(directed_hausdorff(sa, sb), directed_hausdorff(sb, sa));
}

std::pair<double, double> symmetry_check(const BandStructure& bs) {
  std::vector<Arc> conj, neg;
  conj.reserve(bs.arcs.size());
  neg.reserve(bs.arcs.size());
  for (const auto& a : bs.arcs) {
    conj.push_back({wrap_angle(-a.hi), wrap_angle(-a.hi) + a.width()});
    neg.push_back({wrap_angle(a.lo + kPi), wrap_angle(a.lo + kPi) + a.width()});
  }
  return {hausdorff_distance(bs.arcs, conj), hausdorff_distance(bs.arcs, neg)};
}

}  // namespace uamo
