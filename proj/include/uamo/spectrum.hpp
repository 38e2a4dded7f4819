#ifndef UAMO_SPECTRUM_HPP
#define UAMO_SPECTRUM_HPP

#include <string>
#include <vector>

#include "uamo/cocycle.hpp"
#include "uamo/types.hpp"

namespace uamo {

/// Closed arc of the unit circle, endpoints as angles with
/// 0 <= lo < 2*pi and lo <= hi <= lo + 2*pi (hi may wrap past 2*pi).
struct Arc {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// Approximation of the spectrum at a rational frequency: the 2q spectral
/// bands, sorted, possibly touching at closed gaps.
struct BandStructure {
  std::vector<Arc> arcs;
  Frequency freq;
  Couplings couplings;
  int theta_grid = 0;
  bool count_ok = true;     // arcs.size() == 2q after refinement
  std::string warning;      // set when the expected band count was not met

  double total_measure() const {
    double s = 0.0;
    for (const auto& a : arcs) s += a.width();
    return s;
  }
};

/// A spectral gap with its integer label k and the value of the integrated
/// density of states on it.  2*ids = k*Phi (mod 1) up to `residual`.
struct GapRecord {
  Arc arc;
  long label = 0;
  double ids = 0.0;
  double width = 0.0;
  double residual = 0.0;
  bool labeled = false;
};

/// Trace of the q-fold two-step product with phases theta, theta+Phi, ...;
/// real by the SU(1,1) structure.
double monodromy_trace(const Couplings& c, const Frequency& rational, Phase theta,
                       double zeta);

/// Range of the monodromy trace over all theta (the trace has exact period
/// 1/q in theta); computed from `samples_per_period` grid points plus local
/// refinement of both extremes.
std::pair<double, double> monodromy_trace_range(const Couplings& c,
                                                const Frequency& rational,
                                                double zeta,
                                                int samples_per_period = 16);

/// Band structure at a rational frequency.  A point z = e^{i zeta} belongs
/// to a band iff |trace| <= 2 for some theta, i.e. iff the trace range over
/// theta meets [-2, 2].  Band edges are bisected to ~1e-12; bands touching
/// at a closed gap are reported as separate arcs sharing an endpoint.
/// theta_grid_size counts trace samples per 1/q period (>= 4).
BandStructure band_arcs(const Couplings& c, const Frequency& rational,
                        int theta_grid_size = 16, int zeta_resolution = 0);

/// Band structure at the depth-th continued-fraction convergent of phi.
/// For rational phi the exact band structure is returned with a note.
BandStructure spectrum_approx(const Couplings& c, double phi, int depth,
                              int theta_grid_size = 16, int zeta_resolution = 0);

/// Complementary arcs of positive width > width_floor, sorted by lo.
/// Labels are unset.
std::vector<GapRecord> gaps(const BandStructure& bs, double width_floor = 1e-9);

/// Fills in ids (rotation number at the gap midpoint), the integer label k
/// minimizing ||2*ids - k*Phi||_T over |k| <= k_max, and the fit residual.
/// k_max = 0 picks max(2q, 50).  Gaps with residual > 1e-3 stay unlabeled.
void gap_labels(const Couplings& c, const Frequency& freq, std::vector<GapRecord>& gs,
                long rot_iters = 200000, long k_max = 0);

struct ButterflyEntry {
  long p = 0;
  long q = 1;
  BandStructure bands;
};

/// band_arcs for every reduced p/q with 2 <= q <= q_max, ordered by
/// (q, p).  Integer frequencies are excluded.  Per-frequency failures are
/// recorded in the entry's warning and the sweep continues.
std::vector<ButterflyEntry> butterfly(const Couplings& c, int q_max,
                                      int zeta_resolution = 0, int workers = 0,
                                      int theta_grid_size = 16);

/// Hausdorff distance between two arc unions on the circle.
double hausdorff_distance(const std::vector<Arc>& a, const std::vector<Arc>& b);

/// Deviations of the arc set from its images under zeta -> -zeta
/// (conjugation) and zeta -> zeta + pi (negation), as Hausdorff distances.
std::pair<double, double> symmetry_check(const BandStructure& bs);

}  // namespace uamo

#endif  // UAMO_SPECTRUM_HPP
