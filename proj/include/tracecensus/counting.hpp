#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tracecensus/cubic_field.hpp"

namespace tracecensus {

// The open triangle in the (c1, c2) coordinate plane cut out by the three
// positivity constraints at trace value a (a must be a multiple of kappa).
struct Triangle {
  long a = 0;
  long m = 0;  // beta_3 coefficient, m = a / kappa
  // coeff[i][j]: certified enclosure of beta_j^(i)
  std::array<std::array<DInterval, 3>, 3> coeff{};
  // vertices[k]: intersection of the two lines other than line k
  std::array<std::pair<DInterval, DInterval>, 3> vertices{};

  static Triangle make(const Field& field, long a);
  double area() const;  // shoelace on vertex midpoints
};

// Per-trace data for a = 1..X. At indices not divisible by kappa all three
// entries are zero.
struct CountSeries {
  long X = 0;
  std::vector<long long> N;  // N[a], index 0 unused
  std::vector<double> r;
  std::vector<double> E;
};

// Number of integers n with lo < n < hi (strict), where both bounds are
// known only as enclosures. Integers that the enclosures cannot decide are
// settled by the caller's certifier; at most 16 such candidates are
// tolerated per call (wider intervals throw std::logic_error).
template <typename Certify>
long long count_integers_strictly_between(const DInterval& lo, const DInterval& hi,
                                          Certify&& certify) {
  if (hi.hi <= lo.lo) return 0;  // certainly empty
  long sure_from = static_cast<long>(std::floor(lo.hi)) + 1;
  long sure_to = static_cast<long>(std::ceil(hi.lo)) - 1;
  long long total = (sure_to >= sure_from) ? (sure_to - sure_from + 1) : 0;

  long cand[16];
  int nc = 0;
  auto add_range = [&](double from_d, double to_d) {
    long from = static_cast<long>(std::ceil(from_d));
    long to = static_cast<long>(std::floor(to_d));
    for (long n = from; n <= to && nc < 16; ++n) {
      if (n >= sure_from && n <= sure_to) continue;
      bool dup = false;
      for (int q = 0; q < nc; ++q) dup |= (cand[q] == n);
      if (!dup) cand[nc++] = n;
    }
  };
  add_range(lo.lo, std::min(lo.hi, hi.hi));
  add_range(std::max(hi.lo, lo.lo), hi.hi);
  if (nc >= 16)
    throw std::logic_error("count_integers_strictly_between: candidate overflow "
                           "(interval too wide)");
  for (int q = 0; q < nc; ++q)
    if (certify(cand[q])) ++total;
  return total;
}

// kappa * a^2 / (2 sqrt(D))
double geometric_estimate(const Field& field, long a);

// Exact number of totally positive integers of trace a (0 when kappa does
// not divide a or a <= 0). Column sweep with certified fallback.
long long count_exact(const Field& field, long a);

// Brute-force bounding-box oracle, same contract; guarded to a <= 10^4.
long long count_naive(const Field& field, long a);

// N_a, r_a, E_a for a = 1..X; parallel over a, deterministic output.
CountSeries error_series(const Field& field, long X, int threads = 0);

}  // namespace tracecensus
