#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tracecensus {

// Double interval with outward widening after every operation. Core ops
// round to nearest (error <= 0.5 ulp = |r| * 2^-53), so widening both ends
// by |r| * 2^-51 plus a subnormal guard keeps a rigorous enclosure without
// touching the FPU rounding mode, and stays branch-free in hot loops.
struct DInterval {
  double lo = 0.0;
  double hi = 0.0;

  DInterval() = default;
  DInterval(double l, double h) : lo(l), hi(h) {}
  static DInterval point(double x) { return {x, x}; }

  static constexpr double kEps = 0x1p-51;
  static constexpr double kTiny = 1e-300;
  static double down(double x) { return x - (std::abs(x) * kEps + kTiny); }
  static double up(double x) { return x + (std::abs(x) * kEps + kTiny); }

  DInterval operator+(const DInterval& o) const {
    return {down(lo + o.lo), up(hi + o.hi)};
  }
  DInterval operator-(const DInterval& o) const {
    return {down(lo - o.hi), up(hi - o.lo)};
  }
  DInterval operator-() const { return {-hi, -lo}; }
  DInterval operator*(const DInterval& o) const {
    double a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return {down(std::min(std::min(a, b), std::min(c, d))),
            up(std::max(std::max(a, b), std::max(c, d)))};
  }
  DInterval operator/(const DInterval& o) const {
    if (o.lo <= 0.0 && o.hi >= 0.0)
      throw std::domain_error("DInterval: division by interval containing 0");
    double a = lo / o.lo, b = lo / o.hi, c = hi / o.lo, d = hi / o.hi;
    return {down(std::min(std::min(a, b), std::min(c, d))),
            up(std::max(std::max(a, b), std::max(c, d)))};
  }
  DInterval mul_int(long k) const {  // k exact as double for |k| < 2^53
    double kd = static_cast<double>(k);
    double a = lo * kd, b = hi * kd;
    return {down(std::min(a, b)), up(std::max(a, b))};
  }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }
  bool positive() const { return lo > 0.0; }
  bool negative() const { return hi < 0.0; }
};

// Exact rational interval. Used for certified root refinement and as the
// escalation path when double intervals cannot separate a value from 0.
struct QInterval {
  mpq_class lo, hi;

  QInterval() = default;
  QInterval(mpq_class l, mpq_class h) : lo(std::move(l)), hi(std::move(h)) {}
  static QInterval point(const mpq_class& x) { return {x, x}; }

  QInterval operator+(const QInterval& o) const { return {lo + o.lo, hi + o.hi}; }
  QInterval operator-(const QInterval& o) const { return {lo - o.hi, hi - o.lo}; }
  QInterval operator-() const { return {-hi, -lo}; }
  QInterval operator*(const QInterval& o) const {
    mpq_class a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    mpq_class mn = a, mx = a;
    for (const mpq_class* v : {&b, &c, &d}) {
      if (*v < mn) mn = *v;
      if (*v > mx) mx = *v;
    }
    return {mn, mx};
  }
  QInterval scale(const mpq_class& s) const {
    if (s >= 0) return {lo * s, hi * s};
    return {hi * s, lo * s};
  }

  mpq_class width() const { return hi - lo; }
  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  int sign() const {  // 0 when the interval straddles 0
    if (lo > 0) return 1;
    if (hi < 0) return -1;
    return 0;
  }
  double mid_double() const { return mpq_class((lo + hi) / 2).get_d(); }
  DInterval to_dinterval() const {
    // get_d truncates toward zero; step one ulp outward to cover it
    double l = lo.get_d(), h = hi.get_d();
    return {std::nextafter(l, -INFINITY), std::nextafter(h, INFINITY)};
  }
};

// width <= 2^-bits test without constructing 2^-bits as a double
inline bool narrower_than_2exp(const QInterval& iv, long bits) {
  mpq_class w = iv.width();
  if (w == 0) return true;
  mpq_class thr(1);
  mpq_div_2exp(thr.get_mpq_t(), thr.get_mpq_t(), bits);
  return w <= thr;
}

}  // namespace tracecensus
