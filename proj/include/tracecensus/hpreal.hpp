#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <stdexcept>
#include <utility>

#include "tracecensus/interval.hpp"

namespace tracecensus {

// RAII wrapper for a single mpfr_t at an explicit precision.
class HPReal {
 public:
  explicit HPReal(long prec = 192) { mpfr_init2(x_, prec); mpfr_set_zero(x_, 1); }
  HPReal(const HPReal& o) {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_set(x_, o.x_, MPFR_RNDN);
  }
  HPReal(HPReal&& o) noexcept {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_swap(x_, o.x_);
  }
  HPReal& operator=(HPReal o) noexcept {
    mpfr_swap(x_, o.x_);
    return *this;
  }
  ~HPReal() { mpfr_clear(x_); }

  mpfr_ptr get() { return x_; }
  mpfr_srcptr get() const { return x_; }
  double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }

 private:
  mpfr_t x_;
};

// Directed-rounding interval on top of MPFR. All operations round the low
// end down and the high end up, so enclosures stay rigorous at any
// precision.
class HPInterval {
 public:
  explicit HPInterval(long prec = 192) : lo_(prec), hi_(prec), prec_(prec) {}

  static HPInterval from_long(long v, long prec) {
    HPInterval r(prec);
    mpfr_set_si(r.lo_.get(), v, MPFR_RNDD);
    mpfr_set_si(r.hi_.get(), v, MPFR_RNDU);
    return r;
  }
  static HPInterval from_q(const QInterval& q, long prec) {
    HPInterval r(prec);
    mpfr_set_q(r.lo_.get(), q.lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_.get(), q.hi.get_mpq_t(), MPFR_RNDU);
    return r;
  }

  long prec() const { return prec_; }
  double lo_d() const { return mpfr_get_d(lo_.get(), MPFR_RNDD); }
  double hi_d() const { return mpfr_get_d(hi_.get(), MPFR_RNDU); }
  double mid() const { return 0.5 * (lo_.to_double() + hi_.to_double()); }
  double width() const {
    HPReal w(prec_);
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return w.to_double();
  }
  bool contains_zero() const {
    return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
  }
  int sign() const {
    if (mpfr_sgn(lo_.get()) > 0) return 1;
    if (mpfr_sgn(hi_.get()) < 0) return -1;
    return 0;
  }

  HPInterval operator+(const HPInterval& o) const {
    HPInterval r(prec_);
    mpfr_add(r.lo_.get(), lo_.get(), o.lo_.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), hi_.get(), o.hi_.get(), MPFR_RNDU);
    return r;
  }
  HPInterval operator-(const HPInterval& o) const {
    HPInterval r(prec_);
    mpfr_sub(r.lo_.get(), lo_.get(), o.hi_.get(), MPFR_RNDD);
    mpfr_sub(r.hi_.get(), hi_.get(), o.lo_.get(), MPFR_RNDU);
    return r;
  }
  HPInterval operator-() const {
    HPInterval r(prec_);
    mpfr_neg(r.lo_.get(), hi_.get(), MPFR_RNDD);
    mpfr_neg(r.hi_.get(), lo_.get(), MPFR_RNDU);
    return r;
  }
  HPInterval operator*(const HPInterval& o) const {
    HPInterval r(prec_);
    HPReal t(prec_);
    bool first = true;
    auto consider = [&](mpfr_srcptr a, mpfr_srcptr b) {
      mpfr_mul(t.get(), a, b, MPFR_RNDD);
      if (first || mpfr_cmp(t.get(), r.lo_.get()) < 0) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), a, b, MPFR_RNDU);
      if (first || mpfr_cmp(t.get(), r.hi_.get()) > 0) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
      first = false;
    };
    consider(lo_.get(), o.lo_.get());
    consider(lo_.get(), o.hi_.get());
    consider(hi_.get(), o.lo_.get());
    consider(hi_.get(), o.hi_.get());
    return r;
  }
  HPInterval operator/(const HPInterval& o) const {
    if (o.contains_zero())
      throw std::domain_error("HPInterval: division by interval containing 0");
    HPInterval r(prec_);
    HPReal t(prec_);
    bool first = true;
    auto consider = [&](mpfr_srcptr a, mpfr_srcptr b) {
      mpfr_div(t.get(), a, b, MPFR_RNDD);
      if (first || mpfr_cmp(t.get(), r.lo_.get()) < 0) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
      mpfr_div(t.get(), a, b, MPFR_RNDU);
      if (first || mpfr_cmp(t.get(), r.hi_.get()) > 0) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
      first = false;
    };
    consider(lo_.get(), o.lo_.get());
    consider(lo_.get(), o.hi_.get());
    consider(hi_.get(), o.lo_.get());
    consider(hi_.get(), o.hi_.get());
    return r;
  }

  // log of a strictly positive interval
  HPInterval log() const {
    if (mpfr_sgn(lo_.get()) <= 0)
      throw std::domain_error("HPInterval::log of non-positive interval");
    HPInterval r(prec_);
    mpfr_log(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_log(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
  }
  HPInterval abs() const {
    if (mpfr_sgn(lo_.get()) >= 0) return *this;
    if (mpfr_sgn(hi_.get()) <= 0) return -*this;
    HPInterval r(prec_);
    mpfr_set_zero(r.lo_.get(), 1);
    HPReal neg_lo(prec_);
    mpfr_neg(neg_lo.get(), lo_.get(), MPFR_RNDU);
    mpfr_max(r.hi_.get(), hi_.get(), neg_lo.get(), MPFR_RNDU);
    return r;
  }

  // Nearest integer when the whole interval rounds unambiguously; throws
  // otherwise.
  long round_unambiguous() const {
    long a = mpfr_get_si(lo_.get(), MPFR_RNDN);
    long b = mpfr_get_si(hi_.get(), MPFR_RNDN);
    if (a != b) throw std::runtime_error("HPInterval: ambiguous rounding");
    return a;
  }

 private:
  HPReal lo_, hi_;
  long prec_;
};

}  // namespace tracecensus
