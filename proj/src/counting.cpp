#include "tracecensus/counting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tracecensus/util.hpp"

namespace tracecensus {

namespace {

// certified per-field sweep data shared by both counters
struct SweepData {
  std::array<FieldElement, 3> beta;
  long kappa = 1;
  // A[i], B[i], C[i]: enclosures of beta_1^(i), beta_2^(i), beta_3^(i)
  std::array<DInterval, 3> A, B, C, invB;
  std::array<int, 3> b_sign{};  // certified sign of beta_2^(i)
  // vertex hull of the kappa-level triangle
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;

  explicit SweepData(const Field& F) {
    const TraceBasis& tb = F.trace_basis();
    beta = tb.beta;
    if (!tb.kappa.fits_slong_p())
      throw std::invalid_argument("kappa exceeds machine range");
    kappa = tb.kappa.get_si();
    for (int i = 0; i < 3; ++i) {
      A[i] = F.embed(tb.beta[0], i, 96).to_dinterval();
      B[i] = F.embed(tb.beta[1], i, 96).to_dinterval();
      C[i] = F.embed(tb.beta[2], i, 96).to_dinterval();
      b_sign[i] = F.certified_sign(tb.beta[1], i);
      invB[i] = DInterval::point(1.0) / B[i];
    }
    // vertices of the m = 1 triangle
    bool first = true;
    for (int k = 0; k < 3; ++k) {
      int i = (k + 1) % 3, j = (k + 2) % 3;
      DInterval det = A[i] * B[j] - B[i] * A[j];
      DInterval vx = (-(C[i] * B[j] - B[i] * C[j])) / det;
      DInterval vy = (-(A[i] * C[j] - C[i] * A[j])) / det;
      if (first || vx.lo < x_lo) x_lo = vx.lo;
      if (first || vx.hi > x_hi) x_hi = vx.hi;
      if (first || vy.lo < y_lo) y_lo = vy.lo;
      if (first || vy.hi > y_hi) y_hi = vy.hi;
      first = false;
    }
  }
};

// certified sign of c1 beta1^(i) + c2 beta2^(i) + m beta3^(i)
int form_sign(const Field& F, const SweepData& S, long c1, long c2, long m, int i) {
  DInterval v = S.A[i].mul_int(c1) + S.B[i].mul_int(c2) + S.C[i].mul_int(m);
  if (v.positive()) return 1;
  if (v.negative()) return -1;
  FieldElement z = F.add(F.add(F.mul_int(S.beta[0], c1), F.mul_int(S.beta[1], c2)),
                         F.mul_int(S.beta[2], m));
  return F.certified_sign(z, i);
}

bool point_inside(const Field& F, const SweepData& S, long c1, long c2, long m) {
  for (int i = 0; i < 3; ++i)
    if (form_sign(F, S, c1, c2, m, i) < 0) return false;
  return true;
}

long long count_exact_impl(const Field& F, const SweepData& S, long a) {
  if (a <= 0 || a % S.kappa != 0) return 0;
  const long m = a / S.kappa;

  long c1_from = static_cast<long>(std::floor(S.x_lo * m)) - 1;
  long c1_to = static_cast<long>(std::ceil(S.x_hi * m)) + 1;

  long long total = 0;
  // r_i(c1) = c1 * P_i + Q_i with P_i = -A_i / B_i, Q_i = -m C_i / B_i
  std::array<DInterval, 3> P, Q;
  for (int i = 0; i < 3; ++i) {
    P[i] = (-S.A[i]) * S.invB[i];
    Q[i] = S.C[i].mul_int(-m) * S.invB[i];
  }

  for (long c1 = c1_from; c1 <= c1_to; ++c1) {
    // bound on c2 from each constraint: r_i = (-c1 A_i - m C_i) / B_i
    double lo_lo = -1e300, lo_hi = -1e300;  // lower bound enclosure (max of r_i)
    double hi_lo = 1e300, hi_hi = 1e300;    // upper bound enclosure (min of r_i)
    for (int i = 0; i < 3; ++i) {
      DInterval r = P[i].mul_int(c1) + Q[i];
      if (S.b_sign[i] > 0) {
        lo_lo = std::max(lo_lo, r.lo);
        lo_hi = std::max(lo_hi, r.hi);
      } else {
        hi_lo = std::min(hi_lo, r.lo);
        hi_hi = std::min(hi_hi, r.hi);
      }
    }
    total += count_integers_strictly_between(
        DInterval(lo_lo, lo_hi), DInterval(hi_lo, hi_hi),
        [&](long n) { return point_inside(F, S, c1, n, m); });
  }
  return total;
}

}  // namespace

Triangle Triangle::make(const Field& field, long a) {
  const mpz_class& kap = field.kappa();
  if (a <= 0) throw std::invalid_argument("Triangle: trace must be positive");
  if (mpz_class(a) % kap != 0)
    throw std::invalid_argument("Triangle: trace must be a multiple of kappa");
  Triangle t;
  t.a = a;
  t.m = mpz_class(mpz_class(a) / kap).get_si();
  const TraceBasis& tb = field.trace_basis();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      t.coeff[i][j] = field.embed(tb.beta[j], i, 96).to_dinterval();
  for (int k = 0; k < 3; ++k) {
    int i = (k + 1) % 3, j = (k + 2) % 3;
    const auto& A = t.coeff;
    DInterval det = A[i][0] * A[j][1] - A[i][1] * A[j][0];
    DInterval rhs_i = A[i][2].mul_int(-t.m), rhs_j = A[j][2].mul_int(-t.m);
    t.vertices[k].first = (rhs_i * A[j][1] - A[i][1] * rhs_j) / det;
    t.vertices[k].second = (A[i][0] * rhs_j - rhs_i * A[j][0]) / det;
  }
  return t;
}

double Triangle::area() const {
  double x1 = vertices[0].first.mid(), y1 = vertices[0].second.mid();
  double x2 = vertices[1].first.mid(), y2 = vertices[1].second.mid();
  double x3 = vertices[2].first.mid(), y3 = vertices[2].second.mid();
  return 0.5 * std::abs(x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2));
}

double geometric_estimate(const Field& field, long a) {
  if (a <= 0) return 0.0;
  double kap = field.kappa().get_d();
  double D = field.disc().get_d();
  double ad = static_cast<double>(a);
  return kap * ad * ad / (2.0 * std::sqrt(D));
}

long long count_exact(const Field& field, long a) {
  if (a <= 0) return 0;
  SweepData S(field);
  return count_exact_impl(field, S, a);
}

long long count_naive(const Field& field, long a) {
  if (a <= 0) return 0;
  if (a > 10000) throw std::invalid_argument("count_naive: a exceeds the cost guard");
  SweepData S(field);
  if (a % S.kappa != 0) return 0;
  const long m = a / S.kappa;
  long c1_from = static_cast<long>(std::floor(S.x_lo * m)) - 1;
  long c1_to = static_cast<long>(std::ceil(S.x_hi * m)) + 1;
  long c2_from = static_cast<long>(std::floor(S.y_lo * m)) - 1;
  long c2_to = static_cast<long>(std::ceil(S.y_hi * m)) + 1;
  long long total = 0;
  for (long c1 = c1_from; c1 <= c1_to; ++c1)
    for (long c2 = c2_from; c2 <= c2_to; ++c2)
      if (point_inside(field, S, c1, c2, m)) ++total;
  return total;
}

CountSeries error_series(const Field& field, long X, int threads) {
  if (X < 1) throw std::invalid_argument("error_series: X must be >= 1");
  SweepData S(field);
  CountSeries cs;
  cs.X = X;
  cs.N.assign(X + 1, 0);
  cs.r.assign(X + 1, 0.0);
  cs.E.assign(X + 1, 0.0);

  const long chunk = 64;
  std::size_t nchunks = static_cast<std::size_t>((X + chunk - 1) / chunk);
  parallel_chunks(nchunks, threads, [&](std::size_t ci) {
    long a0 = static_cast<long>(ci) * chunk + 1;
    long a1 = std::min(X, a0 + chunk - 1);
    for (long a = a0; a <= a1; ++a) {
      if (a % S.kappa != 0) continue;  // N, r, E stay 0
      long long n = count_exact_impl(field, S, a);
      double r = geometric_estimate(field, a);
      cs.N[a] = n;
      cs.r[a] = r;
      cs.E[a] = static_cast<double>(n) - r;
    }
  });
  return cs;
}

}  // namespace tracecensus
