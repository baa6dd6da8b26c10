#include "tracecensus/lseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tracecensus/util.hpp"

namespace tracecensus {

namespace {

constexpr double kMembershipMargin = 1e-6;

// fundamental-domain data for the full unit lattice (log vectors of eps1, eps2)
struct FundDomain {
  const Field* F;
  FieldElement eps1, eps2;
  double v1[2], v2[2];  // lattice basis vectors
  double ainv[2][2];    // inverse of the matrix with columns v1, v2
  double W[3][3];       // W[i][j] ~ omega_j^(i)
  double Winv[3][3];
  long prec = 192;

  FundDomain(const Field& field, const UnitSystem& us) : F(&field) {
    eps1 = us.eps1;
    eps2 = us.eps2;
    prec = default_precision();
    auto [x1, y1] = log_pair(field, eps1, prec);
    auto [x2, y2] = log_pair(field, eps2, prec);
    v1[0] = x1.mid();
    v1[1] = y1.mid();
    v2[0] = x2.mid();
    v2[1] = y2.mid();
    double det = v1[0] * v2[1] - v1[1] * v2[0];
    ainv[0][0] = v2[1] / det;
    ainv[0][1] = -v2[0] / det;
    ainv[1][0] = -v1[1] / det;
    ainv[1][1] = v1[0] / det;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        FieldElement ej;
        ej.c[j] = 1;
        W[i][j] = field.embed(ej, i, 60).mid_double();
      }
    double d = W[0][0] * (W[1][1] * W[2][2] - W[1][2] * W[2][1]) -
               W[0][1] * (W[1][0] * W[2][2] - W[1][2] * W[2][0]) +
               W[0][2] * (W[1][0] * W[2][1] - W[1][1] * W[2][0]);
    Winv[0][0] = (W[1][1] * W[2][2] - W[1][2] * W[2][1]) / d;
    Winv[0][1] = (W[0][2] * W[2][1] - W[0][1] * W[2][2]) / d;
    Winv[0][2] = (W[0][1] * W[1][2] - W[0][2] * W[1][1]) / d;
    Winv[1][0] = (W[1][2] * W[2][0] - W[1][0] * W[2][2]) / d;
    Winv[1][1] = (W[0][0] * W[2][2] - W[0][2] * W[2][0]) / d;
    Winv[1][2] = (W[0][2] * W[1][0] - W[0][0] * W[1][2]) / d;
    Winv[2][0] = (W[1][0] * W[2][1] - W[1][1] * W[2][0]) / d;
    Winv[2][1] = (W[0][1] * W[2][0] - W[0][0] * W[2][1]) / d;
    Winv[2][2] = (W[0][0] * W[1][1] - W[0][1] * W[1][0]) / d;
  }

  // embedding radius bounds: |z^(i)| <= exp(ymax_i) * Nmax^(1/3)
  void radii(long long Nmax, double out[3]) const {
    double ymax0 = std::max(0.0, v1[0]) + std::max(0.0, v2[0]);
    double ymax1 = std::max(0.0, v1[1]) + std::max(0.0, v2[1]);
    double ymax2 = std::max(0.0, -(v1[0] + v1[1])) + std::max(0.0, -(v2[0] + v2[1]));
    double r3 = std::cbrt(static_cast<double>(Nmax));
    out[0] = std::exp(ymax0) * r3 * (1 + 1e-9);
    out[1] = std::exp(ymax1) * r3 * (1 + 1e-9);
    out[2] = std::exp(ymax2) * r3 * (1 + 1e-9);
  }

  // Exact lattice-point test: z * eps^-m equal to a rational integer up to
  // sign means the normalized log vector of z is exactly the lattice point
  // m. Covers units and integer multiples of units, the cases that actually
  // land on the fundamental-domain boundary.
  bool corner_hit(const FieldElement& z, long m1, long m2) const {
    FieldElement w = F->mul(z, F->mul(F->pow(eps1, -m1), F->pow(eps2, -m2)));
    FieldElement w3 = F->mul(w, F->mul(w, w));
    mpz_class n = F->norm(w);
    FieldElement nz = F->mul_int(F->one(), n);
    return w3 == nz || w3 == F->neg(nz);
  }

  // half-open membership s in [0,1)^2 of the normalized log vector
  bool member(const FieldElement& z, long long normabs) const {
    // fast double path; requires each |z^(i)| to dominate its evaluation
    // error by enough to keep the s-error below the decision margin
    double e[3];
    bool fast_ok = true;
    for (int i = 0; i < 3 && fast_ok; ++i) {
      double v = 0, scale = 0;
      for (int j = 0; j < 3; ++j) {
        double term = W[i][j] * z.c[j].get_d();
        v += term;
        scale += std::abs(term);
      }
      e[i] = std::abs(v);
      if (!(e[i] > 1e-7 * scale + 1e-300)) fast_ok = false;
    }
    if (fast_ok) {
      double t = std::log(static_cast<double>(normabs)) / 3.0;
      double yy0 = std::log(e[0]) - t;
      double yy1 = std::log(e[1]) - t;
      double s0 = ainv[0][0] * yy0 + ainv[0][1] * yy1;
      double s1 = ainv[1][0] * yy0 + ainv[1][1] * yy1;
      double d0 = std::abs(s0 - std::round(s0));
      double d1 = std::abs(s1 - std::round(s1));
      if (d0 > kMembershipMargin && d1 > kMembershipMargin)
        return std::floor(s0) == 0.0 && std::floor(s1) == 0.0;
    }
    // certified path with escalation
    for (long p = prec; p <= 4096; p *= 2) {
      auto [lx, ly] = log_pair(*F, z, p);
      HPInterval t =
          HPInterval::from_long(static_cast<long>(normabs), p).log() /
          HPInterval::from_long(3, p);
      HPInterval yy0 = lx - t, yy1 = ly - t;
      auto [b1x, b1y] = log_pair(*F, eps1, p);
      auto [b2x, b2y] = log_pair(*F, eps2, p);
      HPInterval det = b1x * b2y - b1y * b2x;
      HPInterval s0 = (yy0 * b2y - yy1 * b2x) / det;
      HPInterval s1 = (yy1 * b1x - yy0 * b1y) / det;
      bool straddle = false;
      long k0 = 0, k1 = 0;
      auto classify = [&straddle](const HPInterval& s, long& k) {
        double fl = std::floor(s.mid());
        k = static_cast<long>(fl);
        if (s.lo_d() > fl && s.hi_d() < fl + 1.0) return;  // strictly inside
        straddle = true;
        k = std::lround(s.mid());  // the straddled integer
      };
      classify(s0, k0);
      classify(s1, k1);
      if (!straddle) return k0 == 0 && k1 == 0;
      long m1 = std::lround(s0.mid()), m2 = std::lround(s1.mid());
      if (corner_hit(z, m1, m2)) return m1 == 0 && m2 == 0;
      // not an exact lattice point: refine and retry
    }
    throw std::logic_error("fundamental-domain membership unresolved at max precision");
  }
};

std::array<int, 3> signs_of(const Field& F, const FundDomain& fd, const FieldElement& z) {
  std::array<int, 3> s{};
  for (int i = 0; i < 3; ++i) {
    double v = 0, scale = 0;
    for (int j = 0; j < 3; ++j) {
      double term = fd.W[i][j] * z.c[j].get_d();
      v += term;
      scale += std::abs(term);
    }
    if (std::abs(v) > 1e-11 * scale + 1e-300)
      s[i] = v < 0 ? 1 : 0;
    else
      s[i] = F.certified_sign(z, i) < 0 ? 1 : 0;
  }
  return s;
}

constexpr long kC2PerChunk = 4;

std::array<long, 3> coord_caps(const FundDomain& fd, long long B) {
  double R[3];
  fd.radii(B, R);
  std::array<long, 3> cap{};
  for (int j = 0; j < 3; ++j) {
    double s = std::abs(fd.Winv[j][0]) * R[0] + std::abs(fd.Winv[j][1]) * R[1] +
               std::abs(fd.Winv[j][2]) * R[2];
    cap[j] = static_cast<long>(std::ceil(s)) + 1;
  }
  return cap;
}

std::size_t chunk_count(const FundDomain& fd, long long B) {
  return static_cast<std::size_t>(coord_caps(fd, B)[2] / kC2PerChunk) + 1;
}

// Core box scan. visit(chunk_index, gen) runs concurrently, one chunk per
// worker at a time; chunk indices partition the outer coordinate.
void enumerate_core(const Field& field, const FundDomain& fd, long long B,
                    int threads,
                    const std::function<void(std::size_t, const IdealGen&)>& visit) {
  double R[3];
  fd.radii(B, R);
  std::array<long, 3> cap = coord_caps(fd, B);

  const auto& nf = field.norm_form();
  long long nfl[10];
  double worst = 0;
  for (int t = 0; t < 10; ++t) {
    if (!nf[t].fits_slong_p())
      throw std::runtime_error("norm form coefficients exceed machine range");
    nfl[t] = nf[t].get_si();
    worst += std::abs(static_cast<double>(nfl[t]));
  }
  double cmax = static_cast<double>(std::max({cap[0], cap[1], cap[2]}));
  if (worst * cmax * cmax * cmax > 1e35)
    throw std::runtime_error("enumeration coordinates exceed exact range");

  std::size_t nchunks = static_cast<std::size_t>(cap[2] / kC2PerChunk) + 1;

  parallel_chunks(nchunks, threads, [&](std::size_t ci) {
    long c2_from = static_cast<long>(ci) * kC2PerChunk;
    long c2_to = std::min<long>(cap[2], c2_from + kC2PerChunk - 1);
    for (long c2 = c2_from; c2 <= c2_to; ++c2) {
      long c1lo = (c2 == 0) ? 0 : -cap[1];
      for (long c1 = c1lo; c1 <= cap[1]; ++c1) {
        double t[3];
        double lo = -1e300, hi = 1e300;
        for (int i = 0; i < 3; ++i) {
          t[i] = c1 * fd.W[i][1] + c2 * fd.W[i][2];
          lo = std::max(lo, -R[i] - t[i]);
          hi = std::min(hi, R[i] - t[i]);
        }
        if (hi < lo - 0.5) continue;
        __int128 a3 = nfl[Field::monomial_index(3, 0, 0)];
        __int128 a2 = 0, a1 = 0, a0 = 0;
        auto add_term = [&](int i, int j, int k, __int128& acc) {
          __int128 term = nfl[Field::monomial_index(i, j, k)];
          for (int q = 0; q < j; ++q) term *= c1;
          for (int q = 0; q < k; ++q) term *= c2;
          acc += term;
        };
        add_term(2, 1, 0, a2);
        add_term(2, 0, 1, a2);
        add_term(1, 2, 0, a1);
        add_term(1, 1, 1, a1);
        add_term(1, 0, 2, a1);
        add_term(0, 3, 0, a0);
        add_term(0, 2, 1, a0);
        add_term(0, 1, 2, a0);
        add_term(0, 0, 3, a0);
        long from = static_cast<long>(std::ceil(lo - 1e-9));
        long to = static_cast<long>(std::floor(hi + 1e-9));
        for (long c0 = from; c0 <= to; ++c0) {
          if (c2 == 0 && c1 == 0 && c0 <= 0) continue;  // canonical reps only
          __int128 n = ((a3 * c0 + a2) * c0 + a1) * c0 + a0;
          if (n == 0) continue;
          unsigned __int128 na = n < 0 ? static_cast<unsigned __int128>(-n)
                                       : static_cast<unsigned __int128>(n);
          if (na > static_cast<unsigned __int128>(B)) continue;
          FieldElement z = field.from_coords(c0, c1, c2);
          long long normabs = static_cast<long long>(na);
          if (!fd.member(z, normabs)) continue;
          visit(ci, {z, normabs, signs_of(field, fd, z)});
        }
      }
    }
  });
}

}  // namespace

void for_each_principal(const Field& field, const UnitSystem& us, long long B,
                        int threads,
                        const std::function<void(const IdealGen&)>& fn) {
  if (B < 1) throw std::invalid_argument("enumerate_principal: B must be >= 1");
  FundDomain fd(field, us);
  std::vector<std::vector<IdealGen>> found(chunk_count(fd, B));
  enumerate_core(field, fd, B, threads,
                 [&](std::size_t ci, const IdealGen& g) { found[ci].push_back(g); });
  for (const auto& chunk : found)
    for (const auto& g : chunk) fn(g);
}

PrincipalIdealStream enumerate_principal(const Field& field,
                                         const TotallyPositiveGens& tp,
                                         const UnitSystem& us, long long B) {
  (void)tp;
  if (B > 100000000LL)
    throw std::invalid_argument("enumerate_principal: B beyond the memory guard (10^8)");
  PrincipalIdealStream s;
  s.B = B;
  for_each_principal(field, us, B, 0, [&](const IdealGen& g) { s.items.push_back(g); });
  std::sort(s.items.begin(), s.items.end(), [](const IdealGen& a, const IdealGen& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    for (int k = 2; k >= 0; --k)
      if (a.gen.c[k] != b.gen.c[k]) return a.gen.c[k] < b.gen.c[k];
    return false;
  });
  return s;
}

LValue l_value(const Field& field, const TotallyPositiveGens& tp,
               const UnitSystem& us, const SignCharacter& v, long long B,
               int threads) {
  (void)tp;
  if (v.is_trivial())
    throw std::invalid_argument("l_value: trivial character has a pole at s = 1");
  auto good = good_characters(field, us);
  if (std::find(good.begin(), good.end(), v) == good.end())
    throw std::invalid_argument(
        "l_value: character is not good (not well defined on principal ideals)");
  if (B < 10 || B > 10000000LL)
    throw std::invalid_argument("l_value: cutoff B out of range [10, 10^7]");

  const long long Nmax1 = 35 * B;
  const long long Nmax2 = 70 * B;
  const double Bd = static_cast<double>(B);

  FundDomain fd(field, us);
  // per-chunk compensated partials merged in chunk order: bitwise stable
  // for any thread count
  struct Pair {
    NeumaierSum s1, s2;
  };
  std::vector<Pair> parts(chunk_count(fd, Nmax2));
  enumerate_core(field, fd, Nmax2, threads, [&](std::size_t ci, const IdealGen& g) {
    int val = v.value_on(g.signs);
    double nd = static_cast<double>(g.norm);
    double base = static_cast<double>(val) / nd;
    if (g.norm <= Nmax1) parts[ci].s1.add(base * std::exp(-nd / Bd));
    parts[ci].s2.add(base * std::exp(-nd / (2.0 * Bd)));
  });

  NeumaierSum s1, s2;
  for (const auto& p : parts) {
    s1.add(p.s1);
    s2.add(p.s2);
  }
  double S1 = s1.value(), S2 = s2.value();

  LValue out;
  out.chi = v;
  out.B_used = B;
  out.value = 2.0 * S2 - S1;
  // cutoff difference, floored at summation noise
  out.error_estimate =
      std::max(std::abs(S2 - S1),
               64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(S2)));
  return out;
}

}  // namespace tracecensus
