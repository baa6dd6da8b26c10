#include "tracecensus/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tracecensus/util.hpp"

namespace tracecensus {

namespace {

HPInterval log_abs_embedding(const Field& F, const FieldElement& z, int i, long prec) {
  QInterval e = F.embed(z, i, prec + 16);
  if (e.sign() == 0) {
    // |z^(i)| is bounded away from 0 by the norm bound; refine until the
    // interval leaves 0
    long p = prec + 16;
    while (e.sign() == 0 && p < 1 << 20) {
      p *= 2;
      e = F.embed(z, i, p);
    }
    if (e.sign() == 0) throw std::logic_error("embedding interval stuck at 0");
  }
  if (e.sign() < 0) e = -e;
  return HPInterval::from_q(e, prec).log();
}

struct LatticeVec {
  HPInterval x, y;
  FieldElement u;

  double nrm2() const {
    double mx = x.mid(), my = y.mid();
    return mx * mx + my * my;
  }
};

// canonical choice among {z, -z}: highest nonzero coordinate positive
FieldElement canonical_sign(const Field& F, const FieldElement& z) {
  for (int k = 2; k >= 0; --k) {
    if (z.c[k] > 0) return z;
    if (z.c[k] < 0) return F.neg(z);
  }
  return z;
}

// one shell of the unit search: all canonical units with every |z^(i)| <= e^b
std::vector<FieldElement> scan_shell(const Field& F, double b) {
  const double E = std::exp(b);
  // embedding matrix midpoints and caps from its inverse
  double W[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      FieldElement ej;
      ej.c[j] = 1;
      W[i][j] = F.embed(ej, i, 60).mid_double();
    }
  // inverse of W
  double det = W[0][0] * (W[1][1] * W[2][2] - W[1][2] * W[2][1]) -
               W[0][1] * (W[1][0] * W[2][2] - W[1][2] * W[2][0]) +
               W[0][2] * (W[1][0] * W[2][1] - W[1][1] * W[2][0]);
  double inv[3][3];
  inv[0][0] = (W[1][1] * W[2][2] - W[1][2] * W[2][1]) / det;
  inv[0][1] = (W[0][2] * W[2][1] - W[0][1] * W[2][2]) / det;
  inv[0][2] = (W[0][1] * W[1][2] - W[0][2] * W[1][1]) / det;
  inv[1][0] = (W[1][2] * W[2][0] - W[1][0] * W[2][2]) / det;
  inv[1][1] = (W[0][0] * W[2][2] - W[0][2] * W[2][0]) / det;
  inv[1][2] = (W[0][2] * W[1][0] - W[0][0] * W[1][2]) / det;
  inv[2][0] = (W[1][0] * W[2][1] - W[1][1] * W[2][0]) / det;
  inv[2][1] = (W[0][1] * W[2][0] - W[0][0] * W[2][1]) / det;
  inv[2][2] = (W[0][0] * W[1][1] - W[0][1] * W[1][0]) / det;

  long cap[3];
  for (int j = 0; j < 3; ++j) {
    double s = std::abs(inv[j][0]) + std::abs(inv[j][1]) + std::abs(inv[j][2]);
    cap[j] = static_cast<long>(std::ceil(s * E)) + 1;
  }
  // cost ~ (c1,c2) pairs plus lattice points inside the embedding box
  double pairs = (2.0 * cap[1] + 1) * (2.0 * cap[2] + 1);
  double volume = 8.0 * std::exp(3.0 * b) / std::sqrt(F.disc().get_d());
  if (pairs + volume > 2e9)
    throw std::runtime_error("unit search box too large at bound " + std::to_string(b));

  // norm form with int64 coefficients (fields at this scale are tiny);
  // verify the int128 evaluation cannot overflow
  const auto& nf = F.norm_form();
  double worst = 0.0;
  long long nfl[10];
  for (int t = 0; t < 10; ++t) {
    if (!nf[t].fits_slong_p())
      throw std::runtime_error("norm form coefficients too large for unit search");
    nfl[t] = nf[t].get_si();
    worst += std::abs(static_cast<double>(nfl[t]));
  }
  double cmax = static_cast<double>(std::max({cap[0], cap[1], cap[2]}));
  if (worst * cmax * cmax * cmax > 1e35)
    throw std::runtime_error("unit search coordinates exceed exact range");

  const double Etol = E * (1 + 1e-9) + 1e-12;
  std::vector<FieldElement> out;
  for (long c2 = 0; c2 <= cap[2]; ++c2) {
    long c1lo = (c2 == 0) ? 0 : -cap[1];
    for (long c1 = c1lo; c1 <= cap[1]; ++c1) {
      // c0 range from the three embedding constraints
      double lo = -1e300, hi = 1e300;
      double t[3];
      for (int i = 0; i < 3; ++i) {
        t[i] = c1 * W[i][1] + c2 * W[i][2];
        lo = std::max(lo, -E - t[i]);
        hi = std::min(hi, E - t[i]);
      }
      if (hi < lo - 0.5) continue;
      // cubic in c0: nf evaluated at fixed (c1, c2)
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
        if (c0 == 0 && c1 == 0 && c2 == 0) continue;
        __int128 n = ((a3 * c0 + a2) * c0 + a1) * c0 + a0;
        if (n != 1 && n != -1) continue;
        bool inside = true;
        for (int i = 0; i < 3 && inside; ++i)
          inside = std::abs(c0 + t[i]) <= Etol;
        if (!inside) continue;
        FieldElement z = F.from_coords(c0, c1, c2);
        z = canonical_sign(F, z);
        if (z == F.one()) continue;  // torsion
        out.push_back(z);
      }
    }
  }
  return out;
}

// incremental rank-2 lattice basis from unit log vectors, tracking elements
class UnitLattice {
 public:
  UnitLattice(const Field& F, long prec) : F_(&F), prec_(prec) {}

  void insert(const FieldElement& u) {
    auto [lx, ly] = log_pair(*F_, u, prec_);
    LatticeVec w{lx, ly, u};
    fold(w);
  }

  bool full_rank() const { return basis_.size() == 2; }
  const LatticeVec& b(int i) const { return basis_[i]; }

  // distance of the coordinates of w (against the current basis) to the
  // nearest integer pair; requires full rank
  double coord_residual(const LatticeVec& w) const {
    HPInterval det = basis_[0].x * basis_[1].y - basis_[0].y * basis_[1].x;
    HPInterval s = (w.x * basis_[1].y - w.y * basis_[1].x) / det;
    HPInterval t = (w.y * basis_[0].x - w.x * basis_[0].y) / det;
    double ds = std::abs(s.mid() - std::round(s.mid()));
    double dt = std::abs(t.mid() - std::round(t.mid()));
    return std::max(ds, dt);
  }
  LatticeVec make_vec(const FieldElement& u) const {
    auto [lx, ly] = log_pair(*F_, u, prec_);
    return {lx, ly, u};
  }

 private:
  static double dot_mid(const LatticeVec& a, const LatticeVec& b) {
    return a.x.mid() * b.x.mid() + a.y.mid() * b.y.mid();
  }

  void reduce_against(LatticeVec& w, const LatticeVec& v) const {
    double denom = dot_mid(v, v);
    if (denom <= 0) return;
    long k = std::lround(dot_mid(w, v) / denom);
    if (k == 0) return;
    HPInterval kq = HPInterval::from_long(k, prec_);
    w.x = w.x - kq * v.x;
    w.y = w.y - kq * v.y;
    w.u = F_->mul(w.u, F_->pow(F_->unit_inverse(v.u), k));
  }

  void fold(LatticeVec w) {
    for (int pass = 0; pass < 8; ++pass) {
      bool moved = false;
      for (const auto& v : basis_) {
        double before = w.nrm2();
        reduce_against(w, v);
        if (w.nrm2() < before * (1 - 1e-12)) moved = true;
      }
      if (!moved) break;
    }
    if (w.nrm2() > kTol2) {
      basis_.push_back(std::move(w));
      relagrange();
    }
  }

  void relagrange() {
    // pairwise reduce until stable, drop near-zero vectors, keep <= 2
    for (int iter = 0; iter < 64; ++iter) {
      std::sort(basis_.begin(), basis_.end(),
                [](const LatticeVec& a, const LatticeVec& b) { return a.nrm2() < b.nrm2(); });
      bool changed = false;
      for (std::size_t i = 1; i < basis_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          double before = basis_[i].nrm2();
          reduce_against(basis_[i], basis_[j]);
          if (basis_[i].nrm2() < before * (1 - 1e-12)) changed = true;
        }
      }
      basis_.erase(std::remove_if(basis_.begin(), basis_.end(),
                                  [](const LatticeVec& v) { return v.nrm2() <= kTol2; }),
                   basis_.end());
      if (!changed) break;
    }
    if (basis_.size() > 2)
      throw std::logic_error("unit log vectors of rank > 2");
  }

  static constexpr double kTol2 = 1e-36;  // squared length below this is zero

  const Field* F_;
  long prec_;
  std::vector<LatticeVec> basis_;
};

}  // namespace

std::pair<HPInterval, HPInterval> log_pair(const Field& F, const FieldElement& z, long prec) {
  return {log_abs_embedding(F, z, 0, prec), log_abs_embedding(F, z, 1, prec)};
}

std::pair<HPInterval, HPInterval> lambda_pair(const Field& F, const FieldElement& z, long prec) {
  HPInterval l3 = log_abs_embedding(F, z, 2, prec);
  return {log_abs_embedding(F, z, 0, prec) - l3, log_abs_embedding(F, z, 1, prec) - l3};
}

std::array<int, 3> signature_of(const Field& F, const FieldElement& z) {
  std::array<int, 3> s{};
  for (int i = 0; i < 3; ++i) s[i] = F.certified_sign(z, i) < 0 ? 1 : 0;
  return s;
}

int character_value(const Field& F, const SignCharacter& v, const FieldElement& z) {
  return v.value_on(signature_of(F, z));
}

UnitSystem find_units(const Field& field, double bound) {
  if (bound <= 0) throw std::invalid_argument("find_units: bound must be positive");
  const long prec = default_precision();
  const double cap = std::min(bound, 40.0);

  std::vector<double> shells;
  for (double b = 2.0; b < cap; b += 2.0) shells.push_back(b);
  shells.push_back(cap);

  std::vector<FieldElement> units;
  double scanned = 0.0;
  bool have_pair = false;
  UnitLattice lat(field, prec);

  for (std::size_t si = 0; si < shells.size(); ++si) {
    units = scan_shell(field, shells[si]);
    scanned = shells[si];
    lat = UnitLattice(field, prec);
    for (const auto& u : units) lat.insert(u);
    if (lat.full_rank()) {
      have_pair = true;
      // one confirmation shell: absorbing more units must not shrink the
      // lattice (guards against a fundamental pair hiding above the first
      // successful bound)
      if (si + 1 < shells.size()) {
        try {
          auto more = scan_shell(field, shells[si + 1]);
          for (const auto& u : more) lat.insert(u);
          units = std::move(more);
          scanned = shells[si + 1];
        } catch (const std::runtime_error&) {
          // confirmation box too large; keep the verified shell
        }
      }
      break;
    }
  }
  if (!have_pair) throw std::runtime_error("bound too small: no fundamental unit pair found");

  // every enumerated unit must have integer coordinates in the final basis
  for (const auto& u : units) {
    double resid = lat.coord_residual(lat.make_vec(u));
    if (resid > 1e-12)
      throw std::logic_error("unit outside the generated log lattice (residual " +
                             std::to_string(resid) + ")");
  }

  UnitSystem us;
  us.eps1 = canonical_sign(field, lat.b(0).u);
  us.eps2 = canonical_sign(field, lat.b(1).u);
  us.found_units = units;
  us.search_bound = scanned;

  HPInterval det = lat.b(0).x * lat.b(1).y - lat.b(0).y * lat.b(1).x;
  HPInterval reg = det.abs();
  us.reg = reg.mid();
  us.reg_err = 0.5 * reg.width() + 1e-15 * std::abs(us.reg);
  if (us.reg_err > 1e-12)
    throw std::logic_error("regulator error bound exceeds 1e-12");

  us.log_basis[0] = {lat.b(0).x.mid(), lat.b(0).y.mid()};
  us.log_basis[1] = {lat.b(1).x.mid(), lat.b(1).y.mid()};

  us.signatures[0] = {1, 1, 1};  // -1
  us.signatures[1] = signature_of(field, us.eps1);
  us.signatures[2] = signature_of(field, us.eps2);
  return us;
}

double regulator(const UnitSystem& us) { return us.reg; }

double regulator_of_pair(const Field& field, const FieldElement& u1,
                         const FieldElement& u2, double* err) {
  const long prec = default_precision();
  for (const auto* u : {&u1, &u2}) {
    mpz_class n = field.norm(*u);
    if (n != 1 && n != -1)
      throw std::invalid_argument("regulator_of_pair: element is not a unit");
  }
  auto [x1, y1] = log_pair(field, u1, prec);
  auto [x2, y2] = log_pair(field, u2, prec);
  HPInterval det = (x1 * y2 - y1 * x2).abs();
  if (err) *err = 0.5 * det.width();
  return det.mid();
}

TotallyPositiveGens totally_positive_gens(const Field& field, const UnitSystem& us) {
  const auto& s1 = us.signatures[1];
  const auto& s2 = us.signatures[2];

  // V = {(a,b) in GF(2)^2 : a s1 + b s2 in {000, 111}}
  auto cls = [&](int a, int b) {
    std::array<int, 3> s{};
    for (int i = 0; i < 3; ++i) s[i] = (a * s1[i] + b * s2[i]) % 2;
    bool zero = s == std::array<int, 3>{0, 0, 0};
    bool ones = s == std::array<int, 3>{1, 1, 1};
    return zero ? 0 : (ones ? 1 : -1);  // -1 = not in V
  };
  std::vector<std::array<long, 2>> gens;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      if (a == 0 && b == 0) continue;
      if (cls(a, b) >= 0) gens.push_back({a, b});
    }

  std::array<std::array<long, 2>, 2> basis{};
  if (gens.size() == 3) {  // V = GF(2)^2
    basis[0] = {1, 0};
    basis[1] = {0, 1};
  } else if (gens.empty()) {  // V = {0}: squares only
    basis[0] = {2, 0};
    basis[1] = {0, 2};
  } else {  // dim 1: generator plus an independent doubled vector
    basis[0] = gens[0];
    basis[1] = (gens[0] == std::array<long, 2>{0, 1}) ? std::array<long, 2>{2, 0}
                                                      : std::array<long, 2>{0, 2};
  }

  TotallyPositiveGens tp;
  tp.exponents = basis;
  std::array<FieldElement, 2> u;
  for (int l = 0; l < 2; ++l) {
    FieldElement w = field.mul(field.pow(us.eps1, basis[l][0]),
                               field.pow(us.eps2, basis[l][1]));
    int c = cls(static_cast<int>(basis[l][0] % 2), static_cast<int>(basis[l][1] % 2));
    if (c == 1) {
      w = field.neg(w);
      tp.sign[l] = -1;
    }
    auto sig = signature_of(field, w);
    if (sig != std::array<int, 3>{0, 0, 0})
      throw std::logic_error("totally positive generator has a negative embedding");
    u[l] = w;
  }
  tp.u1 = u[0];
  tp.u2 = u[1];

  const long prec = default_precision();
  auto [l1x, l1y] = lambda_pair(field, tp.u1, prec);
  auto [l2x, l2y] = lambda_pair(field, tp.u2, prec);
  tp.lambda[0] = {l1x.mid(), l1y.mid()};
  tp.lambda[1] = {l2x.mid(), l2y.mid()};
  HPInterval det = l1x * l2y - l1y * l2x;
  tp.dual[0] = {(l2y / det).mid(), (-(l2x) / det).mid()};
  tp.dual[1] = {(-(l1y) / det).mid(), (l1x / det).mid()};
  return tp;
}

std::vector<SignCharacter> good_characters(const Field& field, const UnitSystem& us) {
  (void)field;
  std::vector<SignCharacter> out;
  for (int e0 = 0; e0 < 2; ++e0)
    for (int e1 = 0; e1 < 2; ++e1)
      for (int e2 = 0; e2 < 2; ++e2) {
        SignCharacter v{{e0, e1, e2}};
        if (v.weight() % 2 != 0) continue;  // v(-1) must be +1
        if (v.value_on(us.signatures[1]) != 1) continue;
        if (v.value_on(us.signatures[2]) != 1) continue;
        out.push_back(v);
      }
  return out;
}

std::vector<DualLatticePoint> good_mu_for(const Field& field, const SignCharacter& v,
                                          const TotallyPositiveGens& tp,
                                          const UnitSystem& us, double radius) {
  std::vector<DualLatticePoint> out;
  if (radius < 0) return out;
  if (v.weight() % 2 != 0) return out;  // condition at -1 fails for every mu

  const long prec = default_precision();
  auto [l1x, l1y] = lambda_pair(field, tp.u1, prec);
  auto [l2x, l2y] = lambda_pair(field, tp.u2, prec);
  HPInterval det = l1x * l2y - l1y * l2x;
  // dual basis rows
  HPInterval m1x = l2y / det, m1y = -(l2x) / det;
  HPInterval m2x = -(l1y) / det, m2y = l1x / det;

  auto [e1x, e1y] = lambda_pair(field, us.eps1, prec);
  auto [e2x, e2y] = lambda_pair(field, us.eps2, prec);
  int v1 = v.value_on(us.signatures[1]);
  int v2 = v.value_on(us.signatures[2]);

  double n1 = std::hypot(tp.lambda[0][0], tp.lambda[0][1]);
  double n2 = std::hypot(tp.lambda[1][0], tp.lambda[1][1]);
  long cap1 = static_cast<long>(std::floor(radius * n1 + 1e-9)) + 1;
  long cap2 = static_cast<long>(std::floor(radius * n2 + 1e-9)) + 1;

  for (long k1 = -cap1; k1 <= cap1; ++k1) {
    for (long k2 = -cap2; k2 <= cap2; ++k2) {
      HPInterval q1 = HPInterval::from_long(k1, prec);
      HPInterval q2 = HPInterval::from_long(k2, prec);
      HPInterval mx = q1 * m1x + q2 * m2x;
      HPInterval my = q1 * m1y + q2 * m2y;
      double nx = mx.mid(), ny = my.mid();
      if (nx * nx + ny * ny > radius * radius) continue;
      bool good = true;
      for (int which = 0; which < 2 && good; ++which) {
        const HPInterval& ex = which == 0 ? e1x : e2x;
        const HPInterval& ey = which == 0 ? e1y : e2y;
        int ve = which == 0 ? v1 : v2;
        HPInterval d = mx * ex + my * ey;
        double dd = d.mid();
        double h2 = std::round(2.0 * dd);
        if (std::abs(2.0 * dd - h2) > 0.5)
          throw std::logic_error("pairing with unit lambda not a half-integer");
        long h2i = static_cast<long>(h2);
        bool integer = (h2i % 2) == 0;
        // exp(2 pi i <mu, lambda(eps)>) = +1 on integers, -1 on half-odds
        if (integer != (ve == 1)) good = false;
      }
      if (good) out.push_back({k1, k2, nx, ny});
    }
  }
  std::sort(out.begin(), out.end(), [](const DualLatticePoint& a, const DualLatticePoint& b) {
    return std::pair(a.m1, a.m2) < std::pair(b.m1, b.m2);
  });
  return out;
}

}  // namespace tracecensus
