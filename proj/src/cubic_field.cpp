#include "tracecensus/cubic_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace tracecensus {

namespace {

// ---- small exact helpers ----------------------------------------------

mpz_class nearest_quotient(const mpz_class& n, const mpz_class& d) {
  // round(n/d) with d != 0; ties rounded toward +infinity (any fixed rule works)
  mpz_class dd = d < 0 ? mpz_class(-d) : d;
  mpz_class nn = d < 0 ? mpz_class(-n) : n;
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), mpz_class(2 * nn + dd).get_mpz_t(), mpz_class(2 * dd).get_mpz_t());
  return q;
}

// dense univariate polynomial over mpq, coeffs[i] * x^i
using QPoly = std::vector<mpq_class>;

void trim(QPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

QPoly poly_rem(QPoly f, const QPoly& g) {
  // remainder of f by g (g nonzero)
  while (f.size() >= g.size() && !f.empty()) {
    mpq_class q = f.back() / g.back();
    std::size_t shift = f.size() - g.size();
    for (std::size_t i = 0; i < g.size(); ++i) f[shift + i] -= q * g[i];
    f.pop_back();
    trim(f);
  }
  return f;
}

mpq_class poly_eval(const QPoly& f, const mpq_class& x) {
  mpq_class v = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) v = v * x + *it;
  return v;
}

int sgn(const mpq_class& x) { return mpq_sgn(x.get_mpq_t()); }

// sign variations of the Sturm chain at x
int variations(const std::vector<QPoly>& chain, const mpq_class& x) {
  int var = 0, prev = 0;
  for (const auto& f : chain) {
    int s = sgn(poly_eval(f, x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++var;
    prev = s;
  }
  return var;
}

// exact sign of p(n/d) for monic cubic p, d > 0
int eval_sign(const CubicPoly& p, const mpz_class& n, const mpz_class& d) {
  mpz_class v = n * n * n + p.a * n * n * d + p.b * n * d * d + p.c * d * d * d;
  return mpz_sgn(v.get_mpz_t());
}

// 3x3 mpq determinant
mpq_class det3(const QMat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

mpz_class det3z(const ZMat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

QMat3 inverse3(const QMat3& m) {
  mpq_class d = det3(m);
  if (d == 0) throw std::invalid_argument("basis matrix is singular");
  QMat3 r;
  r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / d;
  r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / d;
  r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / d;
  r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / d;
  r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / d;
  r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / d;
  r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / d;
  r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / d;
  r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / d;
  return r;
}

// z * w modulo p in power-basis coordinates (degree-2 representatives)
std::array<mpq_class, 3> mulmod_power(const CubicPoly& p,
                                      const std::array<mpq_class, 3>& z,
                                      const std::array<mpq_class, 3>& w) {
  // raw convolution, degree 4
  std::array<mpq_class, 5> t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i + j] += z[i] * w[j];
  // x^3 = -(a x^2 + b x + c), x^4 = (a^2-b) x^2 + (ab-c) x + ac
  mpq_class a(p.a), b(p.b), c(p.c);
  std::array<mpq_class, 3> r{t[0], t[1], t[2]};
  r[2] -= a * t[3];
  r[1] -= b * t[3];
  r[0] -= c * t[3];
  r[2] += (a * a - b) * t[4];
  r[1] += (a * b - c) * t[4];
  r[0] += a * c * t[4];
  return r;
}

// homogeneous cubic form in three variables, 10 dense coefficients
struct Cubic3 {
  std::array<mpz_class, 10> c{};
};

struct Lin3 {
  std::array<mpz_class, 3> c{};
};

// product of three linear forms, accumulated into `out` with sign
void accumulate_triple_product(Cubic3& out, int sign, const Lin3& f,
                               const Lin3& g, const Lin3& h) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        int e[3] = {0, 0, 0};
        ++e[i]; ++e[j]; ++e[k];
        mpz_class term = f.c[i] * g.c[j] * h.c[k];
        int idx = Field::monomial_index(e[0], e[1], e[2]);
        if (sign > 0)
          out.c[idx] += term;
        else
          out.c[idx] -= term;
      }
}

}  // namespace

// ---- basic polynomial facts --------------------------------------------

mpz_class poly_discriminant(const CubicPoly& p) {
  const mpz_class &a = p.a, &b = p.b, &c = p.c;
  return 18 * a * b * c - 4 * a * a * a * c + a * a * b * b - 4 * b * b * b -
         27 * c * c;
}

bool has_rational_root(const CubicPoly& p) {
  // monic integer cubic: rational roots are integer divisors of c
  if (p.c == 0) return true;
  mpz_class ac = abs(p.c);
  for (mpz_class d = 1; d * d <= ac; ++d) {
    if (ac % d != 0) continue;
    const mpz_class divisors[2] = {d, mpz_class(ac / d)};
    for (const mpz_class& r0 : divisors) {
      if (eval_sign(p, r0, 1) == 0 || eval_sign(p, mpz_class(-r0), 1) == 0)
        return true;
    }
  }
  return false;
}

// ---- root isolation ------------------------------------------------------

RealEmbeddings::RealEmbeddings(const CubicPoly& p) : p_(p) {
  // Sturm chain
  QPoly p0 = {mpq_class(p.c), mpq_class(p.b), mpq_class(p.a), mpq_class(1)};
  QPoly p1 = {mpq_class(p.b), mpq_class(2) * mpq_class(p.a), mpq_class(3)};
  QPoly p2 = poly_rem(p0, p1);
  for (auto& q : p2) q = -q;
  if (p2.empty()) throw std::logic_error("Sturm chain collapsed (repeated root?)");
  QPoly p3 = poly_rem(p1, p2);
  for (auto& q : p3) q = -q;
  std::vector<QPoly> chain = {p0, p1, p2};
  if (!p3.empty()) chain.push_back(p3);

  mpz_class M = 1 + std::max(abs(p.a), std::max(abs(p.b), abs(p.c)));
  mpq_class lo(-M), hi(M);
  auto count = [&](const mpq_class& a, const mpq_class& b) {
    return variations(chain, a) - variations(chain, b);
  };
  if (count(lo, hi) != 3)
    throw std::logic_error("expected three real roots inside the Cauchy bound");

  std::vector<QInterval> found;
  std::vector<QInterval> work = {{lo, hi}};
  while (!work.empty()) {
    QInterval iv = work.back();
    work.pop_back();
    int n = count(iv.lo, iv.hi);
    if (n == 0) continue;
    if (n == 1) {
      found.push_back(iv);
      continue;
    }
    mpq_class mid = (iv.lo + iv.hi) / 2;
    if (sgn(poly_eval(chain[0], mid)) == 0)
      throw std::logic_error("rational root hit during isolation");
    work.push_back({iv.lo, mid});
    work.push_back({mid, iv.hi});
  }
  if (found.size() != 3) throw std::logic_error("root isolation failed");
  std::sort(found.begin(), found.end(),
            [](const QInterval& x, const QInterval& y) { return x.lo > y.lo; });
  for (int i = 0; i < 3; ++i) {
    cur_[i] = found[i];
    lo_sign_[i] = eval_sign(p_, mpq_class(cur_[i].lo).get_num(),
                            mpq_class(cur_[i].lo).get_den());
    if (lo_sign_[i] == 0) throw std::logic_error("endpoint is a root");
  }
}

void RealEmbeddings::refine_locked(int i, long prec_bits) const {
  QInterval& iv = cur_[i];
  while (!narrower_than_2exp(iv, prec_bits)) {
    mpq_class mid = (iv.lo + iv.hi) / 2;
    int s = eval_sign(p_, mid.get_num(), mid.get_den());
    if (s == 0) throw std::logic_error("rational root hit during refinement");
    if (s == lo_sign_[i])
      iv.lo = mid;
    else
      iv.hi = mid;
  }
}

QInterval RealEmbeddings::root(int i, long prec_bits) const {
  if (i < 0 || i > 2) throw std::out_of_range("embedding index");
  std::lock_guard<std::mutex> lock(mu_);
  refine_locked(i, prec_bits);
  return cur_[i];
}

// ---- field construction --------------------------------------------------

int Field::monomial_index(int i, int j, int k) {
  // (i,j,k) with i+j+k == 3
  static constexpr int map[4][4] = {
      // i = 0: (j,k) in {(0,3),(1,2),(2,1),(3,0)}
      {0, 1, 2, 3},
      {4, 5, 6, -1},
      {7, 8, -1, -1},
      {9, -1, -1, -1},
  };
  (void)k;
  return map[i][j];
}

Field Field::build(const CubicPoly& p) {
  QMat3 power;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) power[i][j] = (i == j) ? 1 : 0;
  return build_impl(p, power, true);
}

Field Field::build(const CubicPoly& p, const QMat3& basis) {
  return build_impl(p, basis, false);
}

Field Field::build_impl(const CubicPoly& p, const QMat3& basis, bool power_basis) {
  if (has_rational_root(p))
    throw std::invalid_argument("reducible polynomial (rational root)");
  mpz_class delta = poly_discriminant(p);
  if (delta <= 0)
    throw std::invalid_argument("not totally real (discriminant <= 0)");

  Field F;
  F.p_ = p;
  F.basis_ = basis;
  F.inv_basis_ = inverse3(basis);

  // multiplication table; entries must be integral
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      std::array<mpq_class, 3> zi{basis[i][0], basis[i][1], basis[i][2]};
      std::array<mpq_class, 3> zj{basis[j][0], basis[j][1], basis[j][2]};
      auto prod = mulmod_power(p, zi, zj);
      for (int k = 0; k < 3; ++k) {
        mpq_class coord = 0;
        for (int l = 0; l < 3; ++l) coord += prod[l] * F.inv_basis_[l][k];
        coord.canonicalize();
        if (coord.get_den() != 1)
          throw std::invalid_argument("non-integral multiplication table");
        F.table_[i][j][k] = coord.get_num();
      }
    }
  }

  // traces of the basis elements (must be rational integers)
  mpq_class s0(3), s1(-p.a), s2(mpq_class(p.a) * mpq_class(p.a) - 2 * mpq_class(p.b));
  for (int i = 0; i < 3; ++i) {
    mpq_class t = basis[i][0] * s0 + basis[i][1] * s1 + basis[i][2] * s2;
    t.canonicalize();
    if (t.get_den() != 1)
      throw std::invalid_argument("basis element with non-integral trace");
    F.traces_[i] = t.get_num();
  }

  // coordinates of 1
  {
    FieldElement one;
    bool ok = true;
    for (int k = 0; k < 3; ++k) {
      mpq_class coord = F.inv_basis_[0][k];
      coord.canonicalize();
      if (coord.get_den() != 1) ok = false;
      else one.c[k] = coord.get_num();
    }
    if (!ok) throw std::invalid_argument("basis lattice does not contain 1");
    F.one_ = one;
  }

  // discriminant from the trace-form Gram matrix
  ZMat3 gram;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      mpz_class g = 0;
      for (int k = 0; k < 3; ++k) g += F.table_[i][j][k] * F.traces_[k];
      gram[i][j] = g;
    }
  F.disc_ = det3z(gram);
  // cross-check det(basis)^2 * disc(p) == D
  mpq_class lhs = det3(basis);
  lhs = lhs * lhs * mpq_class(delta);
  lhs.canonicalize();
  if (lhs != mpq_class(F.disc_))
    throw std::invalid_argument("Gram determinant inconsistent with basis");
  if (!power_basis && F.disc_ <= 0)
    throw std::invalid_argument("basis Gram determinant not positive");

  F.roots_ = std::make_shared<RealEmbeddings>(p);
  F.finalize();
  return F;
}

void Field::finalize() {
  // norm form: det of the multiplication-by-z matrix, entries linear in coords
  Lin3 lin[3][3];
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) lin[k][j].c[i] = table_[i][j][k];
  Cubic3 nf;
  static constexpr int perms[6][4] = {{0, 1, 2, +1}, {1, 2, 0, +1}, {2, 0, 1, +1},
                                      {0, 2, 1, -1}, {1, 0, 2, -1}, {2, 1, 0, -1}};
  for (const auto& pm : perms)
    accumulate_triple_product(nf, pm[3], lin[0][pm[0]], lin[1][pm[1]], lin[2][pm[2]]);
  norm_form_ = nf.c;

  // double enclosures of the basis embeddings
  for (int i = 0; i < 3; ++i) {
    QInterval r = roots_->root(i, 100);
    QInterval r2 = r * r;
    for (int j = 0; j < 3; ++j) {
      QInterval v = QInterval::point(basis_[j][0]) + r.scale(basis_[j][1]) +
                    r2.scale(basis_[j][2]);
      demb_[i][j] = v.to_dinterval();
    }
  }

  // trace-adapted basis: unimodular U with U * traces = (0, 0, kappa)
  ZMat3 U{};
  for (int i = 0; i < 3; ++i) U[i][i] = 1;
  std::array<mpz_class, 3> v = traces_;
  auto combine = [&](int r0, int r1) {
    if (v[r0] == 0 && v[r1] == 0) return;
    mpz_class g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), v[r0].get_mpz_t(),
               v[r1].get_mpz_t());
    mpz_class p0 = v[r0] / g, p1 = v[r1] / g;
    std::array<mpz_class, 3> row0, row1;
    for (int k = 0; k < 3; ++k) {
      row0[k] = p1 * U[r0][k] - p0 * U[r1][k];
      row1[k] = x * U[r0][k] + y * U[r1][k];
    }
    U[r0] = row0;
    U[r1] = row1;
    v[r0] = 0;
    v[r1] = g;
  };
  combine(0, 1);
  combine(1, 2);
  if (v[2] == 0) throw std::logic_error("degenerate trace vector");
  if (v[2] < 0) {
    for (int k = 0; k < 3; ++k) U[2][k] = -U[2][k];
    v[2] = -v[2];
  }

  TraceBasis tb;
  for (int i = 0; i < 3; ++i)
    tb.beta[i] = FieldElement{{U[i][0], U[i][1], U[i][2]}};
  tb.kappa = v[2];

  // Lagrange-reduce the trace-zero pair under q(z) = Tr(z^2); keeps the
  // triangle sweep well conditioned.
  auto q = [&](const FieldElement& z) { return trace(mul(z, z)); };
  auto bilin = [&](const FieldElement& z, const FieldElement& w) {
    return trace(mul(z, w));
  };
  for (int iter = 0; iter < 64; ++iter) {
    mpz_class q1 = q(tb.beta[0]), q2 = q(tb.beta[1]);
    if (q1 > q2) std::swap(tb.beta[0], tb.beta[1]);
    mpz_class g11 = q(tb.beta[0]);
    mpz_class g12 = bilin(tb.beta[0], tb.beta[1]);
    mpz_class r = nearest_quotient(g12, g11);
    if (r == 0) break;
    tb.beta[1] = sub(tb.beta[1], mul_int(tb.beta[0], r));
  }
  // size-reduce the trace-kappa element against the trace-zero pair
  for (int i = 0; i < 2; ++i) {
    mpz_class r = nearest_quotient(bilin(tb.beta[2], tb.beta[i]), q(tb.beta[i]));
    if (r != 0) tb.beta[2] = sub(tb.beta[2], mul_int(tb.beta[i], r));
  }
  tb_ = tb;
}

Field Field::with_trace_basis(const TraceBasis& tb) const {
  if (trace(tb.beta[0]) != 0 || trace(tb.beta[1]) != 0)
    throw std::invalid_argument("first two basis elements must have trace 0");
  if (trace(tb.beta[2]) != tb.kappa || tb.kappa != tb_.kappa)
    throw std::invalid_argument("third basis element must have trace kappa");
  ZMat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = tb.beta[i].c[j];
  mpz_class d = det3z(m);
  if (d != 1 && d != -1)
    throw std::invalid_argument("trace basis change must be unimodular");
  Field F = *this;
  F.tb_ = tb;
  return F;
}

// ---- element arithmetic ---------------------------------------------------

FieldElement Field::add(const FieldElement& x, const FieldElement& y) const {
  return {{x.c[0] + y.c[0], x.c[1] + y.c[1], x.c[2] + y.c[2]}};
}

FieldElement Field::sub(const FieldElement& x, const FieldElement& y) const {
  return {{x.c[0] - y.c[0], x.c[1] - y.c[1], x.c[2] - y.c[2]}};
}

FieldElement Field::neg(const FieldElement& x) const {
  return {{-x.c[0], -x.c[1], -x.c[2]}};
}

FieldElement Field::mul(const FieldElement& x, const FieldElement& y) const {
  FieldElement r;
  for (int k = 0; k < 3; ++k) {
    mpz_class s = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += x.c[i] * y.c[j] * table_[i][j][k];
    r.c[k] = s;
  }
  return r;
}

FieldElement Field::mul_int(const FieldElement& x, const mpz_class& k) const {
  return {{x.c[0] * k, x.c[1] * k, x.c[2] * k}};
}

mpz_class Field::trace(const FieldElement& z) const {
  return z.c[0] * traces_[0] + z.c[1] * traces_[1] + z.c[2] * traces_[2];
}

mpz_class Field::norm(const FieldElement& z) const {
  // det of multiplication-by-z in the working basis
  ZMat3 m;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) {
      mpz_class s = 0;
      for (int i = 0; i < 3; ++i) s += z.c[i] * table_[i][j][k];
      m[k][j] = s;
    }
  return det3z(m);
}

FieldElement Field::unit_inverse(const FieldElement& x) const {
  mpz_class n = norm(x);
  if (n != 1 && n != -1) throw std::domain_error("unit_inverse: |norm| != 1");
  ZMat3 m;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) {
      mpz_class s = 0;
      for (int i = 0; i < 3; ++i) s += x.c[i] * table_[i][j][k];
      m[k][j] = s;
    }
  // adj(m) * one / det
  ZMat3 adj;
  adj[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  adj[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
  adj[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
  adj[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  adj[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
  adj[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
  adj[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  adj[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
  adj[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  FieldElement r;
  for (int k = 0; k < 3; ++k) {
    mpz_class s = 0;
    for (int j = 0; j < 3; ++j) s += adj[k][j] * one_.c[j];
    r.c[k] = (n == 1) ? s : mpz_class(-s);
  }
  return r;
}

FieldElement Field::pow(const FieldElement& x, long e) const {
  FieldElement base = x;
  if (e < 0) {
    base = unit_inverse(x);
    e = -e;
  }
  FieldElement r = one_;
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

// ---- embeddings and certified signs ---------------------------------------

QInterval Field::embed(const FieldElement& z, int i, long prec_bits) const {
  if (i < 0 || i > 2) throw std::out_of_range("embedding index");
  // power-basis coordinates of z
  std::array<mpq_class, 3> q{};
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) q[j] += mpq_class(z.c[l]) * basis_[l][j];
  if (q[1] == 0 && q[2] == 0) return QInterval::point(q[0]);  // rational element

  long root_prec = prec_bits + 8;
  for (int attempt = 0; attempt < 64; ++attempt) {
    QInterval r = roots_->root(i, root_prec);
    QInterval val =
        QInterval::point(q[0]) + r.scale(q[1]) + (r * r).scale(q[2]);
    if (narrower_than_2exp(val, prec_bits)) return val;
    root_prec += 32 + (root_prec / 2);
  }
  throw std::logic_error("embed: interval refinement did not converge");
}

bool Field::coords_fit_double(const FieldElement& z) const {
  for (const auto& c : z.c) {
    if (!c.fits_slong_p()) return false;
    long v = c.get_si();
    if (v > (1L << 50) || v < -(1L << 50)) return false;
  }
  return true;
}

DInterval Field::embed_fast(const FieldElement& z, int i) const {
  DInterval s = demb_[i][0].mul_int(z.c[0].get_si());
  s = s + demb_[i][1].mul_int(z.c[1].get_si());
  s = s + demb_[i][2].mul_int(z.c[2].get_si());
  return s;
}

int Field::certified_sign(const FieldElement& z, int i) const {
  if (z.is_zero())
    throw std::invalid_argument("certified_sign: zero element");
  if (coords_fit_double(z)) {
    DInterval v = embed_fast(z, i);
    if (v.positive()) return 1;
    if (v.negative()) return -1;
  }
  // effective precision cap from |N(z)| >= 1:
  // |z^(i)| >= 1 / prod_{j != i} |z^(j)|
  double log2_prod = 0.0;
  for (int j = 0; j < 3; ++j) {
    if (j == i) continue;
    QInterval e = embed(z, j, 16);
    double ub = std::max(std::abs(e.lo.get_d()), std::abs(e.hi.get_d())) + 1e-9;
    log2_prod += std::log2(std::max(ub, 1e-9));
  }
  long cap = 64 + static_cast<long>(std::ceil(std::max(log2_prod, 0.0)));
  cap = std::max(cap, 96L);
  for (long prec = 32; prec <= cap + 64; prec *= 2) {
    QInterval v = embed(z, i, prec);
    int s = v.sign();
    if (s != 0) return s;
    if (prec > cap) break;
  }
  throw std::logic_error("certified_sign: precision cap exceeded for nonzero element");
}

// ---- field spec parsing -----------------------------------------------------

namespace {

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

mpz_class parse_int(const std::string& s) {
  std::string t = strip(s);
  if (t.empty()) throw std::invalid_argument("empty integer in field spec");
  try {
    return mpz_class(t);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad integer '" + t + "' in field spec");
  }
}

mpq_class parse_rat(const std::string& s) {
  std::string t = strip(s);
  if (t.empty()) throw std::invalid_argument("empty rational in field spec");
  try {
    mpq_class q(t);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad rational '" + t + "' in field spec");
  }
}

}  // namespace

FieldSpec parse_field_spec(const std::string& text) {
  FieldSpec spec;
  bool have_poly = false;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("field spec line without '=': " + t);
    std::string key = strip(t.substr(0, eq));
    std::string val = strip(t.substr(eq + 1));
    if (key == "poly") {
      auto parts = split(val, ',');
      if (parts.size() != 4)
        throw std::invalid_argument("poly needs 4 comma-separated coefficients");
      if (parse_int(parts[0]) != 1)
        throw std::invalid_argument("poly must be monic (leading coefficient 1)");
      spec.poly.a = parse_int(parts[1]);
      spec.poly.b = parse_int(parts[2]);
      spec.poly.c = parse_int(parts[3]);
      have_poly = true;
    } else if (key == "basis") {
      auto rows = split(val, ';');
      if (rows.size() != 3)
        throw std::invalid_argument("basis needs 3 ';'-separated rows");
      QMat3 m;
      for (int i = 0; i < 3; ++i) {
        auto cols = split(rows[i], ',');
        if (cols.size() != 3)
          throw std::invalid_argument("basis row needs 3 entries");
        for (int j = 0; j < 3; ++j) m[i][j] = parse_rat(cols[j]);
      }
      spec.basis = m;
    } else {
      throw std::invalid_argument("unknown key '" + key + "' in field spec");
    }
  }
  if (!have_poly) throw std::invalid_argument("field spec missing 'poly'");
  return spec;
}

FieldSpec load_field_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("file not found: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_field_spec(buf.str());
}

Field build_field(const FieldSpec& spec) {
  if (spec.basis) return Field::build(spec.poly, *spec.basis);
  return Field::build(spec.poly);
}

}  // namespace tracecensus
