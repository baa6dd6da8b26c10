#pragma once

#include <gmpxx.h>

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include "tracecensus/interval.hpp"

namespace tracecensus {

using QMat3 = std::array<std::array<mpq_class, 3>, 3>;
using ZMat3 = std::array<std::array<mpz_class, 3>, 3>;

// Monic integer cubic x^3 + a x^2 + b x + c.
struct CubicPoly {
  mpz_class a, b, c;
};

// 18abc - 4a^3c + a^2b^2 - 4b^3 - 27c^2
mpz_class poly_discriminant(const CubicPoly& p);

// True iff the monic cubic has a rational (hence integer) root.
bool has_rational_root(const CubicPoly& p);

// Element coordinates with respect to the field's working integral basis.
struct FieldElement {
  std::array<mpz_class, 3> c{};

  bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0; }
  bool operator==(const FieldElement& o) const { return c == o.c; }
};

// Certified isolation of the three real roots, ordered decreasing.
// Refinement is monotone (nested intervals) and cached; the cache is an
// internal optimization guarded by a mutex, callers always receive copies.
class RealEmbeddings {
 public:
  explicit RealEmbeddings(const CubicPoly& p);

  // Interval of width <= 2^-prec_bits containing root i (0 = largest).
  QInterval root(int i, long prec_bits) const;

 private:
  void refine_locked(int i, long prec_bits) const;

  CubicPoly p_;
  mutable std::mutex mu_;
  mutable std::array<QInterval, 3> cur_;
  mutable std::array<int, 3> lo_sign_;  // sign of p at the left endpoint
};

struct TraceBasis {
  std::array<FieldElement, 3> beta;  // Tr beta[0] = Tr beta[1] = 0, Tr beta[2] = kappa
  mpz_class kappa;
};

// A totally real cubic field with a validated working integral basis,
// exact multiplication table, certified embeddings and a trace-adapted
// basis. Immutable after construction; cheap to copy (shared internals).
class Field {
 public:
  // Power basis 1, alpha, alpha^2; D := disc(p). Throws std::invalid_argument
  // for reducible or non-totally-real polynomials.
  static Field build(const CubicPoly& p);
  // Explicit basis, rows = basis elements in power-basis coordinates.
  // Additionally rejects bases that are not closed under multiplication,
  // do not contain 1, or have inconsistent Gram determinant.
  static Field build(const CubicPoly& p, const QMat3& basis);

  const CubicPoly& poly() const { return p_; }
  const mpz_class& disc() const { return disc_; }
  const mpz_class& kappa() const { return tb_.kappa; }
  const TraceBasis& trace_basis() const { return tb_; }
  const QMat3& basis_to_power() const { return basis_; }
  const ZMat3& mult_table(int i) const { return table_[i]; }
  const std::array<mpz_class, 3>& basis_traces() const { return traces_; }

  FieldElement zero() const { return {}; }
  FieldElement one() const { return one_; }
  static FieldElement from_coords(mpz_class c0, mpz_class c1, mpz_class c2) {
    return {{std::move(c0), std::move(c1), std::move(c2)}};
  }

  FieldElement add(const FieldElement& x, const FieldElement& y) const;
  FieldElement sub(const FieldElement& x, const FieldElement& y) const;
  FieldElement neg(const FieldElement& x) const;
  FieldElement mul(const FieldElement& x, const FieldElement& y) const;
  FieldElement mul_int(const FieldElement& x, const mpz_class& k) const;
  // Inverse of a unit (|norm| = 1); throws std::domain_error otherwise.
  FieldElement unit_inverse(const FieldElement& x) const;
  FieldElement pow(const FieldElement& x, long e) const;  // e may be negative for units

  mpz_class trace(const FieldElement& z) const;
  mpz_class norm(const FieldElement& z) const;

  // Certified enclosure of z^(i), i = 0,1,2 (embeddings ordered by
  // decreasing root). Width <= 2^-prec_bits; nested for increasing prec.
  QInterval embed(const FieldElement& z, int i, long prec_bits) const;

  // Exact sign of z^(i); throws std::invalid_argument when z = 0.
  int certified_sign(const FieldElement& z, int i) const;

  // Fast non-certified double enclosure of z^(i) (still a rigorous interval,
  // but may straddle 0). Requires |coords| < 2^52.
  DInterval embed_fast(const FieldElement& z, int i) const;
  bool coords_fit_double(const FieldElement& z) const;

  // Homogeneous cubic N(c0,c1,c2); coefficient of c0^i c1^j c2^k at
  // norm_form()[monomial_index(i,j,k)] in the fixed order below.
  const std::array<mpz_class, 10>& norm_form() const { return norm_form_; }
  static int monomial_index(int i, int j, int k);

  // Same field with a different (unimodular, trace-adapted) working
  // trace basis; validates the trace conditions.
  Field with_trace_basis(const TraceBasis& tb) const;

 private:
  Field() = default;
  static Field build_impl(const CubicPoly& p, const QMat3& basis, bool power_basis);
  void finalize();

  CubicPoly p_;
  QMat3 basis_;       // rows: omega_i in power basis
  QMat3 inv_basis_;   // power -> omega coordinates
  std::array<ZMat3, 3> table_;  // table_[i][j] = coords of omega_i * omega_j
  std::array<mpz_class, 3> traces_;
  mpz_class disc_;
  FieldElement one_;
  TraceBasis tb_;
  std::array<mpz_class, 10> norm_form_;
  std::shared_ptr<const RealEmbeddings> roots_;
  std::array<std::array<DInterval, 3>, 3> demb_;  // demb_[i][j] ~ omega_j^(i)
};

// Field construction from the text spec format (poly = ..., basis = ...).
struct FieldSpec {
  CubicPoly poly;
  std::optional<QMat3> basis;
};
FieldSpec parse_field_spec(const std::string& text);
FieldSpec load_field_spec(const std::string& path);
Field build_field(const FieldSpec& spec);

}  // namespace tracecensus
