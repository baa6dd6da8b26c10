#include <random>

#include "doctest.h"
#include "tracecensus/cubic_field.hpp"

using namespace tracecensus;

namespace {

Field k257() { return Field::build({2, -3, -1}); }
Field k49() { return Field::build({-1, -2, 1}); }
Field k81() { return Field::build({0, -3, -1}); }

FieldElement rand_elem(std::mt19937& rng, int lim) {
  std::uniform_int_distribution<int> d(-lim, lim);
  return Field::from_coords(d(rng), d(rng), d(rng));
}

}  // namespace

TEST_CASE("cubic discriminant formula") {
  CHECK(poly_discriminant({2, -3, -1}) == 257);
  CHECK(poly_discriminant({0, -1, 0}) == 4);  // x^3 - x, reducible but formula applies
  CHECK(poly_discriminant({-1, -2, 1}) == 49);
  CHECK(poly_discriminant({0, 0, -2}) == -108);
  CHECK(poly_discriminant({0, -3, -1}) == 81);
}

TEST_CASE("field construction and rejection") {
  Field F = k257();
  CHECK(F.disc() == 257);
  CHECK(F.kappa() == 1);

  Field G = k49();
  CHECK(G.disc() == 49);
  CHECK(G.kappa() == 1);

  CHECK(k81().kappa() == 3);

  CHECK_THROWS_WITH_AS(Field::build({0, 0, -2}), doctest::Contains("not totally real"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(Field::build({0, -1, 0}), doctest::Contains("reducible"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(Field::build({-3, 3, -1}), doctest::Contains("reducible"),
                       std::invalid_argument);  // (x-1)^3
}

TEST_CASE("trace basis invariants") {
  for (const Field& F : {k257(), k49(), k81()}) {
    const TraceBasis& tb = F.trace_basis();
    CHECK(F.trace(tb.beta[0]) == 0);
    CHECK(F.trace(tb.beta[1]) == 0);
    CHECK(F.trace(tb.beta[2]) == tb.kappa);
    // unimodular change of basis
    mpz_class det = tb.beta[0].c[0] * (tb.beta[1].c[1] * tb.beta[2].c[2] -
                                       tb.beta[1].c[2] * tb.beta[2].c[1]) -
                    tb.beta[0].c[1] * (tb.beta[1].c[0] * tb.beta[2].c[2] -
                                       tb.beta[1].c[2] * tb.beta[2].c[0]) +
                    tb.beta[0].c[2] * (tb.beta[1].c[0] * tb.beta[2].c[1] -
                                       tb.beta[1].c[1] * tb.beta[2].c[0]);
    CHECK((det == 1 || det == -1));
  }
  // kappa divides every trace
  std::mt19937 rng(11);
  Field F = k81();
  for (int t = 0; t < 200; ++t) {
    FieldElement z = rand_elem(rng, 50);
    CHECK(F.trace(z) % 3 == 0);
  }
}

TEST_CASE("K257: an alternative trace-adapted basis is accepted") {
  // beta_1 = 2 + 3a, beta_2 = 5a + a^2, beta_3 = 1 + a has the trace
  // profile (0, 0, 1); it spans the same lattice, so the change of basis
  // is unimodular and the counts cannot depend on the choice.
  Field F = k257();
  FieldElement b1 = Field::from_coords(2, 3, 0);
  FieldElement b2 = Field::from_coords(0, 5, 1);
  FieldElement b3 = Field::from_coords(1, 1, 0);
  CHECK(F.trace(b1) == 0);
  CHECK(F.trace(b2) == 0);
  CHECK(F.trace(b3) == 1);
  TraceBasis tb{{b1, b2, b3}, 1};
  Field G = F.with_trace_basis(tb);  // validates unimodularity internally
  CHECK(G.trace_basis().beta[0] == b1);
}

TEST_CASE("trace and norm exact values") {
  Field F = k257();
  CHECK(F.trace(Field::from_coords(1, 1, 0)) == 1);  // 1 + alpha
  CHECK(F.trace(F.zero()) == 0);
  CHECK(F.norm(F.zero()) == 0);
  CHECK(F.norm(Field::from_coords(0, 1, 0)) == 1);    // alpha, Vieta: -c
  CHECK(F.norm(Field::from_coords(1, 1, 0)) == -3);   // 1 + alpha: -p(-1)
  CHECK(F.trace(F.one()) == 3);
}

TEST_CASE("trace bilinearity and norm multiplicativity") {
  Field F = k257();
  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    FieldElement z = rand_elem(rng, 30), w = rand_elem(rng, 30);
    CHECK(F.trace(F.mul(z, w)) == F.trace(F.mul(w, z)));
    CHECK(F.norm(F.mul(z, w)) == F.norm(z) * F.norm(w));
  }
  // bilinearity of (z, w) -> trace(z w) in the first slot
  std::mt19937 rng2(13);
  for (int t = 0; t < 50; ++t) {
    FieldElement x = rand_elem(rng2, 20), y = rand_elem(rng2, 20), w = rand_elem(rng2, 20);
    CHECK(F.trace(F.mul(F.add(x, y), w)) ==
          F.trace(F.mul(x, w)) + F.trace(F.mul(y, w)));
  }
}

TEST_CASE("norm form matches the determinant route") {
  Field F = k257();
  // frozen expansion of the K257 norm form in the power basis
  auto nf = F.norm_form();
  CHECK(nf[Field::monomial_index(3, 0, 0)] == 1);
  CHECK(nf[Field::monomial_index(2, 1, 0)] == -2);
  CHECK(nf[Field::monomial_index(2, 0, 1)] == 10);
  CHECK(nf[Field::monomial_index(1, 2, 0)] == -3);
  CHECK(nf[Field::monomial_index(1, 1, 1)] == 3);
  CHECK(nf[Field::monomial_index(1, 0, 2)] == 13);
  CHECK(nf[Field::monomial_index(0, 3, 0)] == 1);
  CHECK(nf[Field::monomial_index(0, 2, 1)] == -2);
  CHECK(nf[Field::monomial_index(0, 1, 2)] == -3);
  CHECK(nf[Field::monomial_index(0, 0, 3)] == 1);

  std::mt19937 rng(3);
  for (int t = 0; t < 100; ++t) {
    FieldElement z = rand_elem(rng, 40);
    mpz_class direct = F.norm(z);
    mpz_class viaform = 0;
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; i + j <= 3; ++j) {
        int k = 3 - i - j;
        mpz_class term = nf[Field::monomial_index(i, j, k)];
        for (int q = 0; q < i; ++q) term *= z.c[0];
        for (int q = 0; q < j; ++q) term *= z.c[1];
        for (int q = 0; q < k; ++q) term *= z.c[2];
        viaform += term;
      }
    CHECK(direct == viaform);
  }
}

TEST_CASE("embeddings: rational points, Vieta sums, refinement") {
  Field F = k257();
  QInterval one = F.embed(F.one(), 0, 50);
  CHECK(one.lo == 1);
  CHECK(one.hi == 1);

  // Vieta: sum of root midpoints ~ -a = -2, product ~ -c = 1
  double s = 0, prod = 1;
  for (int i = 0; i < 3; ++i) {
    double m = F.embed(Field::from_coords(0, 1, 0), i, 60).mid_double();
    s += m;
    prod *= m;
  }
  CHECK(std::abs(s + 2.0) < 1e-15);
  CHECK(prod == doctest::Approx(1.0).epsilon(1e-14));

  // beta_1 = 2 + 3 alpha at the largest root (1.19869...)
  QInterval b1 = F.embed(Field::from_coords(2, 3, 0), 0, 53);
  CHECK(b1.mid_double() == doctest::Approx(2 + 3 * 1.1986912435159971).epsilon(1e-12));

  // monotone refinement: nested intervals
  QInterval w1 = F.embed(Field::from_coords(0, 1, 0), 1, 30);
  QInterval w2 = F.embed(Field::from_coords(0, 1, 0), 1, 120);
  CHECK(w2.lo >= w1.lo);
  CHECK(w2.hi <= w1.hi);
  CHECK(narrower_than_2exp(w2, 120));
}

TEST_CASE("certified signs") {
  Field F = k257();
  for (int i = 0; i < 3; ++i) {
    CHECK(F.certified_sign(F.one(), i) == 1);
    CHECK(F.certified_sign(F.neg(F.one()), i) == -1);
  }
  // alpha: one positive and two negative roots
  FieldElement alpha = Field::from_coords(0, 1, 0);
  CHECK(F.certified_sign(alpha, 0) == 1);
  CHECK(F.certified_sign(alpha, 1) == -1);
  CHECK(F.certified_sign(alpha, 2) == -1);

  CHECK_THROWS_AS(F.certified_sign(F.zero(), 0), std::invalid_argument);
}

TEST_CASE("certified sign agrees with high-precision midpoint on random elements") {
  Field F = k257();
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> d(-50, 50);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    FieldElement z = Field::from_coords(d(rng), d(rng), d(rng));
    if (z.is_zero()) continue;
    ++checked;
    int i = t % 3;
    int s = F.certified_sign(z, i);
    QInterval e = F.embed(z, i, 200);
    double mid = e.mid_double();
    CHECK(s == (mid > 0 ? 1 : -1));
  }
  CHECK(checked > 990);
}

TEST_CASE("certified sign resolves exponentially small embeddings") {
  // powers of a unit have one embedding of size ~0.286^k: far below the
  // double-interval resolution, so the exact refinement ladder must run
  Field F = k257();
  FieldElement alpha = Field::from_coords(0, 1, 0);
  for (long k : {20L, 40L, 60L}) {
    FieldElement z = F.pow(alpha, k);
    CHECK(F.certified_sign(z, 1) == ((k % 2 == 0) ? 1 : -1));  // root -0.286...
    CHECK(F.certified_sign(z, 0) == 1);
    QInterval e = F.embed(z, 1, 400);
    CHECK(narrower_than_2exp(e, 400));
  }
}

TEST_CASE("Gram determinant equals the declared discriminant") {
  // an explicitly supplied integral basis gives the same field data
  QMat3 basis;
  basis[0] = {mpq_class(2), mpq_class(3), mpq_class(0)};
  basis[1] = {mpq_class(0), mpq_class(5), mpq_class(1)};
  basis[2] = {mpq_class(1), mpq_class(1), mpq_class(0)};
  Field F = Field::build({2, -3, -1}, basis);
  CHECK(F.disc() == 257);
  CHECK(F.kappa() == 1);
  // a non-integral basis must be rejected
  QMat3 bad = basis;
  bad[0][0] = mpq_class(1, 2);
  CHECK_THROWS_AS(Field::build({2, -3, -1}, bad), std::invalid_argument);
}

TEST_CASE("unit inverse and power") {
  Field F = k257();
  FieldElement alpha = Field::from_coords(0, 1, 0);
  FieldElement inv = F.unit_inverse(alpha);
  CHECK(F.mul(alpha, inv) == F.one());
  CHECK(F.pow(alpha, 0) == F.one());
  CHECK(F.pow(alpha, 3) == F.mul(alpha, F.mul(alpha, alpha)));
  CHECK(F.mul(F.pow(alpha, -2), F.pow(alpha, 2)) == F.one());
  CHECK_THROWS_AS(F.unit_inverse(Field::from_coords(1, 1, 0)), std::domain_error);
}

TEST_CASE("field spec parsing") {
  FieldSpec s = parse_field_spec("poly = 1,2,-3,-1\n");
  CHECK(s.poly.a == 2);
  CHECK(s.poly.b == -3);
  CHECK(s.poly.c == -1);
  CHECK(!s.basis);

  FieldSpec st = parse_field_spec("  poly =  1 , 2 , -3 , -1  \n\n");
  CHECK(st.poly.b == -3);

  FieldSpec sb = parse_field_spec(
      "poly = 1,2,-3,-1\nbasis = 2,3,0; 0,5,1; 1,1,0\n");
  REQUIRE(sb.basis.has_value());
  CHECK((*sb.basis)[1][1] == 5);

  FieldSpec sr = parse_field_spec("poly = 1,0,-7,1\nbasis = 1,0,0; 0,1,0; 1/2,0,1/2\n");
  REQUIRE(sr.basis.has_value());
  CHECK((*sr.basis)[2][0] == mpq_class(1, 2));

  CHECK_THROWS_WITH_AS(parse_field_spec("poly = 1,2,-3\n"), doctest::Contains("4"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_field_spec("poly = 2,2,-3,-1\n"), doctest::Contains("monic"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_field_spec("poly = 1,2,-3,-1\nfoo = 1\n"),
                       doctest::Contains("unknown key"), std::invalid_argument);
  CHECK_THROWS_AS(parse_field_spec("nonsense"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(load_field_spec("/nonexistent/file.spec"),
                       doctest::Contains("file not found"), std::invalid_argument);
}
