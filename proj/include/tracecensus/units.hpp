#pragma once

#include <array>
#include <utility>
#include <vector>

#include "tracecensus/cubic_field.hpp"
#include "tracecensus/hpreal.hpp"

namespace tracecensus {

// Sign character v(z) = prod_i sgn(z^(i))^{e_i}.
struct SignCharacter {
  std::array<int, 3> e{};  // entries 0 or 1

  bool is_trivial() const { return e[0] == 0 && e[1] == 0 && e[2] == 0; }
  int weight() const { return e[0] + e[1] + e[2]; }
  bool operator==(const SignCharacter& o) const { return e == o.e; }
  SignCharacter operator^(const SignCharacter& o) const {
    return {{e[0] ^ o.e[0], e[1] ^ o.e[1], e[2] ^ o.e[2]}};
  }
  // value on an element with the given signature bits (1 = negative)
  int value_on(const std::array<int, 3>& sig) const {
    int d = e[0] * sig[0] + e[1] * sig[1] + e[2] * sig[2];
    return (d % 2 == 0) ? 1 : -1;
  }
};

// Fundamental units with regulator, signature data and the canonical unit
// sample that the search box produced.
struct UnitSystem {
  FieldElement eps1, eps2;
  double reg = 0.0;
  double reg_err = 0.0;
  // rows: signatures of -1, eps1, eps2 (1 means negative at that embedding)
  std::array<std::array<int, 3>, 3> signatures{};
  // log-vector rows l(eps) = (log|eps^(1)|, log|eps^(2)|), midpoints
  std::array<std::array<double, 2>, 2> log_basis{};
  std::vector<FieldElement> found_units;  // canonical reps, torsion excluded
  double search_bound = 0.0;              // largest box actually scanned
};

// Totally positive generators of the unit group mod {+-1}, their lambda
// vectors and the dual-lattice basis.
struct TotallyPositiveGens {
  FieldElement u1, u2;
  std::array<std::array<long, 2>, 2> exponents{};  // over (eps1, eps2)
  std::array<int, 2> sign{{1, 1}};                 // sign chosen to make them positive
  std::array<std::array<double, 2>, 2> lambda{};   // rows lambda(u1), lambda(u2)
  std::array<std::array<double, 2>, 2> dual{};     // rows mu1*, mu2*
};

// Point of the dual lattice (integer coordinates against the dual basis).
struct DualLatticePoint {
  long m1 = 0, m2 = 0;
  double x = 0.0, y = 0.0;  // mu = (mu_1, mu_2); mu_3 = -mu_1 - mu_2
};

// Searches growing coordinate boxes (log-radius steps of 2 up to `bound`)
// for units, reduces their log vectors to a fundamental pair and verifies
// every enumerated unit lies in the generated lattice. Throws
// std::runtime_error("bound too small") when no independent pair exists
// within the requested bound.
UnitSystem find_units(const Field& field, double bound = 40.0);

double regulator(const UnitSystem& us);

// |det| of the 2x2 log-embedding matrix of an arbitrary unit pair, with a
// certified error bound (used by the unimodular-invariance checks).
double regulator_of_pair(const Field& field, const FieldElement& u1,
                         const FieldElement& u2, double* err = nullptr);

TotallyPositiveGens totally_positive_gens(const Field& field, const UnitSystem& us);

// The subgroup {v : v trivial on all units}, sorted lexicographically.
std::vector<SignCharacter> good_characters(const Field& field, const UnitSystem& us);

// All mu in the dual lattice with |mu| <= radius such that (mu, v) passes
// the unit conditions; exact half-integer test (tolerance 0.25).
std::vector<DualLatticePoint> good_mu_for(const Field& field, const SignCharacter& v,
                                          const TotallyPositiveGens& tp,
                                          const UnitSystem& us, double radius);

// signature bits of a nonzero element (1 = negative embedding)
std::array<int, 3> signature_of(const Field& field, const FieldElement& z);

// v(z) via certified signs
int character_value(const Field& field, const SignCharacter& v, const FieldElement& z);

// (log|z^(1)|, log|z^(2)|) as certified intervals
std::pair<HPInterval, HPInterval> log_pair(const Field& field, const FieldElement& z,
                                           long prec);
// (log|z^(1)/z^(3)|, log|z^(2)/z^(3)|)
std::pair<HPInterval, HPInterval> lambda_pair(const Field& field, const FieldElement& z,
                                              long prec);

}  // namespace tracecensus
