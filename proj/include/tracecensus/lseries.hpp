#pragma once

#include <functional>
#include <vector>

#include "tracecensus/cubic_field.hpp"
#include "tracecensus/units.hpp"

namespace tracecensus {

// One principal ideal: a canonical generator (fundamental-domain
// representative, sign-normalized), its absolute norm, and the generator's
// signature bits (1 = negative embedding). For a character v the ideal's
// sign value is v.value_on(signs); when (0, v) is good this does not depend
// on the generator choice.
struct IdealGen {
  FieldElement gen;
  long long norm = 0;
  std::array<int, 3> signs{};
};

struct PrincipalIdealStream {
  long long B = 0;
  std::vector<IdealGen> items;  // sorted by (norm, coords)
};

struct LValue {
  double value = 0.0;
  double error_estimate = 0.0;
  long long B_used = 0;
  SignCharacter chi;
};

// Enumerates one generator per nonzero principal ideal of norm <= B.
// Throws std::invalid_argument for B < 1 or B > 10^8 (memory guard).
PrincipalIdealStream enumerate_principal(const Field& field,
                                         const TotallyPositiveGens& tp,
                                         const UnitSystem& us, long long B);

// Streaming core: calls fn for every generator with norm <= B, in a
// deterministic order when threads == 1; with more threads the call order
// is arbitrary but the visited set is identical.
void for_each_principal(const Field& field, const UnitSystem& us, long long B,
                        int threads,
                        const std::function<void(const IdealGen&)>& fn);

// Smoothed Dirichlet sum sum_{N <= 35B} v(gen) N^{-1} e^{-N/B} at cutoffs B
// and 2B, Richardson-extrapolated under the c/B error model. Rejects the
// trivial character (pole at s = 1) and characters that are not good.
LValue l_value(const Field& field, const TotallyPositiveGens& tp,
               const UnitSystem& us, const SignCharacter& v, long long B,
               int threads = 0);

}  // namespace tracecensus
