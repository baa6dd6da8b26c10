#pragma once

#include <string>
#include <vector>

#include "tracecensus/counting.hpp"
#include "tracecensus/lseries.hpp"

namespace tracecensus {

struct WeightedSumTable {
  int k = 3;
  std::vector<double> X;           // grid, increasing
  std::vector<double> S;           // S(X)
  std::vector<double> normalized;  // S(X) / log^{k+1} X
};

struct MainCoefficient {
  double value = 0.0;
  double error = 0.0;  // propagated from the regulator and L-value errors
  int k = 3;
  double reg = 0.0;
  double D = 0.0;
  std::vector<LValue> lvalues;
};

// sum_{n <= X} E_n log^k(X/n), compensated summation. The asymptotic
// statement needs k >= 3; smaller k is computed but flagged.
double weighted_sum(const CountSeries& series, long X, int k,
                    bool* small_k_warning = nullptr);

WeightedSumTable weighted_sum_table(const CountSeries& series,
                                    const std::vector<long>& grid, int k);

// 3 sqrt(D) / (8 pi^2 (k+1) R) * sum of L(1,v) over the supplied values.
// The lvalues must correspond exactly to the good nontrivial characters.
MainCoefficient main_coefficient(const Field& field, const UnitSystem& us,
                                 const TotallyPositiveGens& tp, int k,
                                 const std::vector<LValue>& lvalues);

struct FitResult {
  std::vector<double> coeffs;  // highest power first
  double residual = 0.0;       // L2 norm of the residual
  double cond = 0.0;           // design-matrix condition estimate
  bool ill_conditioned = false;
};

// Least squares of S(X) against log^{k+1} X, ..., log^{k+1-degree} X.
FitResult fit_coefficients(const WeightedSumTable& table, int degree);

// CSV rows `X,S,S_norm,predicted_leading[,predicted_3term]`; the 3-term
// column appears when sub-leading coefficients (c2, c3) are supplied.
std::string compare_report(const WeightedSumTable& table,
                           const MainCoefficient& coeff,
                           const double* subleading2 = nullptr);

// log-spaced grid, points_per_decade points per decade in [xmin, xmax]
std::vector<long> log_grid(long xmin, long xmax, int points_per_decade);

}  // namespace tracecensus
