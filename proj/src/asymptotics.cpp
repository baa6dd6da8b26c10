#include "tracecensus/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tracecensus/units.hpp"
#include "tracecensus/util.hpp"

namespace tracecensus {

double weighted_sum(const CountSeries& series, long X, int k, bool* small_k_warning) {
  if (X < 1 || X > series.X)
    throw std::out_of_range("weighted_sum: X outside the series range");
  if (k < 0) throw std::invalid_argument("weighted_sum: k must be >= 0");
  if (small_k_warning) *small_k_warning = (k < 3);
  const double logX = std::log(static_cast<double>(X));
  NeumaierSum acc;
  for (long n = 1; n <= X; ++n) {
    double e = series.E[n];
    if (e == 0.0) continue;
    double w = logX - std::log(static_cast<double>(n));
    double wk = 1.0;
    for (int t = 0; t < k; ++t) wk *= w;
    acc.add(e * wk);
  }
  return acc.value();
}

WeightedSumTable weighted_sum_table(const CountSeries& series,
                                    const std::vector<long>& grid, int k) {
  WeightedSumTable t;
  t.k = k;
  for (long X : grid) {
    double s = weighted_sum(series, X, k);
    double lx = std::log(static_cast<double>(X));
    t.X.push_back(static_cast<double>(X));
    t.S.push_back(s);
    double denom = std::pow(lx, k + 1);
    t.normalized.push_back(denom > 0 ? s / denom : 0.0);
  }
  return t;
}

MainCoefficient main_coefficient(const Field& field, const UnitSystem& us,
                                 const TotallyPositiveGens& tp, int k,
                                 const std::vector<LValue>& lvalues) {
  (void)tp;
  if (k < 3) throw std::invalid_argument("main_coefficient: k must be >= 3");
  auto good = good_characters(field, us);
  std::vector<SignCharacter> nontrivial;
  for (const auto& v : good)
    if (!v.is_trivial()) nontrivial.push_back(v);
  if (lvalues.size() != nontrivial.size())
    throw std::invalid_argument(
        "main_coefficient: L-values do not match the good nontrivial characters");
  for (const auto& lv : lvalues) {
    bool found = false;
    for (const auto& v : nontrivial) found |= (v == lv.chi);
    if (!found)
      throw std::invalid_argument(
          "main_coefficient: L-value for a character outside the good set");
  }

  MainCoefficient out;
  out.k = k;
  out.reg = us.reg;
  out.D = field.disc().get_d();
  out.lvalues = lvalues;

  double lsum = 0.0, lerr = 0.0;
  for (const auto& lv : lvalues) {
    lsum += lv.value;
    lerr += lv.error_estimate;
  }
  const double pi = std::numbers::pi;
  double front = 3.0 * std::sqrt(out.D) / (8.0 * pi * pi * (k + 1) * us.reg);
  out.value = front * lsum;
  // |dC/dR| err_R + sum |dC/dL| err_L
  out.error = std::abs(out.value / us.reg) * us.reg_err + front * lerr;
  return out;
}

namespace {

// eigenvalues of a small symmetric matrix by cyclic Jacobi; used for the
// condition estimate of the normal equations
std::vector<double> sym_eigenvalues(std::vector<std::vector<double>> m) {
  const std::size_t n = m.size();
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += m[i][j] * m[i][j];
    if (off < 1e-300) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(m[p][q]) < 1e-300) continue;
        double theta = (m[q][q] - m[p][p]) / (2 * m[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k2 = 0; k2 < n; ++k2) {
          double mp = m[p][k2], mq = m[q][k2];
          m[p][k2] = c * mp - s * mq;
          m[q][k2] = s * mp + c * mq;
        }
        for (std::size_t k2 = 0; k2 < n; ++k2) {
          double mp = m[k2][p], mq = m[k2][q];
          m[k2][p] = c * mp - s * mq;
          m[k2][q] = s * mp + c * mq;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = m[i][i];
  return ev;
}

}  // namespace

FitResult fit_coefficients(const WeightedSumTable& table, int degree) {
  const int n = degree + 1;
  const int m = static_cast<int>(table.X.size());
  if (degree < 0) throw std::invalid_argument("fit_coefficients: degree must be >= 0");
  if (m < n + 1)
    throw std::invalid_argument("fit_coefficients: need at least degree + 2 grid points");
  double span = table.X.back() / table.X.front();
  if (span < 10.0)
    throw std::invalid_argument("fit_coefficients: grid must span at least one decade");

  // design matrix A[i][j] = log^{k+1-j} X_i
  std::vector<std::vector<double>> A(m, std::vector<double>(n));
  for (int i = 0; i < m; ++i) {
    double lx = std::log(table.X[i]);
    for (int j = 0; j < n; ++j) A[i][j] = std::pow(lx, table.k + 1 - j);
  }

  // Householder QR in long double
  std::vector<std::vector<long double>> R(m, std::vector<long double>(n));
  std::vector<long double> y(m);
  for (int i = 0; i < m; ++i) {
    y[i] = table.S[i];
    for (int j = 0; j < n; ++j) R[i][j] = A[i][j];
  }
  for (int col = 0; col < n; ++col) {
    long double nrm = 0;
    for (int i = col; i < m; ++i) nrm += R[i][col] * R[i][col];
    nrm = std::sqrt((double)nrm);
    if (nrm == 0) continue;
    long double alpha = R[col][col] > 0 ? -nrm : nrm;
    std::vector<long double> v(m, 0.0L);
    for (int i = col; i < m; ++i) v[i] = R[i][col];
    v[col] -= alpha;
    long double vnorm2 = 0;
    for (int i = col; i < m; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0) continue;
    for (int j = col; j < n; ++j) {
      long double dot = 0;
      for (int i = col; i < m; ++i) dot += v[i] * R[i][j];
      long double f = 2 * dot / vnorm2;
      for (int i = col; i < m; ++i) R[i][j] -= f * v[i];
    }
    long double dot = 0;
    for (int i = col; i < m; ++i) dot += v[i] * y[i];
    long double f = 2 * dot / vnorm2;
    for (int i = col; i < m; ++i) y[i] -= f * v[i];
  }
  FitResult out;
  out.coeffs.assign(n, 0.0);
  for (int j = n - 1; j >= 0; --j) {
    long double s = y[j];
    for (int l = j + 1; l < n; ++l) s -= R[j][l] * out.coeffs[l];
    if (R[j][j] == 0) throw std::runtime_error("fit_coefficients: rank-deficient design");
    out.coeffs[j] = static_cast<double>(s / R[j][j]);
  }
  long double res2 = 0;
  for (int i = n; i < m; ++i) res2 += y[i] * y[i];
  out.residual = std::sqrt(static_cast<double>(res2));

  // condition of A via the normal-equations spectrum
  std::vector<std::vector<double>> G(n, std::vector<double>(n, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0;
      for (int i = 0; i < m; ++i) s += A[i][a] * A[i][b];
      G[a][b] = s;
    }
  auto ev = sym_eigenvalues(G);
  double mx = 0, mn = 1e300;
  for (double e : ev) {
    mx = std::max(mx, std::abs(e));
    mn = std::min(mn, std::abs(e));
  }
  out.cond = (mn > 0) ? std::sqrt(mx / mn) : 1e300;
  out.ill_conditioned = out.cond > 1e12;
  return out;
}

std::string compare_report(const WeightedSumTable& table, const MainCoefficient& coeff,
                           const double* subleading2) {
  std::ostringstream os;
  os << "X,S,S_norm,predicted_leading";
  if (subleading2) os << ",predicted_3term";
  os << "\n";
  for (std::size_t i = 0; i < table.X.size(); ++i) {
    double lx = std::log(table.X[i]);
    double lead = coeff.value * std::pow(lx, table.k + 1);
    os << static_cast<long>(table.X[i]) << "," << fmt12(table.S[i]) << ","
       << fmt12(table.normalized[i]) << "," << fmt12(lead);
    if (subleading2) {
      double three = lead + subleading2[0] * std::pow(lx, table.k) +
                     subleading2[1] * std::pow(lx, table.k - 1);
      os << "," << fmt12(three);
    }
    os << "\n";
  }
  return os.str();
}

std::vector<long> log_grid(long xmin, long xmax, int points_per_decade) {
  if (xmin < 1 || xmax < xmin)
    throw std::invalid_argument("log_grid: bad range");
  if (points_per_decade < 1)
    throw std::invalid_argument("log_grid: need at least one point per decade");
  std::vector<long> out;
  double lmin = std::log10(static_cast<double>(xmin));
  double lmax = std::log10(static_cast<double>(xmax));
  int steps = static_cast<int>(std::ceil((lmax - lmin) * points_per_decade));
  for (int i = 0; i <= steps; ++i) {
    double l = lmin + static_cast<double>(i) / points_per_decade;
    long x = static_cast<long>(std::llround(std::pow(10.0, l)));
    x = std::max(xmin, std::min(xmax, x));
    if (out.empty() || x != out.back()) out.push_back(x);
  }
  if (out.back() != xmax) out.push_back(xmax);
  return out;
}

}  // namespace tracecensus
