// Command-line front end: reproducible counting / unit-group / L-value /
// asymptotics runs over totally real cubic fields, driven by a plain-text
// field spec (poly = ..., optional basis = ...).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tracecensus/asymptotics.hpp"
#include "tracecensus/counting.hpp"
#include "tracecensus/cubic_field.hpp"
#include "tracecensus/lseries.hpp"
#include "tracecensus/units.hpp"
#include "tracecensus/util.hpp"

namespace tc = tracecensus;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string field_path;
  int threads = 0;  // 0 = all available
};

// stage-labeled error propagation: every failure names the stage it came from
template <typename Fn>
int run_stage(const char* stage, Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error [" << stage << "]: " << e.what() << "\n";
    return 1;
  }
}

tc::Field load_field(const RunConfig& cfg) {
  tc::FieldSpec spec = tc::load_field_spec(cfg.field_path);
  return tc::build_field(spec);
}

std::string elem_str(const tc::FieldElement& z) {
  std::ostringstream os;
  os << "(" << z.c[0] << ", " << z.c[1] << ", " << z.c[2] << ")";
  return os.str();
}

std::string poly_str(const tc::CubicPoly& p) {
  std::ostringstream os;
  os << "x^3";
  auto term = [&](const mpz_class& c, const char* mon) {
    if (c == 0) return;
    os << (c > 0 ? " + " : " - ");
    mpz_class a = abs(c);
    bool unit_mon = std::string(mon).empty();
    if (a != 1 || unit_mon) os << a << (unit_mon ? "" : " ");
    os << mon;
  };
  term(p.a, "x^2");
  term(p.b, "x");
  term(p.c, "");
  return os.str();
}

std::string char_str(const tc::SignCharacter& v) {
  std::ostringstream os;
  os << v.e[0] << v.e[1] << v.e[2];
  return os.str();
}

tc::SignCharacter parse_char(const std::string& s) {
  if (s.size() != 3 || s.find_first_not_of("01") != std::string::npos)
    throw std::invalid_argument("character must be three 0/1 digits, e.g. 011");
  return tc::SignCharacter{{s[0] - '0', s[1] - '0', s[2] - '0'}};
}

void write_series_csv(std::ostream& os, const tc::CountSeries& s) {
  os << "a,N_a,r_a,E_a\n";
  for (long a = 1; a <= s.X; ++a)
    os << a << "," << s.N[a] << "," << tc::fmt12(s.r[a]) << "," << tc::fmt12(s.E[a])
       << "\n";
}

tc::CountSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("file not found: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "a,N_a,r_a,E_a")
    throw std::invalid_argument("bad series CSV header in " + path);
  std::vector<std::array<double, 3>> rows;
  long expect = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[4];
    for (int i = 0; i < 4; ++i) std::getline(ss, f[i], ',');
    if (std::stol(f[0]) != expect)
      throw std::invalid_argument("series CSV rows must be consecutive from a = 1");
    rows.push_back({std::stod(f[1]), std::stod(f[2]), std::stod(f[3])});
    ++expect;
  }
  tc::CountSeries s;
  s.X = expect - 1;
  s.N.assign(s.X + 1, 0);
  s.r.assign(s.X + 1, 0.0);
  s.E.assign(s.X + 1, 0.0);
  for (long a = 1; a <= s.X; ++a) {
    s.N[a] = static_cast<long long>(rows[a - 1][0]);
    s.r[a] = rows[a - 1][1];
    s.E[a] = rows[a - 1][2];
  }
  return s;
}

// shared units / characters stage
struct CharData {
  tc::UnitSystem us;
  tc::TotallyPositiveGens tp;
  std::vector<tc::SignCharacter> good;
  std::vector<tc::SignCharacter> nontrivial;

  CharData(const tc::Field& field, double bound = 12.0) {
    us = tc::find_units(field, bound);
    tp = tc::totally_positive_gens(field, us);
    good = tc::good_characters(field, us);
    for (const auto& v : good)
      if (!v.is_trivial()) nontrivial.push_back(v);
  }
};

// degree-2 fit when the grid supports it; empty coefficients otherwise
tc::FitResult fit_or_skip(const tc::WeightedSumTable& t) {
  if (t.X.size() < 4 || t.X.back() / t.X.front() < 10.0) return {};
  return tc::fit_coefficients(t, 2);
}

std::vector<long> parse_grid(const std::string& spec, long xmin, long xmax) {
  if (spec.rfind("log", 0) == 0) {
    int ppd = std::stoi(spec.substr(3));
    return tc::log_grid(xmin, xmax, ppd);
  }
  std::vector<long> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  if (out.empty()) throw std::invalid_argument("empty grid spec");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trace census toolkit for totally real cubic fields"};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");

  int exit_code = 0;

  // info ---------------------------------------------------------------
  auto* cmd_info = app.add_subcommand("info", "field invariants and bases");
  cmd_info->add_option("--field", cfg.field_path, "field spec file")->required();
  cmd_info->callback([&] {
    exit_code = run_stage("field", [&] {
      tc::Field F = load_field(cfg);
      std::cout << "field: " << poly_str(F.poly()) << "\n";
      std::cout << "D = " << F.disc() << "\n";
      std::cout << "kappa = " << F.kappa() << "\n";
      const tc::TraceBasis& tb = F.trace_basis();
      std::cout << "trace basis (coordinates over the working integral basis):\n";
      for (int i = 0; i < 3; ++i)
        std::cout << "  b" << i + 1 << " = " << elem_str(tb.beta[i]) << "   trace "
                  << F.trace(tb.beta[i]) << "\n";
      std::cout << "embeddings of the basis elements:\n";
      for (int j = 0; j < 3; ++j) {
        std::cout << "  w" << j + 1 << " ->";
        for (int i = 0; i < 3; ++i) {
          tc::FieldElement ej;
          ej.c[j] = 1;
          std::cout << " " << tc::fmt12(F.embed(ej, i, 60).mid_double());
        }
        std::cout << "\n";
      }
    });
  });

  // units ----------------------------------------------------------------
  double unit_bound = 12.0;
  auto* cmd_units = app.add_subcommand("units", "fundamental units and regulator");
  cmd_units->add_option("--field", cfg.field_path, "field spec file")->required();
  cmd_units->add_option("--bound", unit_bound, "log-size search bound");
  cmd_units->callback([&] {
    exit_code = run_stage("units", [&] {
      tc::Field F = load_field(cfg);
      tc::UnitSystem us = tc::find_units(F, unit_bound);
      std::cout << "eps1 = " << elem_str(us.eps1) << "\n";
      std::cout << "eps2 = " << elem_str(us.eps2) << "\n";
      std::cout << "regulator R = " << tc::fmt12(us.reg) << " (err <= "
                << tc::fmt12(us.reg_err) << ")\n";
      const char* names[3] = {"-1  ", "eps1", "eps2"};
      for (int r = 0; r < 3; ++r) {
        std::cout << "signature " << names[r] << ": ";
        for (int i = 0; i < 3; ++i) std::cout << us.signatures[r][i];
        std::cout << "\n";
      }
      std::cout << "units found in the search box: " << us.found_units.size()
                << " (bound " << us.search_bound << ")\n";
    });
  });

  // good-pairs -------------------------------------------------------------
  double mu_radius = 0.0;
  auto* cmd_good = app.add_subcommand("good-pairs", "sign-character census");
  cmd_good->add_option("--field", cfg.field_path, "field spec file")->required();
  cmd_good->add_option("--mu-radius", mu_radius,
                       "also list dual-lattice mu up to this norm");
  cmd_good->callback([&] {
    exit_code = run_stage("good-pairs", [&] {
      tc::Field F = load_field(cfg);
      CharData P(F);
      std::cout << "good characters:";
      for (const auto& v : P.good) std::cout << " " << char_str(v);
      std::cout << "\n";
      if (P.nontrivial.empty()) {
        std::cout << "good nontrivial characters: none\n";
      } else {
        std::cout << "good nontrivial characters:";
        for (const auto& v : P.nontrivial) std::cout << " " << char_str(v);
        std::cout << "\n";
      }
      if (mu_radius > 0) {
        for (const auto& v : P.good) {
          auto mus = tc::good_mu_for(F, v, P.tp, P.us, mu_radius);
          std::cout << "v = " << char_str(v) << ": " << mus.size()
                    << " good mu with |mu| <= " << mu_radius << "\n";
          for (std::size_t i = 0; i < mus.size() && i < 24; ++i)
            std::cout << "  mu = (" << tc::fmt12(mus[i].x) << ", "
                      << tc::fmt12(mus[i].y) << ")  coords (" << mus[i].m1 << ", "
                      << mus[i].m2 << ")\n";
          if (mus.size() > 24) std::cout << "  ...\n";
        }
      }
    });
  });

  // count -------------------------------------------------------------------
  long trace_a = 0;
  auto* cmd_count = app.add_subcommand("count", "exact N_a for one trace value");
  cmd_count->add_option("--field", cfg.field_path, "field spec file")->required();
  cmd_count->add_option("--trace", trace_a, "trace value a")->required();
  cmd_count->callback([&] {
    exit_code = run_stage("count", [&] {
      tc::Field F = load_field(cfg);
      long long n = tc::count_exact(F, trace_a);
      bool mult = trace_a > 0 && mpz_class(trace_a) % F.kappa() == 0;
      double r = mult ? tc::geometric_estimate(F, trace_a) : 0.0;
      std::cout << "a,N_a,r_a,E_a\n";
      std::cout << trace_a << "," << n << "," << tc::fmt12(r) << ","
                << tc::fmt12(static_cast<double>(n) - r) << "\n";
    });
  });

  // series -------------------------------------------------------------------
  long series_xmax = 1000;
  std::string series_out;
  auto* cmd_series = app.add_subcommand("series", "N_a, r_a, E_a for a = 1..X");
  cmd_series->add_option("--field", cfg.field_path, "field spec file")->required();
  cmd_series->add_option("--xmax", series_xmax, "largest trace value")->required();
  cmd_series->add_option("--out", series_out, "output CSV (stdout when omitted)");
  cmd_series->callback([&] {
    exit_code = run_stage("series", [&] {
      tc::Field F = load_field(cfg);
      tc::CountSeries s = tc::error_series(F, series_xmax, cfg.threads);
      if (series_out.empty()) {
        write_series_csv(std::cout, s);
      } else {
        std::ofstream out(series_out);
        if (!out) throw std::runtime_error("cannot open " + series_out);
        write_series_csv(out, s);
      }
    });
  });

  // lvalue -------------------------------------------------------------------
  std::string char_spec;
  long long cutoff = 100000;
  auto* cmd_lvalue =
      app.add_subcommand("lvalue", "partial Hecke L(1,v) by smoothed sums");
  cmd_lvalue->add_option("--field", cfg.field_path, "field spec file")->required();
  cmd_lvalue->add_option("--char", char_spec, "sign character, e.g. 011")->required();
  cmd_lvalue->add_option("--cutoff", cutoff, "smoothing cutoff B");
  cmd_lvalue->callback([&] {
    exit_code = run_stage("lvalue", [&] {
      tc::Field F = load_field(cfg);
      CharData P(F);
      tc::SignCharacter v = parse_char(char_spec);
      tc::LValue lv = tc::l_value(F, P.tp, P.us, v, cutoff, cfg.threads);
      std::cout << "L(1,v) = " << tc::fmt12(lv.value) << " ± "
                << tc::fmt12(lv.error_estimate) << " (B=" << lv.B_used << ")\n";
    });
  });

  // coeff -------------------------------------------------------------------
  int weight_k = 3;
  auto* cmd_coeff = app.add_subcommand("coeff", "leading asymptotic coefficient");
  cmd_coeff->add_option("--field", cfg.field_path, "field spec file")->required();
  cmd_coeff->add_option("--k", weight_k, "log-weight exponent (>= 3)");
  cmd_coeff->add_option("--cutoff", cutoff, "L-value smoothing cutoff B");
  cmd_coeff->callback([&] {
    exit_code = run_stage("coeff", [&] {
      tc::Field F = load_field(cfg);
      CharData P(F);
      std::vector<tc::LValue> lvals;
      for (const auto& v : P.nontrivial)
        lvals.push_back(tc::l_value(F, P.tp, P.us, v, cutoff, cfg.threads));
      tc::MainCoefficient C = tc::main_coefficient(F, P.us, P.tp, weight_k, lvals);
      std::cout << "D = " << F.disc() << ", R = " << tc::fmt12(P.us.reg)
                << ", k = " << weight_k << "\n";
      for (const auto& lv : lvals)
        std::cout << "L(1," << char_str(lv.chi) << ") = " << tc::fmt12(lv.value)
                  << " ± " << tc::fmt12(lv.error_estimate) << " (B=" << lv.B_used
                  << ")\n";
      std::cout << "leading coefficient C = " << tc::fmt12(C.value) << " ± "
                << tc::fmt12(C.error) << "\n";
    });
  });

  // fit ---------------------------------------------------------------------
  int fit_degree = 2;
  long fit_xmin = 100, fit_xmax = 100000;
  std::string fit_in;
  auto* cmd_fit = app.add_subcommand("fit", "log-polynomial least squares on S(X)");
  cmd_fit->add_option("--field", cfg.field_path, "field spec file")->required();
  cmd_fit->add_option("--degree", fit_degree, "number of sub-leading terms");
  cmd_fit->add_option("--xmin", fit_xmin, "grid start");
  cmd_fit->add_option("--xmax", fit_xmax, "grid end");
  cmd_fit->add_option("--k", weight_k, "log-weight exponent");
  cmd_fit->add_option("--in", fit_in, "reuse a series CSV instead of recounting");
  cmd_fit->callback([&] {
    exit_code = run_stage("fit", [&] {
      tc::Field F = load_field(cfg);
      tc::CountSeries s = fit_in.empty() ? tc::error_series(F, fit_xmax, cfg.threads)
                                         : read_series_csv(fit_in);
      if (s.X < fit_xmax) throw std::invalid_argument("series shorter than xmax");
      tc::WeightedSumTable t =
          tc::weighted_sum_table(s, tc::log_grid(fit_xmin, fit_xmax, 20), weight_k);
      tc::FitResult f = tc::fit_coefficients(t, fit_degree);
      std::cout << "fit of S(X) against log powers " << weight_k + 1 << ".."
                << weight_k + 1 - fit_degree << " over X in [" << fit_xmin << ", "
                << fit_xmax << "]\n";
      for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        std::cout << "  coeff[log^" << weight_k + 1 - static_cast<int>(i)
                  << "] = " << tc::fmt12(f.coeffs[i]) << "\n";
      std::cout << "residual = " << tc::fmt12(f.residual)
                << ", cond = " << tc::fmt12(f.cond)
                << (f.ill_conditioned ? " (ill-conditioned)" : "") << "\n";
    });
  });

  // report ---------------------------------------------------------------
  std::string grid_spec = "log20";
  std::string report_out;
  std::string sub_spec;
  auto* cmd_report = app.add_subcommand("report", "S(X) vs prediction table");
  cmd_report->add_option("--field", cfg.field_path, "field spec file")->required();
  cmd_report->add_option("--grid", grid_spec, "logN or comma list of X values");
  cmd_report->add_option("--xmin", fit_xmin, "grid start for logN grids");
  cmd_report->add_option("--xmax", fit_xmax, "grid end");
  cmd_report->add_option("--k", weight_k, "log-weight exponent");
  cmd_report->add_option("--cutoff", cutoff, "L-value smoothing cutoff B");
  cmd_report->add_option("--sub", sub_spec, "two sub-leading coefficients c2,c3");
  cmd_report->add_option("--out", report_out, "output CSV (stdout when omitted)");
  cmd_report->callback([&] {
    exit_code = run_stage("report", [&] {
      tc::Field F = load_field(cfg);
      CharData P(F);
      std::vector<tc::LValue> lvals;
      for (const auto& v : P.nontrivial)
        lvals.push_back(tc::l_value(F, P.tp, P.us, v, cutoff, cfg.threads));
      tc::MainCoefficient C = tc::main_coefficient(F, P.us, P.tp, weight_k, lvals);
      std::vector<long> grid = parse_grid(grid_spec, fit_xmin, fit_xmax);
      tc::CountSeries s = tc::error_series(F, grid.back(), cfg.threads);
      tc::WeightedSumTable t = tc::weighted_sum_table(s, grid, weight_k);
      std::string csv;
      if (!sub_spec.empty()) {
        auto comma = sub_spec.find(',');
        if (comma == std::string::npos)
          throw std::invalid_argument("--sub needs two comma-separated values");
        double sub[2] = {std::stod(sub_spec.substr(0, comma)),
                         std::stod(sub_spec.substr(comma + 1))};
        csv = tc::compare_report(t, C, sub);
      } else {
        csv = tc::compare_report(t, C);
      }
      if (report_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(report_out);
        if (!out) throw std::runtime_error("cannot open " + report_out);
        out << csv;
      }
    });
  });

  // pipeline -----------------------------------------------------------------
  std::string outdir;
  long pipe_xmax = 10000;
  auto* cmd_pipe = app.add_subcommand("pipeline", "full run: units to report");
  cmd_pipe->add_option("--field", cfg.field_path, "field spec file")->required();
  cmd_pipe->add_option("--xmax", pipe_xmax, "largest trace value");
  cmd_pipe->add_option("--k", weight_k, "log-weight exponent");
  cmd_pipe->add_option("--cutoff", cutoff, "L-value smoothing cutoff B");
  cmd_pipe->add_option("--outdir", outdir, "output directory")->required();
  cmd_pipe->callback([&] {
    std::optional<tc::Field> field_store;
    exit_code = run_stage("field", [&] {
      field_store = load_field(cfg);
      fs::create_directories(outdir);
    });
    if (exit_code) return;
    const tc::Field& F = *field_store;

    std::unique_ptr<CharData> P;
    exit_code = run_stage("units", [&] { P = std::make_unique<CharData>(F); });
    if (exit_code) return;

    tc::CountSeries series;
    exit_code = run_stage("series", [&] {
      series = tc::error_series(F, pipe_xmax, cfg.threads);
      std::ofstream out(outdir + "/series.csv");
      if (!out) throw std::runtime_error("cannot open " + outdir + "/series.csv");
      write_series_csv(out, series);
    });
    if (exit_code) return;

    std::vector<tc::LValue> lvals;
    exit_code = run_stage("lvalue", [&] {
      for (const auto& v : P->nontrivial)
        lvals.push_back(tc::l_value(F, P->tp, P->us, v, cutoff, cfg.threads));
    });
    if (exit_code) return;

    tc::MainCoefficient C;
    exit_code = run_stage("coeff", [&] {
      C = tc::main_coefficient(F, P->us, P->tp, weight_k, lvals);
    });
    if (exit_code) return;

    exit_code = run_stage("report", [&] {
      long xmin = std::max(100L, pipe_xmax / 100);
      tc::WeightedSumTable t =
          tc::weighted_sum_table(series, tc::log_grid(xmin, pipe_xmax, 20), weight_k);
      std::ofstream rep(outdir + "/report.csv");
      if (!rep) throw std::runtime_error("cannot open " + outdir + "/report.csv");
      rep << tc::compare_report(t, C);

      tc::FitResult fit = fit_or_skip(t);

      std::ofstream sum(outdir + "/summary.txt");
      if (!sum) throw std::runtime_error("cannot open " + outdir + "/summary.txt");
      sum << "field: " << poly_str(F.poly()) << "\n";
      sum << "D = " << F.disc() << ", kappa = " << F.kappa() << "\n";
      sum << "regulator R = " << tc::fmt12(P->us.reg) << "\n";
      if (P->nontrivial.empty()) {
        sum << "good nontrivial characters: none; predicted leading coefficient 0\n";
      } else {
        sum << "good nontrivial characters:";
        for (const auto& v : P->nontrivial) sum << " " << char_str(v);
        sum << "\n";
        for (const auto& lv : lvals)
          sum << "L(1," << char_str(lv.chi) << ") = " << tc::fmt12(lv.value)
              << " ± " << tc::fmt12(lv.error_estimate) << " (B=" << lv.B_used
              << ")\n";
        sum << "predicted leading coefficient C = " << tc::fmt12(C.value) << " ± "
            << tc::fmt12(C.error) << " (k = " << weight_k << ")\n";
      }
      double lx = std::log(static_cast<double>(pipe_xmax));
      double snorm = t.normalized.back();
      sum << "S(X)/log^" << weight_k + 1 << " X at X = " << pipe_xmax << ": "
          << tc::fmt12(snorm) << "\n";
      if (!fit.coeffs.empty())
        sum << "leading coefficient comparison: fitted " << tc::fmt12(fit.coeffs[0])
            << " vs predicted " << tc::fmt12(C.value) << " over X in ["
            << std::max(100L, pipe_xmax / 100) << ", " << pipe_xmax << "]\n";
      (void)lx;
    });
  });

  // verify --------------------------------------------------------------
  long verify_amax = 300;
  auto* cmd_verify =
      app.add_subcommand("verify", "oracle equivalence of the two counters");
  cmd_verify->add_option("--field", cfg.field_path, "field spec file")->required();
  cmd_verify->add_option("--amax", verify_amax, "check all a up to this bound");
  cmd_verify->callback([&] {
    exit_code = run_stage("verify", [&] {
      tc::Field F = load_field(cfg);
      for (long a = 1; a <= verify_amax; ++a) {
        long long e = tc::count_exact(F, a);
        long long n = tc::count_naive(F, a);
        if (e != n)
          throw std::runtime_error("counter mismatch at a = " + std::to_string(a) +
                                   ": exact " + std::to_string(e) + ", naive " +
                                   std::to_string(n));
      }
      std::cout << "verify: count_exact == count_naive for all a <= " << verify_amax
                << "\n";
    });
  });

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}
