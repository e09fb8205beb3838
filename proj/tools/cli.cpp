#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gravinst/oracle.hpp"
#include "gravinst/params.hpp"
#include "gravinst/solutions.hpp"
#include "gravinst/verify.hpp"

namespace gravinst::cli {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string eta = "2/3";
  std::string gamma = "4/3";
  std::string omega1 = "1/2";
  double k1 = 0;
  double t0 = 1;
  double t1 = 10;
  int n = 100;
  std::string coeffs;
  std::string ic;
  std::string out;
  std::optional<double> tol;
  std::string scope;
};

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string fmt17(double v) { return fmt(v, 17); }

std::string fmt_complex(cplx z) {
  if (z.imag() == 0) return fmt17(z.real());
  return fmt17(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt17(std::abs(z.imag())) + "i";
}

Rational parse_rational(const std::string& flag, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(flag + ": cannot read '" + text + "' as a number (" + e.what() + ")");
  }
}

double parse_double(const std::string& flag, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) throw UsageError(flag + ": cannot read '" + text + "'");
  return v;
}

/// "re", "re+imi", "re-imi" or "imi".
cplx parse_complex(const std::string& flag, std::string text) {
  text.erase(std::remove(text.begin(), text.end(), ' '), text.end());
  if (text.empty()) throw UsageError(flag + ": empty entry");
  if (text.back() != 'i') return {parse_double(flag, text), 0.0};
  text.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = text.size(); k-- > 1;) {
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) {
    const std::string im = text.empty() || text == "+" ? "1" : text == "-" ? "-1" : text;
    return {0.0, parse_double(flag, im)};
  }
  std::string im = text.substr(split);
  if (im == "+" || im == "-") im += "1";
  return {parse_double(flag, text.substr(0, split)), parse_double(flag, im)};
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

ModelParams build_model(const RunConfig& cfg) {
  const Rational eta = parse_rational("--eta", cfg.eta);
  const Rational gamma = parse_rational("--gamma", cfg.gamma);
  const Rational omega1 = parse_rational("--omega1", cfg.omega1);
  if (!(eta > Rational(0))) throw UsageError("--eta: must be positive");
  if (!(omega1 > Rational(0)) || omega1 > Rational(1)) throw UsageError("--omega1: must lie in (0, 1]");
  if (!(cfg.k1 >= 0) || !std::isfinite(cfg.k1)) throw UsageError("--k1: must be finite and >= 0");
  if (omega1 == Rational(1)) return {eta, {gamma}, {omega1}, {cfg.k1}};
  // remaining density in a pressureless component with k = 0
  return {eta, {gamma, Rational(1)}, {omega1, Rational(1) - omega1}, {cfg.k1, 0.0}};
}

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("GRAVINST_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

void add_surd(std::vector<std::string>& row, const QuadSurd& q) {
  row.push_back(q.str());
  row.push_back(fmt(q.to_double(), 15));
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
  os << '\n';
}

int cmd_tables(const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = output_dir(cfg.out);
  const ParameterTables t = emit_tables();

  std::ofstream f21 = open_output(dir / "table21.csv");
  write_csv_row(f21, {"eta", "gamma", "alpha_i", "alpha_i_value", "alpha", "alpha_value", "b1_star", "b1_star_value",
                      "b2_star", "b2_star_value", "b3_star", "b3_star_value", "b4_star", "b4_star_value", "a1_star",
                      "a1_star_value", "a2_star", "a2_star_value"});
  for (const auto& r : t.table21) {
    const ExactParams& ex = *r.params.exact;
    std::vector<std::string> row{r.eta.str(), r.gamma.str()};
    add_surd(row, QuadSurd(ex.alpha_i));
    add_surd(row, QuadSurd(ex.alpha));
    if (r.params.alpha1_zero) {
      row.resize(row.size() + 12);
    } else {
      for (const auto& b : ex.b_star) add_surd(row, b);
      for (const auto& a : *ex.a_star) add_surd(row, a);
    }
    write_csv_row(f21, row);
  }

  std::ofstream f22 = open_output(dir / "table22.csv");
  std::vector<std::string> header{"eta", "gamma"};
  for (int j = 1; j <= 4; ++j) {
    header.push_back("b" + std::to_string(j) + "_star");
    header.push_back("b" + std::to_string(j) + "_star_value");
  }
  for (const auto& [i, j] : kDiffPairs) {
    const std::string name = "b" + std::to_string(i) + "_minus_b" + std::to_string(j);
    header.push_back(name);
    header.push_back(name + "_value");
  }
  write_csv_row(f22, header);
  for (const auto& r : t.table22) {
    std::vector<std::string> row{r.eta.str(), r.gamma.str()};
    for (const auto& b : r.b_star) add_surd(row, b);
    for (const auto& d : r.diffs) add_surd(row, d);
    write_csv_row(f22, row);
  }
  out << "wrote " << (dir / "table21.csv").string() << " (" << t.table21.size() << " rows)\n";
  out << "wrote " << (dir / "table22.csv").string() << " (" << t.table22.size() << " rows)\n";
  return kExitOk;
}

int cmd_modes(const RunConfig& cfg, std::ostream& out) {
  const ModelParams mp = build_model(cfg);
  const DerivedParams dp = derive_params(mp);
  const ExactParams& ex = *dp.exact;
  const PoleReport pr = classify_poles(dp);
  out << "eta: " << ex.eta.str() << "\n"
      << "gamma: " << ex.gamma.str() << "\n"
      << "omega1: " << ex.omega1.str() << "\n"
      << "k1: " << fmt17(dp.k1) << "\n"
      << "alpha_i: " << ex.alpha_i.str() << "\n"
      << "alpha: " << ex.alpha.str() << "\n"
      << "regime: " << to_string(pr.regime) << "\n";
  if (dp.alpha1_zero) {
    const auto d = quartic_roots(dp.eta, dp.omega1, dp.k1);
    const auto [B, C] = quartic_coefficients(dp.eta, dp.omega1, dp.k1);
    out << "quartic: x^4 - (" << fmt17(B) << ") x^2 + (" << fmt17(C) << ")\n";
    for (int j = 0; j < 4; ++j)
      out << "d" << j + 1 << ": " << fmt_complex(d[j]) << "  delta_exponent: " << fmt_complex(dp.alpha + d[j]) << "\n";
    return kExitOk;
  }
  out << "x(t): " << fmt17(dp.k1 * dp.k1 / (dp.alpha_i * dp.alpha_i)) << " * t^(" << ex.alpha_i.str() << ")\n";
  for (int j = 0; j < 4; ++j) out << "b" << j + 1 << "_star: " << ex.b_star[j].str() << " = " << fmt17(dp.b_star[j]) << "\n";
  for (int j = 0; j < 2; ++j) {
    out << "a" << j + 1 << "_star: ";
    if (ex.a_star)
      out << (*ex.a_star)[j].str() << " = ";
    out << fmt_complex(dp.a_star[j]) << "\n";
  }
  for (std::size_t p = 0; p < kDiffPairs.size(); ++p) {
    const auto [i, j] = kDiffPairs[p];
    out << "b" << i << "-b" << j << ": " << (*pr.exact_diffs)[p].str() << " = " << fmt17(pr.pairwise_diffs[p]);
    if ((*pr.exact_diffs)[p].is_integer()) out << "  (integer)";
    out << "\n";
  }
  out << "max_pole_order: " << pr.max_order << "\n";
  out << "integer_classes:";
  for (const auto& cls : pr.integer_classes) {
    out << " {";
    for (std::size_t k = 0; k < cls.size(); ++k) out << (k ? "," : "") << "b" << cls[k] + 1;
    out << "}";
  }
  out << "\n";
  return kExitOk;
}

std::vector<double> eval_grid(const RunConfig& cfg) {
  if (!(cfg.t0 > 0) || !std::isfinite(cfg.t0)) throw UsageError("--t0: must be positive");
  if (!(cfg.t1 >= cfg.t0) || !std::isfinite(cfg.t1)) throw UsageError("--t1: must be >= t0");
  if (cfg.n < 1) throw UsageError("--n: need at least one point");
  std::vector<double> t(static_cast<std::size_t>(cfg.n));
  for (int k = 0; k < cfg.n; ++k)
    t[static_cast<std::size_t>(k)] = cfg.n == 1 ? cfg.t0 : cfg.t0 * std::pow(cfg.t1 / cfg.t0, static_cast<double>(k) / (cfg.n - 1));
  t.back() = cfg.n == 1 ? cfg.t0 : cfg.t1;
  return t;
}

struct EvalRow {
  double t;
  DeltaValue d;
  BasisKind basis;
};

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  if (cfg.coeffs.empty() == cfg.ic.empty()) throw UsageError("eval: give exactly one of --coeffs and --ic");
  const ModelParams mp = build_model(cfg);
  const DerivedParams dp = derive_params(mp);
  const std::vector<double> grid = eval_grid(cfg);

  Coeffs c{};
  std::optional<PhiJet> jet;
  if (!cfg.coeffs.empty()) {
    const auto parts = split_list(cfg.coeffs);
    if (parts.size() != 4) throw UsageError("--coeffs: expected 4 comma-separated values");
    for (int j = 0; j < 4; ++j) c[j] = parse_complex("--coeffs", parts[static_cast<std::size_t>(j)]);
  } else {
    const auto parts = split_list(cfg.ic);
    if (parts.size() != 4) throw UsageError("--ic: expected delta and its first three t-derivatives at t0");
    std::array<double, 4> dj{};
    for (int j = 0; j < 4; ++j) dj[j] = parse_double("--ic", parts[static_cast<std::size_t>(j)]);
    jet = phi_jet_from_delta(dp.alpha, cfg.t0, dj);
  }

  std::ostringstream report;
  report << "eta=" << cfg.eta << " gamma=" << cfg.gamma << " omega1=" << cfg.omega1 << " k1=" << fmt17(cfg.k1) << "\n";
  report << "regime=" << to_string(classify_poles(dp).regime) << "\n";
  report << "t0=" << fmt17(cfg.t0) << " t1=" << fmt17(cfg.t1) << " n=" << cfg.n << "\n";

  std::vector<EvalRow> rows;
  rows.reserve(grid.size());
  if (dp.alpha1_zero) {
    const SolutionSet ss = basis_power_law(dp.eta, dp.omega1, dp.k1);
    if (jet) {
      const FitResult fr = fit_coefficients(ss, cfg.t0, *jet);
      c = fr.coeffs;
      report << "fit_condition=" << fmt(fr.condition, 6) << (fr.ill_conditioned ? " (ill-conditioned)" : "") << "\n";
    }
    report << "basis=power_law";
    for (const auto& b : ss.basis) report << " [" << b.name() << "]";
    report << "\n";
    for (double t : grid) rows.push_back({t, delta_of_t(ss, c, t), BasisKind::PowerLaw});
  } else {
    GrowthSolution g(dp);
    if (jet) {
      const FitResult fr = g.fit(cfg.t0, *jet);
      report << "fit_condition=" << fmt(fr.condition, 6) << (fr.ill_conditioned ? " (ill-conditioned)" : "") << "\n";
    } else {
      g.set_coefficients(c, g.basis_at(cfg.t0));
    }
    report << "coefficients_basis=" << to_string(g.basis_at(cfg.t0)) << "\n";
    report << "cross_fit_residual=" << fmt(g.crossing().max_rel_residual, 6) << "\n";
    const double ts = g.t_switch();
    report << "x_switch=" << fmt17(g.validity().x_switch) << " t_switch=" << fmt17(ts);
    const bool inside = ts > std::min(cfg.t0, cfg.t1) && ts < std::max(cfg.t0, cfg.t1);
    report << (inside ? " (switchover inside the requested range)" : " (no switchover in range)") << "\n";
    for (double t : grid) {
      try {
        rows.push_back({t, g.delta(t), g.basis_at(t)});
      } catch (const std::domain_error& e) {
        throw UsageError(std::string("eval: ") + e.what());
      }
    }
  }

  double imag_max = 0;
  for (const auto& r : rows) imag_max = std::max(imag_max, std::abs(r.d.imag));
  report << "imag_max=" << fmt(imag_max, 6) << "\n";

  const fs::path csv = cfg.out.empty() ? output_dir("") / "eval.csv" : fs::path(cfg.out);
  {
    std::ofstream f = open_output(csv);
    f << "t,delta,err_estimate,basis_used\n";
    for (const auto& r : rows)
      f << fmt17(r.t) << ',' << fmt17(r.d.delta) << ',' << fmt17(r.d.err) << ',' << to_string(r.basis) << '\n';
  }
  fs::path side = csv;
  side.replace_extension(".report.txt");
  {
    std::ofstream f = open_output(side);
    f << report.str();
  }
  out << "wrote " << csv.string() << " (" << rows.size() << " rows)\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  VerifyScope scope;
  try {
    scope = parse_scope(cfg.scope);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  VerifyOptions opts;
  if (cfg.tol) {
    if (!(*cfg.tol > 0)) throw UsageError("--tol: must be positive");
    opts.tol = cfg.tol;
  }
  const auto results = run_verification(scope, opts);
  int passed = 0;
  for (const auto& r : results) {
    out << format_check(r) << "\n";
    passed += r.pass ? 1 : 0;
  }
  const bool ok = passed == static_cast<int>(results.size());
  out << "SUMMARY " << (ok ? "PASS" : "FAIL") << ' ' << passed << '/' << results.size() << "\n";
  return ok ? kExitOk : kExitVerifyFailed;
}

void add_model_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--eta", cfg.eta, "expansion index eta (p/q or decimal)")->capture_default_str();
  sub->add_option("--gamma", cfg.gamma, "polytropic index of component 1")->capture_default_str();
  sub->add_option("--omega1", cfg.omega1, "density fraction of component 1")->capture_default_str();
  sub->add_option("--k1", cfg.k1, "wave constant k1 >= 0")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Analytic growth solutions for multicomponent perturbations"};
  app.name("gravinst");
  app.require_subcommand(1, 1);

  auto* tables = app.add_subcommand("tables", "write table21.csv and table22.csv");
  tables->add_option("--out", cfg.out, "output directory (default $GRAVINST_OUTPUT_DIR or .)");

  auto* modes = app.add_subcommand("modes", "derived parameters, pole report and power-law modes");
  add_model_flags(modes, cfg);

  auto* eval = app.add_subcommand("eval", "evaluate delta(t) to CSV");
  add_model_flags(eval, cfg);
  eval->add_option("--t0", cfg.t0, "first time (coefficients / initial data refer to it)")->capture_default_str();
  eval->add_option("--t1", cfg.t1, "last time")->capture_default_str();
  eval->add_option("--n", cfg.n, "number of log-spaced points")->capture_default_str();
  eval->add_option("--coeffs", cfg.coeffs, "four basis coefficients, e.g. 1,0,0.5-2i,0");
  eval->add_option("--ic", cfg.ic, "delta, delta', delta'', delta''' at t0");
  eval->add_option("--out", cfg.out, "CSV path (default $GRAVINST_OUTPUT_DIR/eval.csv)");

  auto* verify = app.add_subcommand("verify", "run acceptance checks");
  verify->add_option("scope", cfg.scope, "tables, residues, ode or all")->required();
  verify->add_option("--tol", cfg.tol, "override every check tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*tables) return cmd_tables(cfg, out);
    if (*modes) return cmd_modes(cfg, out);
    if (*eval) return cmd_eval(cfg, out);
    return cmd_verify(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace gravinst::cli
