#pragma once

// Experiment configuration (INI-style, sections + key = value), validation,
// and CSV/plot-script generation for operator curves, moments, convergence
// tables and rate-bound reports.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pqbb/analysis.hpp"
#include "pqbb/baskakov_beta.hpp"
#include "pqbb/core.hpp"
#include "pqbb/function_spec.hpp"

namespace pqbb {

struct OutputSelection {
  bool curves = true;
  bool moments = false;
  bool convergence = false;
  bool bounds = false;
  bool plot = false;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ParameterSchedule schedule = ParameterSchedule::q_ratio();
  FunctionSpec function = FunctionSpec::named("e0");
  std::vector<std::int64_t> n_list;
  EvalGrid grid{0.0, 5.0, 101};
  TruncationPolicy policy;
  OutputSelection outputs;
  double kappa = 2.0;
  std::filesystem::path output_path = "out";
};

struct ConfigValidation {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> diagnostics;
  bool ok() const noexcept { return config.has_value() && diagnostics.empty(); }
};

enum ExitStatus : int { exit_success = 0, exit_config_error = 1, exit_partial = 2 };

namespace detail {

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::optional<double> parse_double(const std::string& s) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

inline std::optional<std::int64_t> parse_int(const std::string& s) {
  const std::string t = trim(s);
  std::int64_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

inline const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"experiment", {"name", "output"}},
      {"parameters", {"p", "q", "schedule", "alpha", "beta"}},
      {"function", {"kind", "coefficients", "name", "grid", "values", "growth_bound"}},
      {"run", {"n_list", "outputs", "plot", "kappa"}},
      {"grid", {"start", "stop", "points"}},
      {"policy", {"rel_tol", "abs_tol", "max_terms"}},
  };
  return keys;
}

/// Typed access to the parsed tree that records a diagnostic instead of throwing.
class Reader {
public:
  Reader(const boost::property_tree::ptree& tree, std::vector<std::string>& diagnostics)
      : tree_(tree), diag_(diagnostics) {}

  std::optional<std::string> text(const std::string& path) const {
    if (auto v = tree_.get_optional<std::string>(path)) return trim(*v);
    return std::nullopt;
  }

  std::optional<double> real(const std::string& path) const {
    auto t = text(path);
    if (!t) return std::nullopt;
    auto v = parse_double(*t);
    if (!v) diag_.push_back(path + ": expected a real number, got '" + *t + "'");
    return v;
  }

  std::optional<std::int64_t> integer(const std::string& path) const {
    auto t = text(path);
    if (!t) return std::nullopt;
    auto v = parse_int(*t);
    if (!v) diag_.push_back(path + ": expected an integer, got '" + *t + "'");
    return v;
  }

  std::optional<std::vector<double>> reals(const std::string& path) const {
    auto t = text(path);
    if (!t) return std::nullopt;
    std::vector<double> out;
    for (const auto& item : split_list(*t)) {
      auto v = parse_double(item);
      if (!v) {
        diag_.push_back(path + ": '" + item + "' is not a real number");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

private:
  const boost::property_tree::ptree& tree_;
  std::vector<std::string>& diag_;
};

inline const char* regime_text() { return "the parameters must satisfy 0 < q < p <= 1"; }

}  // namespace detail

/// Parses INI text into a tree, applying `section.key=value` overrides.
/// Parse failures are reported with their line number.
inline std::optional<boost::property_tree::ptree> parse_config_tree(const std::string& text,
                                                                    const std::vector<std::string>& overrides,
                                                                    std::vector<std::string>& diagnostics) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    diagnostics.push_back("line " + std::to_string(e.line()) + ": " + e.message());
    return std::nullopt;
  }
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || ov.find('.') == std::string::npos || ov.find('.') > eq) {
      diagnostics.push_back("override '" + ov + "': expected section.key=value");
      continue;
    }
    tree.put(detail::trim(ov.substr(0, eq)), detail::trim(ov.substr(eq + 1)));
  }
  return tree;
}

inline ConfigValidation validate_config_tree(const boost::property_tree::ptree& tree) {
  ConfigValidation result;
  auto& diag = result.diagnostics;
  const detail::Reader rd(tree, diag);

  for (const auto& [section, body] : tree) {
    const auto known = detail::known_keys().find(section);
    if (known == detail::known_keys().end()) {
      diag.push_back("unknown section [" + section + "]");
      continue;
    }
    for (const auto& [key, value] : body)
      if (!known->second.count(key)) diag.push_back("unknown key '" + key + "' in [" + section + "]");
  }

  ExperimentConfig cfg;
  if (auto v = rd.text("experiment.name")) cfg.name = *v;
  if (auto v = rd.text("experiment.output")) cfg.output_path = *v;

  // parameters
  const std::string schedule = rd.text("parameters.schedule").value_or("fixed");
  bool schedule_ok = true;
  if (schedule == "fixed") {
    const auto p = rd.real("parameters.p"), q = rd.real("parameters.q");
    if (!p || !q) {
      diag.push_back("[parameters]: fixed schedule needs both p and q");
      schedule_ok = false;
    } else if (!(*q > 0.0 && *q < *p && *p <= 1.0)) {
      std::ostringstream os;
      os << "[parameters]: p = " << *p << ", q = " << *q << " is outside the operator regime; "
         << detail::regime_text();
      diag.push_back(os.str());
      schedule_ok = false;
    } else {
      cfg.schedule = ParameterSchedule::fixed(PQPair(*p, *q));
    }
  } else if (schedule == "q_ratio") {
    cfg.schedule = ParameterSchedule::q_ratio();
  } else if (schedule == "alpha_beta") {
    const auto a = rd.real("parameters.alpha"), b = rd.real("parameters.beta");
    if (!a || !b || !(*a >= 0.0 && *a < *b)) {
      diag.push_back("[parameters]: alpha_beta schedule needs 0 <= alpha < beta");
      schedule_ok = false;
    } else {
      cfg.schedule = ParameterSchedule::alpha_beta(*a, *b);
    }
  } else {
    diag.push_back("[parameters]: unknown schedule '" + schedule + "' (fixed, q_ratio, alpha_beta)");
    schedule_ok = false;
  }

  // function
  std::optional<std::size_t> poly_degree;
  try {
    const std::string kind = rd.text("function.kind").value_or("polynomial");
    const auto growth = rd.real("function.growth_bound");
    if (kind == "polynomial") {
      auto coeffs = rd.reals("function.coefficients");
      if (!coeffs || coeffs->empty()) throw std::invalid_argument("[function]: polynomial needs coefficients");
      Polynomial poly{*coeffs};
      const auto implied = growth ? growth : polynomial_growth_bound(poly);
      cfg.function = FunctionSpec::polynomial(*coeffs, implied);
      poly_degree = poly.degree();
    } else if (kind == "named") {
      const auto id = rd.text("function.name");
      if (!id) throw std::invalid_argument("[function]: named function needs 'name'");
      cfg.function = FunctionSpec::named(*id, growth);
    } else if (kind == "tabulated") {
      auto g = rd.reals("function.grid");
      auto v = rd.reals("function.values");
      if (!g || !v) throw std::invalid_argument("[function]: tabulated function needs 'grid' and 'values'");
      cfg.function = FunctionSpec::tabulated(*g, *v, growth);
    } else {
      throw std::invalid_argument("[function]: unknown kind '" + kind + "' (polynomial, named, tabulated)");
    }
  } catch (const std::invalid_argument& e) {
    diag.push_back(e.what());
  }

  // grid and policy
  if (auto v = rd.real("grid.start")) cfg.grid.start = *v;
  if (auto v = rd.real("grid.stop")) cfg.grid.stop = *v;
  if (auto v = rd.integer("grid.points")) cfg.grid.points = *v;
  try {
    cfg.grid.validate();
  } catch (const std::invalid_argument& e) {
    diag.push_back(std::string("[grid]: ") + e.what());
  }
  if (auto v = rd.real("policy.rel_tol")) cfg.policy.rel_tol = *v;
  if (auto v = rd.real("policy.abs_tol")) cfg.policy.abs_tol = *v;
  if (auto v = rd.integer("policy.max_terms")) cfg.policy.max_terms = *v;
  try {
    cfg.policy.validate();
  } catch (const std::invalid_argument& e) {
    diag.push_back(std::string("[policy]: ") + e.what());
  }

  // outputs
  if (auto list = rd.text("run.outputs")) {
    cfg.outputs = {false, false, false, false, false};
    for (const auto& item : detail::split_list(*list)) {
      if (item == "curves") cfg.outputs.curves = true;
      else if (item == "moments") cfg.outputs.moments = true;
      else if (item == "convergence" || item == "convergence-table") cfg.outputs.convergence = true;
      else if (item == "bounds" || item == "bound-report") cfg.outputs.bounds = true;
      else diag.push_back("[run]: unknown output '" + item + "' (curves, moments, convergence, bounds)");
    }
  }
  if (auto v = rd.text("run.plot")) {
    if (*v == "true" || *v == "1" || *v == "yes") cfg.outputs.plot = true;
    else if (*v == "false" || *v == "0" || *v == "no") cfg.outputs.plot = false;
    else diag.push_back("[run]: plot must be true or false");
  }
  if (auto v = rd.real("run.kappa")) cfg.kappa = *v;
  if (cfg.outputs.bounds) {
    if (!(cfg.kappa > 0.0)) diag.push_back("[run]: kappa must be > 0 for the bound report");
    if (!cfg.function.growth_bound())
      diag.push_back("[function]: bound report needs growth_bound (C_f with |f(x)| <= C_f (1 + x^2))");
  }

  // n_list
  if (auto t = rd.text("run.n_list")) {
    for (const auto& item : detail::split_list(*t)) {
      auto v = detail::parse_int(item);
      if (!v) {
        diag.push_back("[run]: n_list entry '" + item + "' is not an integer");
        continue;
      }
      cfg.n_list.push_back(*v);
    }
  } else {
    cfg.n_list = {10, 20, 50, 100};
  }
  if (cfg.n_list.empty()) diag.push_back("[run]: n_list must not be empty");
  for (std::size_t i = 1; i < cfg.n_list.size(); ++i)
    if (cfg.n_list[i] <= cfg.n_list[i - 1]) {
      diag.push_back("[run]: n_list must be strictly increasing");
      break;
    }
  const bool needs_second_moments = cfg.outputs.moments || cfg.outputs.convergence || cfg.outputs.bounds;
  const std::int64_t curve_min = poly_degree ? static_cast<std::int64_t>(*poly_degree) : 2;
  for (const auto n : cfg.n_list) {
    if (needs_second_moments && n <= 2)
      diag.push_back("[run]: n = " + std::to_string(n) +
                     " is not allowed; the second moment D_n(t^2, x) is defined for n > 2");
    else if (cfg.outputs.curves && n <= curve_min)
      diag.push_back("[run]: n = " + std::to_string(n) + " must exceed " + std::to_string(curve_min) +
                     " for the inner integrals of f to converge");
    if (schedule_ok && n >= 1) {
      try {
        (void)cfg.schedule.at(n);
      } catch (const std::invalid_argument& e) {
        diag.push_back(std::string("[parameters]: ") + e.what());
      }
    }
  }

  if (diag.empty()) result.config = std::move(cfg);
  return result;
}

inline ConfigValidation validate_config_text(const std::string& text, const std::vector<std::string>& overrides = {}) {
  ConfigValidation result;
  auto tree = parse_config_tree(text, overrides, result.diagnostics);
  if (!tree) return result;
  auto validated = validate_config_tree(*tree);
  validated.diagnostics.insert(validated.diagnostics.begin(), result.diagnostics.begin(), result.diagnostics.end());
  if (!validated.diagnostics.empty()) validated.config.reset();
  return validated;
}

inline ConfigValidation validate_config(const std::filesystem::path& path,
                                        const std::vector<std::string>& overrides = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ConfigValidation r;
    r.diagnostics.push_back("cannot read config file '" + path.string() + "'");
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return validate_config_text(buf.str(), overrides);
}

// ---------------------------------------------------------------------------
// Output

/// Shortest round-trip representation; NaN and infinities are written as NA.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  auto join_n = [&] {
    std::string s;
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) s += (i ? ", " : "") + std::to_string(cfg.n_list[i]);
    return s;
  };
  os << "[experiment]\nname = " << cfg.name << "\noutput = " << cfg.output_path.string() << "\n\n";
  os << "[parameters]\n";
  switch (cfg.schedule.family()) {
    case ParameterSchedule::Family::fixed:
      os << "schedule = fixed\np = " << format_number(cfg.schedule.first())
         << "\nq = " << format_number(cfg.schedule.second()) << "\n";
      break;
    case ParameterSchedule::Family::q_ratio: os << "schedule = q_ratio\n"; break;
    case ParameterSchedule::Family::alpha_beta:
      os << "schedule = alpha_beta\nalpha = " << format_number(cfg.schedule.first())
         << "\nbeta = " << format_number(cfg.schedule.second()) << "\n";
      break;
  }
  os << "\n[function]\n";
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        auto join = [](const std::vector<double>& v) {
          std::string s;
          for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
          return s;
        };
        if constexpr (std::is_same_v<K, Polynomial>)
          os << "kind = polynomial\ncoefficients = " << join(k.coefficients) << "\n";
        else if constexpr (std::is_same_v<K, NamedFunction>)
          os << "kind = named\nname = " << k.name << "\n";
        else
          os << "kind = tabulated\ngrid = " << join(k.grid) << "\nvalues = " << join(k.values) << "\n";
      },
      cfg.function.kind());
  if (cfg.function.growth_bound()) os << "growth_bound = " << format_number(*cfg.function.growth_bound()) << "\n";
  std::string outputs;
  auto add = [&](bool on, const char* name) {
    if (on) outputs += (outputs.empty() ? "" : ", ") + std::string(name);
  };
  add(cfg.outputs.curves, "curves");
  add(cfg.outputs.moments, "moments");
  add(cfg.outputs.convergence, "convergence");
  add(cfg.outputs.bounds, "bounds");
  os << "\n[run]\nn_list = " << join_n() << "\noutputs = " << outputs
     << "\nplot = " << (cfg.outputs.plot ? "true" : "false") << "\nkappa = " << format_number(cfg.kappa) << "\n";
  os << "\n[grid]\nstart = " << format_number(cfg.grid.start) << "\nstop = " << format_number(cfg.grid.stop)
     << "\npoints = " << cfg.grid.points << "\n";
  os << "\n[policy]\nrel_tol = " << format_number(cfg.policy.rel_tol)
     << "\nabs_tol = " << format_number(cfg.policy.abs_tol) << "\nmax_terms = " << cfg.policy.max_terms << "\n";
  return os.str();
}

struct RunReport {
  int exit_code = exit_success;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> messages;
  std::int64_t flagged_cells = 0;
};

namespace detail {

class CsvBuilder {
public:
  explicit CsvBuilder(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  CsvBuilder& row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    return *this;
  }
  std::string str() const { return out_.str(); }

private:
  std::ostringstream out_;
};

inline std::string plot_script(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "# Regenerates the operator curves from curves.csv (matplotlib).\n"
     << "import csv\nimport os\nimport matplotlib\nmatplotlib.use('Agg')\nimport matplotlib.pyplot as plt\n\n"
     << "here = os.path.dirname(os.path.abspath(__file__))\n"
     << "with open(os.path.join(here, 'curves.csv')) as fh:\n"
     << "    rows = list(csv.reader(fh))\n"
     << "header, data = rows[0], rows[1:]\n"
     << "xs = [float(r[0]) for r in data]\n"
     << "for col in range(1, len(header)):\n"
     << "    ys = [float(r[col]) if r[col] != 'NA' else float('nan') for r in data]\n"
     << "    style = 'k-' if header[col] == 'f' else '--'\n"
     << "    plt.plot(xs, ys, style, label=header[col])\n"
     << "plt.xlabel('x')\nplt.legend()\n"
     << "plt.title('" << cfg.name << ": " << cfg.schedule.describe() << ", f = " << cfg.function.describe() << "')\n"
     << "plt.savefig(os.path.join(here, 'curves.png'), dpi=150)\n";
  return os.str();
}

}  // namespace detail

/// Runs every requested output and writes the files under `out_dir`
/// (config.output_path when empty). All computation happens before any file
/// is written.
inline RunReport run_experiment(const ExperimentConfig& cfg, std::filesystem::path out_dir = {}) {
  RunReport report;
  if (out_dir.empty()) out_dir = cfg.output_path;
  std::vector<std::pair<std::string, std::string>> files;
  const auto& f = cfg.function;

  auto cell = [&](auto&& compute) -> std::string {
    try {
      const double v = compute();
      if (!std::isfinite(v)) {
        ++report.flagged_cells;
        return "NA";
      }
      return format_number(v);
    } catch (const std::exception& e) {
      ++report.flagged_cells;
      report.messages.push_back(e.what());
      return "NA";
    }
  };

  if (cfg.outputs.curves) {
    std::vector<std::string> header{"x", "f"};
    for (const auto n : cfg.n_list) header.push_back("D_n=" + std::to_string(n));
    detail::CsvBuilder csv(header);
    for (std::int64_t i = 0; i < cfg.grid.points; ++i) {
      const double x = cfg.grid.at(i);
      std::vector<std::string> row{format_number(x), cell([&] { return f(x); })};
      for (const auto n : cfg.n_list)
        row.push_back(cell([&] {
          const auto r = baskakov_beta_apply(cfg.schedule.at(n), f, n, x, cfg.policy);
          return r.trusted() ? r.value : std::numeric_limits<double>::quiet_NaN();
        }));
      csv.row(row);
    }
    files.emplace_back("curves.csv", csv.str());
  }

  if (cfg.outputs.moments) {
    detail::CsvBuilder csv({"n", "x", "M0", "M1", "M2", "mu1", "mu2"});
    for (const auto n : cfg.n_list) {
      for (std::int64_t i = 0; i < cfg.grid.points; ++i) {
        const double x = cfg.grid.at(i);
        csv.row({std::to_string(n), format_number(x),
                 cell([&] { return moments_closed(cfg.schedule.at(n), 0, n, x); }),
                 cell([&] { return moments_closed(cfg.schedule.at(n), 1, n, x); }),
                 cell([&] { return moments_closed(cfg.schedule.at(n), 2, n, x); }),
                 cell([&] { return central_moment(cfg.schedule.at(n), 1, n, x); }),
                 cell([&] { return central_moment(cfg.schedule.at(n), 2, n, x); })});
      }
    }
    files.emplace_back("moments.csv", csv.str());
  }

  if (cfg.outputs.convergence) {
    detail::CsvBuilder csv({"n", "p_n", "q_n", "sup_error", "weighted_error", "mu2_max"});
    for (const auto& row : convergence_run(cfg.schedule, f, cfg.n_list, cfg.grid, cfg.policy)) {
      if (!row.ok) {
        report.flagged_cells += 3;
        report.messages.push_back("convergence row n = " + std::to_string(row.n) + ": " + row.message);
      }
      csv.row({std::to_string(row.n), format_number(row.p), format_number(row.q), format_number(row.sup_error),
               format_number(row.weighted_error), format_number(row.mu2_max)});
    }
    files.emplace_back("convergence.csv", csv.str());
  }

  if (cfg.outputs.bounds) {
    detail::CsvBuilder csv({"n", "p_n", "q_n", "kappa", "L", "sup_error_on_kappa", "theorem2_bound",
                            "max_omega_term", "max_omega2_arg"});
    const EvalGrid moduli_grid{0.0, cfg.kappa + 1.0, std::max<std::int64_t>(cfg.grid.points, 201)};
    for (const auto n : cfg.n_list) {
      std::vector<std::string> row{std::to_string(n)};
      try {
        const PQPair pair = cfg.schedule.at(n);
        const auto bound = theorem2_bound_report(pair, n, f, cfg.kappa, moduli_grid);
        double sup_err = 0.0, omega_term = 0.0, omega2_arg = 0.0;
        bool trusted = true;
        for (std::int64_t i = 0; i < moduli_grid.points && moduli_grid.at(i) <= cfg.kappa * (1.0 + 1e-15); ++i) {
          const double x = moduli_grid.at(i);
          const auto r = baskakov_beta_apply(pair, f, n, x, cfg.policy);
          trusted = trusted && r.trusted();
          sup_err = std::max(sup_err, std::abs(r.value - f(x)));
          const auto t1 = theorem1_bound_terms(pair, n, x, f, moduli_grid);
          omega_term = std::max(omega_term, t1.omega_term);
          omega2_arg = std::max(omega2_arg, t1.omega2_arg);
        }
        if (!trusted) {
          sup_err = std::numeric_limits<double>::quiet_NaN();
          ++report.flagged_cells;
        }
        row.insert(row.end(), {format_number(pair.p()), format_number(pair.q()), format_number(cfg.kappa),
                               format_number(bound.constant_L), format_number(sup_err), format_number(bound.bound),
                               format_number(omega_term), format_number(omega2_arg)});
      } catch (const std::exception& e) {
        report.messages.push_back("bound row n = " + std::to_string(n) + ": " + e.what());
        report.flagged_cells += 8;
        row.resize(9, "NA");
      }
      csv.row(row);
    }
    files.emplace_back("bounds.csv", csv.str());
  }

  if (cfg.outputs.plot && cfg.outputs.curves) files.emplace_back("plot_curves.py", detail::plot_script(cfg));

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    report.exit_code = exit_config_error;
    report.messages.push_back("cannot create output directory '" + out_dir.string() + "'");
    return report;
  }
  for (const auto& [name, content] : files) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) {
      report.exit_code = exit_config_error;
      report.messages.push_back("cannot write '" + path.string() + "'");
      return report;
    }
    report.files.push_back(path);
  }
  report.exit_code = report.flagged_cells > 0 ? exit_partial : exit_success;
  return report;
}

}  // namespace pqbb
