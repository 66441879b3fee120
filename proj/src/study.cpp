#include "lsfem/study.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>

#include "lsfem/convergence.hpp"
#include "lsfem/error.hpp"
#include "lsfem/vtk_writer.hpp"

namespace lsfem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(d)) {
    throw ConfigError("invalid number for " + key + ": '" + v + "'");
  }
  return d;
}

long to_integer(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw ConfigError("expected an integer for " + key + ": '" + v + "'");
  return static_cast<long>(d);
}

std::string cell(const std::optional<double>& v) {
  if (!v) return {};
  std::ostringstream s;
  s << std::setprecision(17) << *v;
  return s.str();
}

std::vector<double> dofs_of(const std::vector<ConvergenceRecord>& r) {
  std::vector<double> d;
  for (const auto& x : r) d.push_back(static_cast<double>(x.dofs));
  return d;
}

template <class Get>
std::vector<std::optional<double>> column(const std::vector<ConvergenceRecord>& r, Get get) {
  std::vector<std::optional<double>> c;
  for (const auto& x : r) c.push_back(get(x));
  return c;
}

std::vector<std::pair<std::string, std::vector<std::optional<double>>>> norm_columns(
    const std::vector<ConvergenceRecord>& r) {
  return {{"err_ls", column(r, [](const ConvergenceRecord& x) { return x.err_ls; })},
          {"err_l2_u", column(r, [](const ConvergenceRecord& x) { return x.err_l2_u; })},
          {"err_hdiv", column(r, [](const ConvergenceRecord& x) { return x.err_hdiv; })},
          {"eta", column(r, [](const ConvergenceRecord& x) { return std::optional<double>(x.eta); })}};
}

std::optional<TraceSelector> trace_selector(const ProblemSpec& p) {
  if (p.overshoot) return p.overshoot->selector;
  if (p.curved_boundary) return std::nullopt;
  return TraceSelector{TraceSelector::Kind::boundary_line_y, 1.0};
}

}  // namespace

std::string_view to_string(StudyMode m) { return m == StudyMode::uniform ? "uniform" : "adaptive"; }

StudyMode parse_mode(std::string_view s) {
  if (s == "uniform") return StudyMode::uniform;
  if (s == "adaptive") return StudyMode::adaptive;
  throw ConfigError("unknown mode '" + std::string(s) + "' (expected uniform or adaptive)");
}

void apply_setting(StudyConfig& c, const std::string& key, const std::string& value) {
  if (key == "problem") {
    const auto names = catalog_names();
    if (std::find(names.begin(), names.end(), value) == names.end()) {
      throw ConfigError("unknown problem '" + value + "'");
    }
    c.problem = value;
  } else if (key == "formulation") {
    c.formulation = parse_formulation(value);
  } else if (key == "recovery") {
    c.recovery = parse_recovery(value);
  } else if (key == "mode") {
    c.mode = parse_mode(value);
  } else if (key == "theta") {
    c.theta = to_double(key, value);
    if (!(c.theta >= 0.0 && c.theta <= 1.0)) throw ConfigError("theta must lie in [0, 1]");
  } else if (key == "budget") {
    const long b = to_integer(key, value);
    if (b <= 0) throw ConfigError("budget must be positive");
    c.budget = static_cast<Index>(b);
  } else if (key == "levels") {
    const long l = to_integer(key, value);
    if (l < 0) throw ConfigError("levels must be non-negative");
    c.levels = static_cast<int>(l);
  } else if (key == "quad-degree") {
    const long q = to_integer(key, value);
    if (q < 1 || q > kMaxQuadratureDegree) throw ConfigError("quad-degree must lie in 1..10");
    c.quad_degree = static_cast<int>(q);
  } else if (key == "solver") {
    c.solver = parse_solver_method(value);
  } else if (key == "tol") {
    c.tol = to_double(key, value);
    if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
  } else if (key == "epsilon") {
    c.epsilon = to_double(key, value);
    if (!(c.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  } else if (key == "out-dir") {
    c.out_dir = value;
  } else if (key == "emit") {
    c.emit.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      if (item != "csv" && item != "vtk" && item != "mesh" && item != "trace") {
        throw ConfigError("unknown emit item '" + item + "' (expected csv, vtk, mesh, trace)");
      }
      c.emit.insert(item);
    }
  } else if (key == "check") {
    c.check = value;
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

std::map<std::string, std::string> read_config_file(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key=value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

ProblemSpec problem_of(const StudyConfig& c) {
  ProblemParams p;
  p.epsilon = c.epsilon;
  return builtin(c.problem, p);
}

StudyOptions to_options(const StudyConfig& c) {
  StudyOptions o;
  o.formulation = c.formulation;
  o.recovery = c.recovery;
  o.theta = c.theta;
  o.dof_budget = c.budget;
  o.levels = c.levels;
  o.quad_degree = c.quad_degree;
  o.solver = c.solver;
  o.tol = c.tol;
  return o;
}

OrderSummary fitted_orders(const std::vector<ConvergenceRecord>& r, int window) {
  const auto d = dofs_of(r);
  OrderSummary s;
  s.ls = fitted_order(d, column(r, [](const ConvergenceRecord& x) { return x.err_ls; }), window);
  s.l2_u = fitted_order(d, column(r, [](const ConvergenceRecord& x) { return x.err_l2_u; }), window);
  s.hdiv = fitted_order(d, column(r, [](const ConvergenceRecord& x) { return x.err_hdiv; }), window);
  s.eta = fitted_order(d, column(r, [](const ConvergenceRecord& x) { return std::optional<double>(x.eta); }),
                       window);
  return s;
}

StudyResult run_study_in_memory(const StudyConfig& config, const StepObserver& observer) {
  const ProblemSpec problem = problem_of(config);
  const StudyOptions options = to_options(config);
  const auto selector = trace_selector(problem);

  StudyResult result;
  auto capture = [&](const StepState& s) {
    if (selector) {
      try {
        result.final_trace = outflow_trace(s.u, s.mesh, *selector);
      } catch (const FieldError&) {
        result.final_trace.clear();
      }
    }
    if (observer) observer(s);
  };
  result.records = config.mode == StudyMode::uniform ? uniform_study(problem, options, capture)
                                                     : adapt_loop(problem, options, capture);
  result.fitted = fitted_orders(result.records);
  for (const auto& r : result.records) {
    if (r.overshoot) result.max_overshoot = std::max(result.max_overshoot.value_or(0.0), *r.overshoot);
  }
  return result;
}

StudyResult run_study(const StudyConfig& config) {
  namespace fs = std::filesystem;
  const ProblemSpec problem = problem_of(config);
  check_variant(problem, config.formulation, config.recovery);
  fs::create_directories(config.out_dir);

  auto open = [&](const fs::path& name) {
    std::ofstream f(config.out_dir / name);
    if (!f) throw ConfigError("cannot write " + (config.out_dir / name).string());
    return f;
  };
  auto dump = [&](const StepState& s) {
    std::ostringstream tag;
    tag << std::setw(3) << std::setfill('0') << s.record.step;
    if (config.emit.count("vtk")) {
      auto f = open("step_" + tag.str() + ".vtk");
      write_vtk(f, s.mesh, &s.u, &s.eta.eta);
    }
    if (config.emit.count("mesh")) {
      auto f = open("mesh_" + tag.str() + ".tmesh");
      write_mesh(f, s.mesh);
    }
  };
  StudyResult result = run_study_in_memory(config, dump);

  if (config.emit.count("csv")) {
    auto s = open("study.csv");
    write_study_csv(s, result.records);
    auto o = open("orders.csv");
    write_orders_csv(o, result.records);
  }
  if (config.emit.count("trace") && !result.final_trace.empty()) {
    auto t = open("trace.csv");
    write_trace_csv(t, result.final_trace);
  }
  return result;
}

void write_study_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records) {
  out << "step,dofs,h_max,eta,err_ls,err_l2_u,err_hdiv,overshoot\n";
  for (const auto& r : records) {
    out << r.step << ',' << r.dofs << ',' << cell(r.h_max) << ',' << cell(r.eta) << ',' << cell(r.err_ls)
        << ',' << cell(r.err_l2_u) << ',' << cell(r.err_hdiv) << ',' << cell(r.overshoot) << '\n';
  }
}

void write_orders_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records) {
  out << "quantity,kind,from_step,to_step,order\n";
  const auto d = dofs_of(records);
  for (const auto& [name, col] : norm_columns(records)) {
    const auto pw = pairwise_orders(d, col);
    for (std::size_t i = 0; i < pw.size(); ++i) {
      out << name << ",pairwise," << records[i].step << ',' << records[i + 1].step << ',' << cell(pw[i])
          << '\n';
    }
    const std::size_t n = records.size();
    const std::size_t from = n > 4 ? n - 4 : 0;
    out << name << ",fitted," << (n ? records[from].step : 0) << ',' << (n ? records.back().step : 0) << ','
        << cell(fitted_order(d, col)) << '\n';
  }
}

void write_trace_csv(std::ostream& out, const std::vector<TraceSample>& trace) {
  out << "x,u_h\n" << std::setprecision(17);
  for (const auto& s : trace) out << s.x << ',' << s.value << '\n';
}

std::optional<double> study_quantity(const StudyResult& r, const std::string& name) {
  if (name == "fitted_ls") return r.fitted.ls;
  if (name == "fitted_l2_u") return r.fitted.l2_u;
  if (name == "fitted_hdiv") return r.fitted.hdiv;
  if (name == "fitted_eta") return r.fitted.eta;
  if (name == "max_overshoot") return r.max_overshoot;
  if (r.records.empty()) return std::nullopt;
  if (name == "final_eta") return r.records.back().eta;
  if (name == "final_dofs") return static_cast<double>(r.records.back().dofs);
  if (name == "steps") return static_cast<double>(r.records.size());
  if (name == "final_overshoot") return r.records.back().overshoot;
  if (name == "trace_min" || name == "trace_max") {
    if (r.final_trace.empty()) return std::nullopt;
    const auto [lo, hi] = std::minmax_element(r.final_trace.begin(), r.final_trace.end(),
                                              [](const TraceSample& a, const TraceSample& b) {
                                                return a.value < b.value;
                                              });
    return name == "trace_min" ? lo->value : hi->value;
  }
  throw ConfigError("unknown check quantity '" + name + "'");
}

std::vector<CheckOutcome> evaluate_checks(std::istream& manifest, const StudyResult& result) {
  std::vector<CheckOutcome> out;
  std::string line;
  while (std::getline(manifest, line)) {
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (trim(line).empty()) continue;
    std::istringstream ls(line);
    CheckOutcome c;
    if (!(ls >> c.quantity >> c.min >> c.max)) throw ConfigError("bad check line: '" + line + "'");
    c.value = study_quantity(result, c.quantity);
    c.pass = c.value && *c.value >= c.min && *c.value <= c.max;
    out.push_back(c);
  }
  return out;
}

VariantComparison compare_variants(const StudyConfig& base) {
  const ProblemSpec problem = problem_of(base);
  if (!(problem.allow_ls1 && problem.allow_ls2)) {
    throw ConfigError(problem.name + " admits a single variant only; nothing to compare");
  }
  VariantComparison cmp;
  for (Formulation f : {Formulation::ls1, Formulation::ls2}) {
    for (Recovery r : {Recovery::first, Recovery::second}) {
      StudyConfig c = base;
      c.formulation = f;
      c.recovery = r;
      cmp.variants.push_back(std::string(to_string(f)) + "-" + std::string(to_string(r)));
      cmp.results.push_back(run_study_in_memory(c));
    }
  }
  std::size_t steps = cmp.results.front().records.size();
  for (const auto& r : cmp.results) steps = std::min(steps, r.records.size());
  for (std::size_t s = 0; s < steps; ++s) {
    double worst = 0.0;
    for (std::size_t a = 0; a < cmp.results.size(); ++a) {
      for (std::size_t b = a + 1; b < cmp.results.size(); ++b) {
        const auto ea = cmp.results[a].records[s].err_l2_u;
        const auto eb = cmp.results[b].records[s].err_l2_u;
        if (!ea || !eb) continue;
        const double scale = std::min(*ea, *eb);
        if (scale > 0.0) worst = std::max(worst, std::abs(*ea - *eb) / scale);
      }
    }
    cmp.max_relative_difference.push_back(worst);
  }
  return cmp;
}

void write_comparison_csv(std::ostream& out, const VariantComparison& cmp) {
  out << "step";
  for (const auto& v : cmp.variants) out << ",dofs_" << v << ",err_l2_u_" << v;
  out << ",max_relative_difference\n";
  for (std::size_t s = 0; s < cmp.max_relative_difference.size(); ++s) {
    out << s;
    for (const auto& r : cmp.results) out << ',' << r.records[s].dofs << ',' << cell(r.records[s].err_l2_u);
    out << ',' << cell(cmp.max_relative_difference[s]) << '\n';
  }
}

}  // namespace lsfem
