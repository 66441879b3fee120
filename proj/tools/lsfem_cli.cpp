// Command-line driver: uniform/adaptive studies and variant comparison.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "lsfem/error.hpp"
#include "lsfem/study.hpp"

namespace {

using lsfem::StudyConfig;

// Long-form flags shared by both subcommands; values are kept as strings so
// they can override a config file key by key.
void add_study_flags(CLI::App* cmd, std::map<std::string, std::string>& given) {
  for (const char* key : {"problem", "formulation", "recovery", "mode", "theta", "budget", "levels",
                          "quad-degree", "solver", "tol", "epsilon", "out-dir", "emit", "check"}) {
    cmd->add_option(std::string("--") + key, given[key]);
  }
}

StudyConfig build_config(const std::string& config_file, const std::map<std::string, std::string>& given,
                         const CLI::App* cmd) {
  StudyConfig c;
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw lsfem::ConfigError("cannot read config file " + config_file);
    for (const auto& [k, v] : lsfem::read_config_file(in)) lsfem::apply_setting(c, k, v);
  }
  for (const auto& [k, v] : given) {
    if (cmd->count("--" + k) > 0) lsfem::apply_setting(c, k, v);
  }
  if (c.problem.empty()) throw lsfem::ConfigError("--problem is required");
  return c;
}

void print_orders(const lsfem::StudyResult& r) {
  auto show = [](const char* name, const std::optional<double>& v) {
    std::cout << "  " << name << ": " << (v ? std::to_string(*v) : std::string("n/a")) << '\n';
  };
  std::cout << "fitted orders (last 4 records)\n";
  show("err_ls", r.fitted.ls);
  show("err_l2_u", r.fitted.l2_u);
  show("err_hdiv", r.fitted.hdiv);
  show("eta", r.fitted.eta);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive least-squares RT0 solver for linear transport"};
  app.require_subcommand(1);
  std::string config_file;

  std::map<std::string, std::string> run_flags;
  auto* run = app.add_subcommand("run", "Run a uniform or adaptive convergence study");
  run->add_option("--config", config_file, "key=value file; flags override it");
  add_study_flags(run, run_flags);

  std::map<std::string, std::string> cmp_flags;
  auto* compare = app.add_subcommand("compare", "Run all four variants and compare err_l2_u");
  compare->add_option("--config", config_file, "key=value file; flags override it");
  add_study_flags(compare, cmp_flags);

  auto* list = app.add_subcommand("list", "List catalog problems");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& n : lsfem::catalog_names()) std::cout << n << '\n';
      return 0;
    }
    if (run->parsed()) {
      const StudyConfig c = build_config(config_file, run_flags, run);
      const lsfem::StudyResult r = lsfem::run_study(c);
      const auto& last = r.records.back();
      std::cout << c.problem << ' ' << lsfem::to_string(c.formulation) << '-' << lsfem::to_string(c.recovery)
                << ' ' << lsfem::to_string(c.mode) << ": " << r.records.size() << " steps, final dofs "
                << last.dofs << ", eta " << last.eta << '\n';
      print_orders(r);
      if (c.check) {
        std::ifstream m(*c.check);
        if (!m) throw lsfem::ConfigError("cannot read check manifest " + c.check->string());
        bool ok = true;
        for (const auto& o : lsfem::evaluate_checks(m, r)) {
          std::cout << (o.pass ? "PASS " : "FAIL ") << o.quantity << " = "
                    << (o.value ? std::to_string(*o.value) : std::string("n/a")) << " in [" << o.min << ", "
                    << o.max << "]\n";
          ok = ok && o.pass;
        }
        return ok ? 0 : 3;
      }
      return 0;
    }
    if (compare->parsed()) {
      const StudyConfig c = build_config(config_file, cmp_flags, compare);
      const lsfem::VariantComparison cmp = lsfem::compare_variants(c);
      std::filesystem::create_directories(c.out_dir);
      std::ofstream f(c.out_dir / "compare.csv");
      if (!f) throw lsfem::ConfigError("cannot write " + (c.out_dir / "compare.csv").string());
      lsfem::write_comparison_csv(f, cmp);
      double worst = 0.0;
      for (double d : cmp.max_relative_difference) worst = std::max(worst, d);
      std::cout << "max pairwise relative difference of err_l2_u: " << worst << '\n';
      for (std::size_t i = 0; i < cmp.variants.size(); ++i) {
        const auto lo = lsfem::study_quantity(cmp.results[i], "trace_min");
        const auto hi = lsfem::study_quantity(cmp.results[i], "trace_max");
        if (lo && hi) std::cout << cmp.variants[i] << " trace min " << *lo << " max " << *hi << '\n';
      }
      return 0;
    }
  } catch (const lsfem::ConfigError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
