#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lsfem/adaptivity.hpp"
#include "lsfem/postprocess.hpp"

namespace lsfem {

enum class StudyMode { uniform, adaptive };

std::string_view to_string(StudyMode m);
StudyMode parse_mode(std::string_view s);

struct StudyConfig {
  std::string problem;
  Formulation formulation = Formulation::ls1;
  Recovery recovery = Recovery::first;
  StudyMode mode = StudyMode::uniform;
  double theta = 0.5;
  Index budget = 100000;
  std::optional<int> levels;
  int quad_degree = kDefaultAssemblyDegree;
  SolverMethod solver = SolverMethod::automatic;
  double tol = 1e-12;
  double epsilon = 0.01;
  std::filesystem::path out_dir = "out";
  std::set<std::string> emit{"csv"};  // csv, vtk, mesh, trace
  std::optional<std::filesystem::path> check;
};

/// Sets one configuration key (flag names without dashes, e.g. "problem",
/// "quad-degree"). Throws ConfigError on unknown keys or bad values.
void apply_setting(StudyConfig& config, const std::string& key, const std::string& value);

/// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(std::istream& in);

StudyOptions to_options(const StudyConfig& config);
ProblemSpec problem_of(const StudyConfig& config);

struct OrderSummary {
  std::optional<double> ls;
  std::optional<double> l2_u;
  std::optional<double> hdiv;
  std::optional<double> eta;
};

struct StudyResult {
  std::vector<ConvergenceRecord> records;
  OrderSummary fitted;
  std::vector<TraceSample> final_trace;  // empty when no trace selector applies
  std::optional<double> max_overshoot;
};

/// Runs the study without writing files.
StudyResult run_study_in_memory(const StudyConfig& config, const StepObserver& observer = {});

/// Runs the study and writes the requested artifacts into out_dir.
StudyResult run_study(const StudyConfig& config);

OrderSummary fitted_orders(const std::vector<ConvergenceRecord>& records, int window = 4);

void write_study_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records);
void write_orders_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records);
void write_trace_csv(std::ostream& out, const std::vector<TraceSample>& trace);

struct CheckOutcome {
  std::string quantity;
  std::optional<double> value;
  double min = 0.0;
  double max = 0.0;
  bool pass = false;
};

/// Manifest lines "quantity min max". Quantities: fitted_ls, fitted_l2_u,
/// fitted_hdiv, fitted_eta, final_eta, final_dofs, steps, final_overshoot,
/// max_overshoot, trace_min, trace_max.
std::vector<CheckOutcome> evaluate_checks(std::istream& manifest, const StudyResult& result);
std::optional<double> study_quantity(const StudyResult& result, const std::string& name);

struct VariantComparison {
  std::vector<std::string> variants;  // "ls1-first", ...
  std::vector<StudyResult> results;
  /// Per step present in all variants: max pairwise relative difference of
  /// err_l2_u.
  std::vector<double> max_relative_difference;
};

/// Runs all four formulation/recovery variants; refuses problems that do not
/// admit all of them.
VariantComparison compare_variants(const StudyConfig& base);
void write_comparison_csv(std::ostream& out, const VariantComparison& cmp);

}  // namespace lsfem
