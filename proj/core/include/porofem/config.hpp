#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "porofem/params.hpp"
#include "porofem/problem.hpp"
#include "porofem/stepper.hpp"

namespace porofem {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

enum class Experiment {
  ConvergeSpace,
  ConvergeTime,
  EnergyCheck,
  MassCheck,
  InfSup,
  BenchLocking,
  BenchFooting,
  SingleRun
};

enum class CaseId { Test1, Test2, Locking, Footing, Custom };

std::string to_string(Experiment e);
std::string to_string(CaseId c);
Experiment parse_experiment(const std::string& s);
CaseId parse_case(const std::string& s);

/// Fully defaulted run description. Every field has a concrete value after
/// parse_config(); defaults depend on the experiment and the case.
struct RunConfig {
  Experiment experiment = Experiment::SingleRun;
  CaseId case_id = CaseId::Test1;
  Formulation formulation = Formulation::Reformulated;
  int theta = 1;
  double dt = 0.01;
  double T = 1.0;
  std::vector<double> h_list;
  std::vector<double> dt_list;  // converge-time halving chain
  std::string out_dir = "out";
  double solver_tol = 1e-10;
  int snapshot_every = 0;  // 0: final state only
  bool write_vtk = true;
  /// Material overrides from the [params] section, keyed by parameter name.
  std::map<std::string, double> params;

  SchemeConfig scheme() const;
};

/// Parses `key=value` text. Several pairs may share a line; a value runs
/// until the next `key=` token. `#` starts a comment. The only section is
/// [params] (material overrides); keys before it belong to the run.
/// Lists are comma separated and may be bracketed; numbers accept a/b.
RunConfig parse_config(const std::string& text);

/// Fills defaults for keys the text did not set. Exposed for the command line
/// overrides, which are applied between parsing and defaulting.
struct RawConfig {
  std::map<std::string, std::string> run;
  std::map<std::string, std::string> params;
  std::map<std::string, int> lines;
};
RawConfig parse_raw_config(const std::string& text);
RunConfig resolve_config(const RawConfig& raw);

/// Canonical text form; parse_config(emit_config(c)) reproduces c.
std::string emit_config(const RunConfig& c);

/// Parses "1/8", "0.125", "1e-3".
double parse_number(const std::string& s);
std::vector<double> parse_number_list(const std::string& s);

/// Applies [params] overrides to a parameter set and validates the result.
PhysicalParams apply_overrides(PhysicalParams base, const std::map<std::string, double>& overrides);

/// The case named by the configuration with overrides applied.
ProblemCase make_case(const RunConfig& c);

}  // namespace porofem
