#pragma once

#include <string>

#include "porofem/stepper.hpp"
#include "porofem/verification.hpp"

namespace porofem {

/// A non-manufactured case together with its default discretization and
/// the segment along which pressure profiles are measured.
struct BenchmarkCase {
  ProblemCase problem;
  double h = 0.0;
  double dt = 0.0;
  Point line_a;
  Point line_b;
  int samples = 201;
};

PhysicalParams strip_load_params();
PhysicalParams footing_params();

/// Strip load on the top of the unit square with near-zero storage.
BenchmarkCase build_locking_case();
/// 100 m x 100 m footing with a 40 m strip load.
BenchmarkCase build_footing_case();

struct FormulationRun {
  State final_state;
  OscillationMetric metric;
};

struct Comparison {
  FormulationRun reformulated;
  FormulationRun original;
};

/// Runs both formulations on the same mesh and time grid and measures the
/// final pressure along the case's line.
Comparison compare_formulations(const BenchmarkCase& bc, int theta = 1);

/// Vertical surface displacement at the top centre of the footing domain.
double footing_center_settlement(const Stepper& stepper, const State& s);

}  // namespace porofem
