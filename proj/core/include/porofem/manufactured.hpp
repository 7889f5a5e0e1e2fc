#pragma once

#include "porofem/problem.hpp"

namespace porofem {

/// Material data shared by the two manufactured cases.
PhysicalParams manufactured_params();

/// tau = t (sin pi x1, sin pi x2), p = t sin(pi x1 + pi x2) on the unit square.
ProblemCase test1_case();
/// tau = e^t (sin x1, sin x2), p = t sin(pi x1) sin(pi x2) on the unit square.
ProblemCase test2_case();

/// Pure-traction, pure-flux configuration with steady loads and rigid
/// motions removed by multipliers. Used for the energy and mass identities.
ProblemCase neumann_case();

/// Builds a case from closed-form exact fields: Dirichlet data for the
/// displacement components listed per side, generated traction on every
/// side, pressure data on every side.
ProblemCase manufactured_case(std::string name, const PhysicalParams& params, ExactSolution exact,
                              VectorField body_force, ScalarField source);

}  // namespace porofem
