#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "porofem/stepper.hpp"
#include "porofem/verification.hpp"

namespace porofem {

/// Fixed 17-significant-digit formatting used by every writer.
std::string format_number(double v);

/// Point and cell data of one snapshot. Point arrays have one entry per mesh
/// vertex (two for vectors, interleaved); cell arrays one per triangle.
struct VtkFields {
  std::vector<std::pair<std::string, Vector>> point_vectors;
  std::vector<std::pair<std::string, Vector>> point_scalars;
  std::vector<std::pair<std::string, Vector>> cell_scalars;
};

/// VTK legacy ASCII 3.0 unstructured grid with triangle cells.
void write_vtk(std::ostream& out, const Mesh& mesh, const VtkFields& fields, const std::string& title = "porofem");
void write_vtk(const std::string& path, const Mesh& mesh, const VtkFields& fields,
               const std::string& title = "porofem");

/// Vertex values of a P2 vector field (interleaved x, y).
Vector vertex_values(const Vector& coeffs, const DofMap& p2v);

/// tau as point vectors, delta and varpi (or the pressure of the original
/// model) as point scalars, p and q as cell averages plus lumped L2
/// projections labelled "_projected".
VtkFields snapshot_fields(const Stepper& stepper, const State& s);

/// Displacement table: h, ||tau-tau_h||_L2, CR, ||tau-tau_h||_H1, CR.
void write_tau_table(std::ostream& out, const ConvergenceReport& r);
/// Pressure table: h, ||p-p_h||_L2, CR, ||p-p_h||_H1, CR.
void write_p_table(std::ostream& out, const ConvergenceReport& r);
/// dt, ||tau-tau_h||_L2, rho, ||p-p_h||_L2, rho (successive differences).
void write_temporal_table(std::ostream& out, const std::vector<TemporalRow>& rows);
/// step, t, J, S, residual and, for theta = 0, S_hat and inequality.
void write_energy_table(std::ostream& out, const EnergyLedger& ledger, double dt);
/// step, t, residual.
void write_mass_table(std::ostream& out, const std::vector<double>& residuals, double dt);
/// h, beta.
void write_infsup_table(std::ostream& out, const std::vector<std::pair<double, double>>& rows);
/// s, x, y followed by one column per named profile.
void write_profile_table(std::ostream& out, const Point& a, const Point& b,
                         const std::vector<std::pair<std::string, std::vector<double>>>& profiles);

/// Writes `text` to `path`, creating parent directories. Throws on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace porofem
