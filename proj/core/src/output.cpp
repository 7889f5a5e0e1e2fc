#include "porofem/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace porofem {

namespace {

std::string rate_cell(double r) { return std::isnan(r) ? std::string() : format_number(r); }

void check_size(const std::string& name, const Vector& v, std::size_t expected) {
  if (static_cast<std::size_t>(v.size()) != expected) {
    throw std::invalid_argument("field '" + name + "' has " + std::to_string(v.size()) + " entries, expected " +
                                std::to_string(expected));
  }
}

void open_or_throw(std::ofstream& f, const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  f.open(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_vtk(std::ostream& out, const Mesh& mesh, const VtkFields& fields, const std::string& title) {
  const std::size_t nv = mesh.num_vertices();
  const std::size_t nt = mesh.num_triangles();
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const Point& x : mesh.vertices()) out << format_number(x.x()) << ' ' << format_number(x.y()) << " 0\n";
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const auto& tri : mesh.triangles()) out << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (std::size_t t = 0; t < nt; ++t) out << "5\n";

  if (!fields.point_vectors.empty() || !fields.point_scalars.empty()) {
    out << "POINT_DATA " << nv << '\n';
    for (const auto& [name, v] : fields.point_vectors) {
      check_size(name, v, 2 * nv);
      out << "VECTORS " << name << " double\n";
      for (std::size_t i = 0; i < nv; ++i) {
        out << format_number(v(2 * i)) << ' ' << format_number(v(2 * i + 1)) << " 0\n";
      }
    }
    for (const auto& [name, v] : fields.point_scalars) {
      check_size(name, v, nv);
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (std::size_t i = 0; i < nv; ++i) out << format_number(v(i)) << '\n';
    }
  }
  if (!fields.cell_scalars.empty()) {
    out << "CELL_DATA " << nt << '\n';
    for (const auto& [name, v] : fields.cell_scalars) {
      check_size(name, v, nt);
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (std::size_t i = 0; i < nt; ++i) out << format_number(v(i)) << '\n';
    }
  }
}

void write_vtk(const std::string& path, const Mesh& mesh, const VtkFields& fields, const std::string& title) {
  std::ofstream f;
  open_or_throw(f, path);
  write_vtk(f, mesh, fields, title);
  if (!f) throw std::runtime_error("write failed: " + path);
}

Vector vertex_values(const Vector& coeffs, const DofMap& p2v) {
  const auto nv = static_cast<int>(p2v.mesh().num_vertices());
  Vector out(2 * nv);
  for (int v = 0; v < nv; ++v) {
    out(2 * v) = coeffs(p2v.dof(v, 0));
    out(2 * v + 1) = coeffs(p2v.dof(v, 1));
  }
  return out;
}

VtkFields snapshot_fields(const Stepper& stepper, const State& s) {
  const Spaces& sp = stepper.spaces();
  const Mesh& mesh = *sp.mesh;
  VtkFields f;
  f.point_vectors.emplace_back("tau", vertex_values(s.tau, sp.p2v));
  if (stepper.config().formulation == Formulation::Original) {
    f.point_scalars.emplace_back("pressure", s.pressure);
  } else {
    f.point_scalars.emplace_back("delta", s.delta);
    f.point_scalars.emplace_back("varpi", s.varpi);
  }
  f.point_scalars.emplace_back("p_projected", lumped_projection(s.p, sp.p1));
  f.point_scalars.emplace_back("q_projected", lumped_projection(s.q, sp.p1));
  Vector pc(static_cast<Eigen::Index>(mesh.num_triangles()));
  Vector qc(pc.size());
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    pc(t) = s.p.cell_average(t);
    qc(t) = s.q.cell_average(t);
  }
  f.cell_scalars.emplace_back("p", pc);
  f.cell_scalars.emplace_back("q", qc);
  return f;
}

void write_tau_table(std::ostream& out, const ConvergenceReport& r) {
  out << "h,||tau-tau_h||_L2,CR,||tau-tau_h||_H1,CR\n";
  for (const auto& row : r.rows) {
    out << format_number(row.h) << ',' << format_number(row.errors.tau_l2) << ',' << rate_cell(row.rates.tau_l2)
        << ',' << format_number(row.errors.tau_h1) << ',' << rate_cell(row.rates.tau_h1) << '\n';
  }
}

void write_p_table(std::ostream& out, const ConvergenceReport& r) {
  out << "h,||p-p_h||_L2,CR,||p-p_h||_H1,CR\n";
  for (const auto& row : r.rows) {
    out << format_number(row.h) << ',' << format_number(row.errors.p_l2) << ',' << rate_cell(row.rates.p_l2) << ','
        << format_number(row.errors.p_h1) << ',' << rate_cell(row.rates.p_h1) << '\n';
  }
}

void write_temporal_table(std::ostream& out, const std::vector<TemporalRow>& rows) {
  out << "dt,||tau-tau_h||_L2,rho,||p-p_h||_L2,rho\n";
  for (const auto& row : rows) {
    out << format_number(row.dt) << ',' << format_number(row.tau_diff) << ',' << rate_cell(row.tau_ratio) << ','
        << format_number(row.p_diff) << ',' << rate_cell(row.p_ratio) << '\n';
  }
}

void write_energy_table(std::ostream& out, const EnergyLedger& ledger, double dt) {
  const bool hat = !ledger.S_hat.empty();
  out << "step,t,J,S,residual";
  if (hat) out << ",S_hat,inequality";
  out << '\n';
  for (std::size_t k = 0; k < ledger.J.size(); ++k) {
    out << k << ',' << format_number(static_cast<double>(k) * dt) << ',' << format_number(ledger.J[k]) << ','
        << format_number(ledger.S[k]) << ',' << format_number(ledger.residual[k]);
    if (hat) out << ',' << format_number(ledger.S_hat[k]) << ',' << format_number(ledger.inequality[k]);
    out << '\n';
  }
}

void write_mass_table(std::ostream& out, const std::vector<double>& residuals, double dt) {
  out << "step,t,residual\n";
  for (std::size_t k = 0; k < residuals.size(); ++k) {
    out << k << ',' << format_number(static_cast<double>(k) * dt) << ',' << format_number(residuals[k]) << '\n';
  }
}

void write_infsup_table(std::ostream& out, const std::vector<std::pair<double, double>>& rows) {
  out << "h,beta\n";
  for (const auto& [h, b] : rows) out << format_number(h) << ',' << format_number(b) << '\n';
}

void write_profile_table(std::ostream& out, const Point& a, const Point& b,
                         const std::vector<std::pair<std::string, std::vector<double>>>& profiles) {
  if (profiles.empty()) throw std::invalid_argument("no profiles to write");
  const std::size_t n = profiles.front().second.size();
  for (const auto& [name, v] : profiles) {
    if (v.size() != n) throw std::invalid_argument("profile '" + name + "' has a different length");
  }
  out << "s,x,y";
  for (const auto& [name, v] : profiles) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    const double s = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    const Point x = a + s * (b - a);
    out << format_number(s) << ',' << format_number(x.x()) << ',' << format_number(x.y());
    for (const auto& [name, v] : profiles) out << ',' << format_number(v[i]);
    out << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f;
  open_or_throw(f, path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace porofem
