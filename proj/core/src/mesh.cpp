#include "porofem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <unordered_map>

namespace porofem {

std::string to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Right: return "right";
    case BoundaryTag::Bottom: return "bottom";
    case BoundaryTag::Left: return "left";
    case BoundaryTag::Top: return "top";
  }
  return "unknown";
}

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

}  // namespace

Mesh Mesh::build_rect(const Rect& domain, int nx, int ny, Diagonal diagonal) {
  if (nx < 1 || ny < 1) {
    throw MeshError("cell counts must be at least 1");
  }
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw MeshError("degenerate rectangle");
  }

  Mesh m;
  m.domain_ = domain;
  m.nx_ = nx;
  m.ny_ = ny;
  m.diagonal_ = diagonal;

  const double dx = domain.width() / nx;
  const double dy = domain.height() / ny;
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  m.vertices_.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // snap the last row/column to the exact domain bounds
      const double x = (i == nx) ? domain.x1 : domain.x0 + i * dx;
      const double y = (j == ny) ? domain.y1 : domain.y0 + j * dy;
      m.vertices_.emplace_back(x, y);
    }
  }

  m.triangles_.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j);
      const int v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1);
      const int v11 = vid(i + 1, j + 1);
      if (diagonal == Diagonal::Rising) {
        m.triangles_.push_back({v00, v10, v11});
        m.triangles_.push_back({v00, v11, v01});
      } else {
        m.triangles_.push_back({v00, v10, v01});
        m.triangles_.push_back({v10, v11, v01});
      }
    }
  }

  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(static_cast<std::size_t>(3 * nx * ny + nx + ny));
  m.triangle_edges_.resize(m.triangles_.size());
  for (std::size_t t = 0; t < m.triangles_.size(); ++t) {
    const auto& tri = m.triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[static_cast<std::size_t>(k)];
      const int b = tri[static_cast<std::size_t>((k + 1) % 3)];
      const auto [it, inserted] = lookup.try_emplace(edge_key(a, b), static_cast<int>(m.edges_.size()));
      if (inserted) {
        m.edges_.push_back({std::min(a, b), std::max(a, b)});
        m.edge_triangles_.push_back({static_cast<int>(t), -1});
      } else {
        m.edge_triangles_[static_cast<std::size_t>(it->second)][1] = static_cast<int>(t);
      }
      m.triangle_edges_[t][static_cast<std::size_t>(k)] = it->second;
    }
  }

  const double tol = 1e-12 * std::max(domain.width(), domain.height());
  for (std::size_t e = 0; e < m.edges_.size(); ++e) {
    if (m.edge_triangles_[e][1] >= 0) continue;
    const Point mid = m.edge_midpoint(static_cast<int>(e));
    BoundaryFacet f;
    f.edge = static_cast<int>(e);
    if (std::abs(mid.x() - domain.x1) < tol) {
      f.tag = BoundaryTag::Right;
      f.normal = Point(1.0, 0.0);
    } else if (std::abs(mid.y() - domain.y0) < tol) {
      f.tag = BoundaryTag::Bottom;
      f.normal = Point(0.0, -1.0);
    } else if (std::abs(mid.x() - domain.x0) < tol) {
      f.tag = BoundaryTag::Left;
      f.normal = Point(-1.0, 0.0);
    } else if (std::abs(mid.y() - domain.y1) < tol) {
      f.tag = BoundaryTag::Top;
      f.normal = Point(0.0, 1.0);
    } else {
      throw MeshError("boundary edge not on the rectangle sides");
    }
    m.facets_.push_back(f);
  }
  std::stable_sort(m.facets_.begin(), m.facets_.end(), [&m](const BoundaryFacet& a, const BoundaryFacet& b) {
    if (a.tag != b.tag) return static_cast<int>(a.tag) < static_cast<int>(b.tag);
    const Point ma = m.edge_midpoint(a.edge);
    const Point mb = m.edge_midpoint(b.edge);
    const bool vertical = a.tag == BoundaryTag::Left || a.tag == BoundaryTag::Right;
    return vertical ? ma.y() < mb.y() : ma.x() < mb.x();
  });

  m.h_max_ = 0.0;
  for (std::size_t e = 0; e < m.edges_.size(); ++e) {
    m.h_max_ = std::max(m.h_max_, m.edge_length(static_cast<int>(e)));
  }
  m.cell_size_ = std::max(dx, dy);
  return m;
}

std::vector<BoundaryFacet> Mesh::boundary_facets(BoundaryTag tag) const {
  std::vector<BoundaryFacet> out;
  std::copy_if(facets_.begin(), facets_.end(), std::back_inserter(out),
               [tag](const BoundaryFacet& f) { return f.tag == tag; });
  return out;
}

double Mesh::area(int t) const {
  const auto& tri = triangle(t);
  const Point e1 = vertex(tri[1]) - vertex(tri[0]);
  const Point e2 = vertex(tri[2]) - vertex(tri[0]);
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

Point Mesh::centroid(int t) const {
  const auto& tri = triangle(t);
  return (vertex(tri[0]) + vertex(tri[1]) + vertex(tri[2])) / 3.0;
}

Point Mesh::edge_midpoint(int e) const {
  const auto& ed = edge(e);
  return 0.5 * (vertex(ed[0]) + vertex(ed[1]));
}

double Mesh::edge_length(int e) const {
  const auto& ed = edge(e);
  return (vertex(ed[1]) - vertex(ed[0])).norm();
}

std::array<double, 3> barycentric(const Mesh& mesh, int t, const Point& p) {
  const auto& tri = mesh.triangle(t);
  const Point& a = mesh.vertex(tri[0]);
  const Point& b = mesh.vertex(tri[1]);
  const Point& c = mesh.vertex(tri[2]);
  const double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
  const double l1 = ((p.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (p.y() - a.y())) / det;
  const double l2 = ((b.x() - a.x()) * (p.y() - a.y()) - (p.x() - a.x()) * (b.y() - a.y())) / det;
  return {1.0 - l1 - l2, l1, l2};
}

Location Mesh::locate(const Point& p) const {
  const double scale = std::max(domain_.width(), domain_.height());
  const double tol = 1e-12 * scale;
  if (p.x() < domain_.x0 - tol || p.x() > domain_.x1 + tol || p.y() < domain_.y0 - tol ||
      p.y() > domain_.y1 + tol) {
    std::ostringstream os;
    os << "point (" << p.x() << ", " << p.y() << ") lies outside the domain";
    throw MeshError(os.str());
  }
  // structured lookup of the candidate cell, then test its two triangles
  const double dx = domain_.width() / nx_;
  const double dy = domain_.height() / ny_;
  const int i = std::clamp(static_cast<int>(std::floor((p.x() - domain_.x0) / dx)), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor((p.y() - domain_.y0) / dy)), 0, ny_ - 1);
  const double eps = 1e-12;
  int best = -1;
  double best_min = -1e300;
  std::array<double, 3> best_bary{};
  for (int k = 0; k < 2; ++k) {
    const int t = 2 * (j * nx_ + i) + k;
    auto bary = barycentric(*this, t, p);
    const double lo = std::min({bary[0], bary[1], bary[2]});
    if (lo > best_min) {
      best_min = lo;
      best = t;
      best_bary = bary;
    }
  }
  if (best_min < -eps) {
    throw MeshError("point location failed");
  }
  for (double& b : best_bary) b = std::clamp(b, 0.0, 1.0);
  const double s = best_bary[0] + best_bary[1] + best_bary[2];
  for (double& b : best_bary) b /= s;
  return {best, best_bary};
}

}  // namespace porofem
