#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace porofem {

using Point = Eigen::Vector2d;

/// Sides of an axis-aligned rectangle. Numbering follows the usual
/// right, bottom, left, top convention (1..4).
enum class BoundaryTag : int { Right = 1, Bottom = 2, Left = 3, Top = 4 };

std::string to_string(BoundaryTag tag);

struct Rect {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundaryFacet {
  int edge = -1;
  BoundaryTag tag = BoundaryTag::Right;
  Point normal = Point::Zero();  // outward unit normal
};

/// Which diagonal splits each structured cell.
/// Falling joins the lower-right and upper-left corners, Rising the
/// lower-left and upper-right ones.
enum class Diagonal { Falling, Rising };

/// Result of point location: containing triangle and barycentric weights of
/// its three vertices.
struct Location {
  int triangle = -1;
  std::array<double, 3> bary{};
};

/// Structured triangulation of a rectangle, every cell split along the same
/// diagonal. Triangles are counterclockwise; local edge k joins local
/// vertices k and (k+1)%3. Cell (i, j) owns triangles 2 (j nx + i) + {0, 1}.
class Mesh {
 public:
  static Mesh build_rect(const Rect& domain, int nx, int ny, Diagonal diagonal = Diagonal::Falling);

  const Rect& domain() const { return domain_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  Diagonal diagonal() const { return diagonal_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::array<int, 3>& triangle(int t) const { return triangles_[static_cast<std::size_t>(t)]; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::array<int, 2>& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

  /// Global edge ids of the three local edges of triangle t.
  const std::array<int, 3>& triangle_edges(int t) const {
    return triangle_edges_[static_cast<std::size_t>(t)];
  }
  /// Triangles adjacent to edge e; the second entry is -1 on the boundary.
  const std::array<int, 2>& edge_triangles(int e) const {
    return edge_triangles_[static_cast<std::size_t>(e)];
  }

  const std::vector<BoundaryFacet>& boundary_facets() const { return facets_; }
  /// Facets on one side ordered by increasing coordinate along the side.
  std::vector<BoundaryFacet> boundary_facets(BoundaryTag tag) const;

  /// Maximum edge length (the cell diagonal).
  double h_max() const { return h_max_; }
  /// Structured cell width max(dx, dy); this is the h used in reports.
  double cell_size() const { return cell_size_; }

  double area(int t) const;
  Point centroid(int t) const;
  Point edge_midpoint(int e) const;
  double edge_length(int e) const;

  /// Finds a triangle containing p. Throws MeshError outside the closure.
  Location locate(const Point& p) const;

 private:
  Rect domain_;
  int nx_ = 0;
  int ny_ = 0;
  Diagonal diagonal_ = Diagonal::Falling;
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<std::array<int, 2>> edge_triangles_;
  std::vector<BoundaryFacet> facets_;
  double h_max_ = 0.0;
  double cell_size_ = 0.0;
};

/// Barycentric coordinates of p with respect to triangle t.
std::array<double, 3> barycentric(const Mesh& mesh, int t, const Point& p);

}  // namespace porofem
