#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "axmhd/field.hpp"
#include "axmhd/sparse.hpp"

namespace axmhd {

struct Point {
  double r = 0.0;
  double z = 0.0;
};

using Element = std::array<std::int32_t, 3>;

inline constexpr double kMinRadius = 1e-6;

class Mesh {
 public:
  // Validates and reconstructs the boundary loop; throws Error on any invariant violation.
  Mesh(std::vector<Point> nodes, std::vector<Element> elements, std::vector<std::string> tags = {});

  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t num_elements() const noexcept { return elements_.size(); }
  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  const Point& node(std::size_t i) const { return nodes_[i]; }
  const Element& element(std::size_t e) const { return elements_[e]; }
  const std::vector<std::string>& tags() const noexcept { return tags_; }

  // Counter-clockwise boundary loop (first node not repeated).
  const std::vector<std::int32_t>& boundary_nodes() const noexcept { return boundary_; }
  const std::vector<bool>& boundary_mask() const noexcept { return on_boundary_; }
  bool is_boundary(std::size_t i) const { return on_boundary_[i]; }

  // Distinct nodes sharing an element with i, including i itself, sorted.
  std::vector<std::int32_t> one_ring(std::size_t i) const;

  NodalField r() const;
  NodalField z() const;

 private:
  std::vector<Point> nodes_;
  std::vector<Element> elements_;
  std::vector<std::string> tags_;
  std::vector<std::int32_t> boundary_;
  std::vector<bool> on_boundary_;
  std::vector<std::vector<std::int32_t>> node_elements_;
};

double twice_area(const Mesh& mesh, std::size_t e);

Mesh load_mesh(const std::string& path);
Mesh read_mesh(std::istream& in, const std::string& source = "<stream>");
void save_mesh(const Mesh& mesh, const std::string& path);
void write_mesh(const Mesh& mesh, std::ostream& out);

struct Range {
  double min;
  double max;
};

Mesh generate_rect_mesh(Range r_range, Range z_range, double h_e);

// Moves every interior node by a uniform random offset of at most `fraction`·h per axis.
Mesh perturb_interior(const Mesh& mesh, double h, double fraction, std::uint64_t seed);

// Moves every node through map (connectivity unchanged, result revalidated).
Mesh warp(const Mesh& mesh, const std::function<Point(Point)>& map);

// Keeps elements whose centroid satisfies keep(r, z) and drops nodes left unreferenced.
Mesh carve(const Mesh& mesh, const std::function<bool(double, double)>& keep);

struct GeometryTables {
  ElementField s_e;
  ElementField r_e;
  ElementField z_e;
  NodalField s_n;
  NodalField dV_n;
  ElementField dV_e;
  Operator<ElemTag, NodeTag> M_e;
};

GeometryTables compute_geometry(const Mesh& mesh);

ElementField node_to_element_average(const Mesh& mesh, const NodalField& u);

struct BoundaryFrame {
  std::vector<std::int32_t> nodes;
  std::vector<Point> tangent;
  std::vector<Point> normal;
  // True where the two adjacent boundary edges are not collinear.
  std::vector<bool> corner;
};

BoundaryFrame boundary_frame(const Mesh& mesh);

struct WallGeometry {
  double h_I = 0.0;
  double r_in = 0.0;
  double r_out = 0.0;
};

struct InterfacePair {
  std::int32_t plasma;
  std::int32_t insulator;
};

struct DomainSplit {
  Mesh plasma_mesh;
  Mesh insulator_mesh;
  std::vector<InterfacePair> interface_map;
  WallGeometry insulator_wall_geom;
  std::vector<std::int32_t> plasma_to_combined;
  std::vector<std::int32_t> insulator_to_combined;
  // Plasma boundary nodes on the outer shared column (receive vacuum ψ and f_I).
  std::vector<std::int32_t> plasma_interface;
  // Insulator boundary nodes on the inner shared column (receive plasma ψ).
  std::vector<std::int32_t> insulator_interface;
};

// Single shared column at interface_r.
DomainSplit split_domain(const Mesh& combined, double interface_r, const WallGeometry& wall);
// Two shared columns: the insulator mesh starts at r_inner_column, the plasma mesh ends at r_outer_column.
DomainSplit split_domain(const Mesh& combined, double r_inner_column, double r_outer_column,
                         const WallGeometry& wall);

}  // namespace axmhd
