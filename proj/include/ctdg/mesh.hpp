#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace ctdg {

using Vec3 = std::array<double, 3>;

enum class MeshKind { Slice, CubedSphere };

/// Local facet numbering on the reference square [-1,1]^2 (xi horizontal, eta vertical).
enum LocalFacet : int { West = 0, East = 1, South = 2, North = 3 };

/// One interior facet shared by two cells. Quadrature points are generated on the
/// plus side; the minus side visits the same points with its facet parameter
/// negated when `reversed` is set.
struct FacetRecord {
  int cell_plus = -1;
  int local_plus = -1;
  int cell_minus = -1;
  int local_minus = -1;
  bool reversed = false;
};

enum class BoundaryTag { Bottom, Top };

struct BoundaryFacet {
  int cell = -1;
  int local = -1;
  BoundaryTag tag = BoundaryTag::Bottom;
};

/// Physical position and tangent vectors of the cell map at a reference point.
struct MappedPoint {
  Vec3 x{};
  Vec3 dxi{};
  Vec3 deta{};
};

/// Cell quadrature mapped to physical space. `weights` include the area measure.
/// `dual_xi`, `dual_eta` are the contravariant basis vectors: for a tangent
/// vector u, u.grad(f) = (dual_xi.u) df/dxi + (dual_eta.u) df/deta.
struct CellQuadrature {
  std::vector<double> xi, eta;
  std::vector<Vec3> points;
  std::vector<double> weights;
  std::vector<Vec3> dual_xi, dual_eta;
};

/// Facet quadrature on the plus side with matched minus-side parameters.
struct FacetQuadrature {
  std::vector<double> s_plus, s_minus;
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
  std::vector<double> weights;
};

/// Structured quadrilateral mesh: periodic vertical slice or equiangular gnomonic
/// cubed sphere. Immutable after construction.
///
/// Cell vertices are stored in lexicographic order on the reference square:
/// 0 = (-1,-1), 1 = (1,-1), 2 = (-1,1), 3 = (1,1).
///
/// Cubed-sphere convention: panel p holds cells p*ne*ne + j*ne + i with equiangular
/// coordinates alpha_i, beta_j in [-pi/4, pi/4]; with X = tan(alpha), Y = tan(beta)
/// the cube points are p0 (1,X,Y), p1 (-X,1,Y), p2 (-1,-X,Y), p3 (X,-1,Y),
/// p4 (-Y,X,1), p5 (Y,X,-1). Every panel is right-handed with respect to the
/// outward radial direction. The plus side of an interior facet is the cell with
/// the lower index.
class Mesh {
public:
  static Mesh slice(int nx, int nz, double lx, double hz, int default_nq = 5);
  static Mesh cubed_sphere(int ne, double radius, int default_nq = 4);

  MeshKind kind() const { return kind_; }
  int num_cells() const { return num_cells_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::array<int, 4>& cell_vertices(int cell) const { return cell_vertices_.at(cell); }
  const std::vector<FacetRecord>& interior_facets() const { return interior_; }
  const std::vector<BoundaryFacet>& boundary_facets() const { return boundary_; }
  /// Number of distinct edges (interior + boundary facets).
  int num_edges() const { return static_cast<int>(interior_.size() + boundary_.size()); }

  int nx() const { return nx_; }
  int nz() const { return nz_; }
  double lx() const { return lx_; }
  double hz() const { return hz_; }
  int ne() const { return ne_; }
  double radius() const { return radius_; }
  int default_nq() const { return default_nq_; }

  /// Slice: (i, j) column/row. Sphere: (i, j) within the panel.
  std::array<int, 2> cell_ij(int cell) const;
  int panel_of(int cell) const;
  int slice_cell(int i, int j) const { return j * nx_ + i; }

  /// Characteristic cell length: Lx/nx on the slice, pi R / (2 ne) on the sphere.
  double cell_length() const;

  MappedPoint map(int cell, double xi, double eta) const;

  CellQuadrature cell_quadrature(int cell, int nq) const;
  FacetQuadrature facet_quadrature(int facet, int nq) const;
  FacetQuadrature boundary_facet_quadrature(int facet, int nq) const;

  /// Cached rules with the mesh default point count.
  const CellQuadrature& cell_quad(int cell) const { return cell_cache_[cell]; }
  const FacetQuadrature& facet_quad(int facet) const { return facet_cache_[facet]; }

  /// Area of each cell under the default rule.
  const std::vector<double>& cell_areas() const { return cell_areas_; }

private:
  Mesh() = default;
  void build_caches();
  FacetQuadrature side_quadrature(int cell, int local, int nq, bool reversed) const;

  MeshKind kind_ = MeshKind::Slice;
  int num_cells_ = 0;
  int nx_ = 0, nz_ = 0;
  double lx_ = 0.0, hz_ = 0.0;
  int ne_ = 0;
  double radius_ = 0.0;
  int default_nq_ = 4;
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 4>> cell_vertices_;
  std::vector<FacetRecord> interior_;
  std::vector<BoundaryFacet> boundary_;
  std::vector<CellQuadrature> cell_cache_;
  std::vector<FacetQuadrature> facet_cache_;
  std::vector<double> cell_areas_;
};

/// Reference-square point of a local facet at facet parameter s in [-1, 1].
std::array<double, 2> facet_reference_point(int local, double s);

/// Longitude in (-pi, pi] and latitude of a point on the sphere.
std::array<double, 2> lon_lat(const Vec3& x);

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);

} // namespace ctdg
