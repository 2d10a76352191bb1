#include "ctdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "ctdg/error.hpp"
#include "ctdg/quadrature.hpp"

namespace ctdg {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b)
{
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

std::array<double, 2> lon_lat(const Vec3& x)
{
  const double r = norm(x);
  const double lon = std::atan2(x[1], x[0]);
  const double lat = std::asin(std::clamp(x[2] / r, -1.0, 1.0));
  return {lon, lat};
}

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

Vec3 cube_point(int panel, double X, double Y)
{
  switch (panel) {
  case 0: return {1.0, X, Y};
  case 1: return {-X, 1.0, Y};
  case 2: return {-1.0, -X, Y};
  case 3: return {X, -1.0, Y};
  case 4: return {-Y, X, 1.0};
  default: return {Y, X, -1.0};
  }
}

Vec3 cube_dX(int panel)
{
  switch (panel) {
  case 0: return {0.0, 1.0, 0.0};
  case 1: return {-1.0, 0.0, 0.0};
  case 2: return {0.0, -1.0, 0.0};
  case 3: return {1.0, 0.0, 0.0};
  default: return {0.0, 1.0, 0.0};
  }
}

Vec3 cube_dY(int panel)
{
  switch (panel) {
  case 4: return {-1.0, 0.0, 0.0};
  case 5: return {1.0, 0.0, 0.0};
  default: return {0.0, 0.0, 1.0};
  }
}

// Derivative of the radial projection a*c/|c| along dc.
Vec3 project_derivative(const Vec3& c, const Vec3& dc, double radius)
{
  const double n = norm(c);
  const double cd = dot(c, dc);
  Vec3 out{};
  for (int k = 0; k < 3; ++k) out[k] = radius * (dc[k] / n - c[k] * cd / (n * n * n));
  return out;
}

// Facet endpoint vertices (local indices) in increasing facet-parameter order.
constexpr std::array<std::array<int, 2>, 4> kFacetEnds{{{0, 2}, {1, 3}, {0, 1}, {2, 3}}};

} // namespace

std::array<double, 2> facet_reference_point(int local, double s)
{
  switch (local) {
  case West: return {-1.0, s};
  case East: return {1.0, s};
  case South: return {s, -1.0};
  default: return {s, 1.0};
  }
}

Mesh Mesh::slice(int nx, int nz, double lx, double hz, int default_nq)
{
  require(nx >= 2, "slice mesh: nx = " + std::to_string(nx) +
                       " would make the periodic facet join a cell to itself; need nx >= 2");
  require(nz >= 1, "slice mesh: nz must be >= 1");
  require(lx > 0.0 && hz > 0.0, "slice mesh: Lx and Hz must be positive");
  require(default_nq >= 1, "slice mesh: quadrature needs at least one point");

  Mesh mesh;
  mesh.kind_ = MeshKind::Slice;
  mesh.nx_ = nx;
  mesh.nz_ = nz;
  mesh.lx_ = lx;
  mesh.hz_ = hz;
  mesh.default_nq_ = default_nq;
  mesh.num_cells_ = nx * nz;

  const double dx = lx / nx;
  const double dz = hz / nz;
  mesh.vertices_.reserve(static_cast<std::size_t>(nx) * (nz + 1));
  for (int j = 0; j <= nz; ++j)
    for (int i = 0; i < nx; ++i) mesh.vertices_.push_back({i * dx, j * dz, 0.0});

  mesh.cell_vertices_.resize(mesh.num_cells_);
  for (int j = 0; j < nz; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int ip = (i + 1) % nx;
      mesh.cell_vertices_[mesh.slice_cell(i, j)] = {j * nx + i, j * nx + ip, (j + 1) * nx + i,
                                                    (j + 1) * nx + ip};
    }
  }
  mesh.build_caches();
  return mesh;
}

Mesh Mesh::cubed_sphere(int ne, double radius, int default_nq)
{
  require(ne >= 1, "cubed-sphere mesh: ne must be >= 1, got " + std::to_string(ne));
  require(radius > 0.0, "cubed-sphere mesh: radius must be positive");
  require(default_nq >= 1, "cubed-sphere mesh: quadrature needs at least one point");

  Mesh mesh;
  mesh.kind_ = MeshKind::CubedSphere;
  mesh.ne_ = ne;
  mesh.radius_ = radius;
  mesh.default_nq_ = default_nq;
  mesh.num_cells_ = 6 * ne * ne;

  const double delta = 2.0 * kQuarterPi / ne;
  std::map<std::array<long long, 3>, int> vertex_ids;
  std::vector<int> grid(static_cast<std::size_t>(6) * (ne + 1) * (ne + 1));
  for (int p = 0; p < 6; ++p) {
    for (int j = 0; j <= ne; ++j) {
      for (int i = 0; i <= ne; ++i) {
        const Vec3 c = cube_point(p, std::tan(-kQuarterPi + i * delta), std::tan(-kQuarterPi + j * delta));
        const double n = norm(c);
        const Vec3 unit{c[0] / n, c[1] / n, c[2] / n};
        const std::array<long long, 3> key{std::llround(unit[0] * 1e9), std::llround(unit[1] * 1e9),
                                           std::llround(unit[2] * 1e9)};
        auto [it, inserted] = vertex_ids.try_emplace(key, static_cast<int>(mesh.vertices_.size()));
        if (inserted) mesh.vertices_.push_back({radius * unit[0], radius * unit[1], radius * unit[2]});
        grid[(static_cast<std::size_t>(p) * (ne + 1) + j) * (ne + 1) + i] = it->second;
      }
    }
  }
  auto gv = [&](int p, int i, int j) { return grid[(static_cast<std::size_t>(p) * (ne + 1) + j) * (ne + 1) + i]; };

  mesh.cell_vertices_.resize(mesh.num_cells_);
  for (int p = 0; p < 6; ++p)
    for (int j = 0; j < ne; ++j)
      for (int i = 0; i < ne; ++i)
        mesh.cell_vertices_[p * ne * ne + j * ne + i] = {gv(p, i, j), gv(p, i + 1, j), gv(p, i, j + 1),
                                                         gv(p, i + 1, j + 1)};
  mesh.build_caches();
  return mesh;
}

void Mesh::build_caches()
{
  // Pair cell facets through their endpoint vertices. Slice facets keep their
  // direction in the key: with nx = 2 the two horizontal facets of a row join
  // the same vertex pair, once in each direction.
  const bool ordered = kind_ == MeshKind::Slice;
  std::map<std::pair<int, int>, int> open;
  for (int c = 0; c < num_cells_; ++c) {
    const auto& cv = cell_vertices_[c];
    for (int lf = 0; lf < 4; ++lf) {
      const int a = cv[kFacetEnds[lf][0]];
      const int b = cv[kFacetEnds[lf][1]];
      const std::pair<int, int> key = ordered ? std::pair{a, b} : std::pair{std::min(a, b), std::max(a, b)};
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(key, static_cast<int>(interior_.size()));
        interior_.push_back({c, lf, -1, -1, false});
      } else {
        FacetRecord& rec = interior_[it->second];
        require(rec.cell_minus < 0, "mesh: facet shared by more than two cells");
        require(rec.cell_plus != c, "mesh: cell adjacent to itself");
        rec.cell_minus = c;
        rec.local_minus = lf;
        const int plus_start = cell_vertices_[rec.cell_plus][kFacetEnds[rec.local_plus][0]];
        rec.reversed = plus_start != a;
      }
    }
  }
  // Unpaired facets are domain boundaries (slice top and bottom only).
  std::vector<FacetRecord> paired;
  paired.reserve(interior_.size());
  for (const FacetRecord& rec : interior_) {
    if (rec.cell_minus >= 0) {
      paired.push_back(rec);
    } else {
      require(kind_ == MeshKind::Slice && (rec.local_plus == South || rec.local_plus == North),
              "mesh: unexpected unpaired facet");
      boundary_.push_back({rec.cell_plus, rec.local_plus,
                           rec.local_plus == South ? BoundaryTag::Bottom : BoundaryTag::Top});
    }
  }
  interior_ = std::move(paired);

  cell_cache_.resize(num_cells_);
  cell_areas_.resize(num_cells_);
  for (int c = 0; c < num_cells_; ++c) {
    cell_cache_[c] = cell_quadrature(c, default_nq_);
    CompensatedSum area;
    for (double w : cell_cache_[c].weights) area.add(w);
    cell_areas_[c] = area.value();
  }
  facet_cache_.resize(interior_.size());
  for (std::size_t f = 0; f < interior_.size(); ++f) facet_cache_[f] = facet_quadrature(static_cast<int>(f), default_nq_);
}

std::array<int, 2> Mesh::cell_ij(int cell) const
{
  require(cell >= 0 && cell < num_cells_, "mesh: invalid cell index " + std::to_string(cell));
  if (kind_ == MeshKind::Slice) return {cell % nx_, cell / nx_};
  const int local = cell % (ne_ * ne_);
  return {local % ne_, local / ne_};
}

int Mesh::panel_of(int cell) const
{
  require(kind_ == MeshKind::CubedSphere, "mesh: panels exist only on the cubed sphere");
  require(cell >= 0 && cell < num_cells_, "mesh: invalid cell index " + std::to_string(cell));
  return cell / (ne_ * ne_);
}

double Mesh::cell_length() const
{
  if (kind_ == MeshKind::Slice) return lx_ / nx_;
  return std::numbers::pi * radius_ / (2.0 * ne_);
}

MappedPoint Mesh::map(int cell, double xi, double eta) const
{
  const auto [i, j] = cell_ij(cell);
  MappedPoint mp;
  if (kind_ == MeshKind::Slice) {
    const double dx = lx_ / nx_;
    const double dz = hz_ / nz_;
    mp.x = {(i + 0.5 * (xi + 1.0)) * dx, (j + 0.5 * (eta + 1.0)) * dz, 0.0};
    mp.dxi = {0.5 * dx, 0.0, 0.0};
    mp.deta = {0.0, 0.5 * dz, 0.0};
    return mp;
  }
  const int p = panel_of(cell);
  const double delta = 2.0 * kQuarterPi / ne_;
  const double alpha = -kQuarterPi + (i + 0.5 * (xi + 1.0)) * delta;
  const double beta = -kQuarterPi + (j + 0.5 * (eta + 1.0)) * delta;
  const double X = std::tan(alpha);
  const double Y = std::tan(beta);
  const Vec3 c = cube_point(p, X, Y);
  const double n = norm(c);
  mp.x = {radius_ * c[0] / n, radius_ * c[1] / n, radius_ * c[2] / n};
  // d/dxi = d/dalpha * delta/2, and dX/dalpha = 1 + X^2.
  Vec3 dcx = cube_dX(p);
  Vec3 dcy = cube_dY(p);
  const double sx = (1.0 + X * X) * 0.5 * delta;
  const double sy = (1.0 + Y * Y) * 0.5 * delta;
  for (int k = 0; k < 3; ++k) {
    dcx[k] *= sx;
    dcy[k] *= sy;
  }
  mp.dxi = project_derivative(c, dcx, radius_);
  mp.deta = project_derivative(c, dcy, radius_);
  return mp;
}

CellQuadrature Mesh::cell_quadrature(int cell, int nq) const
{
  require(nq >= 1, "cell_quadrature: need at least one point per direction");
  require(cell >= 0 && cell < num_cells_, "cell_quadrature: invalid cell index " + std::to_string(cell));
  const GaussRule g = gauss_legendre(nq);
  CellQuadrature q;
  const std::size_t n = static_cast<std::size_t>(nq) * nq;
  q.xi.reserve(n);
  q.eta.reserve(n);
  q.points.reserve(n);
  q.weights.reserve(n);
  q.dual_xi.reserve(n);
  q.dual_eta.reserve(n);
  for (int b = 0; b < nq; ++b) {
    for (int a = 0; a < nq; ++a) {
      const MappedPoint mp = map(cell, g.points[a], g.points[b]);
      const double jac = norm(cross(mp.dxi, mp.deta));
      const double g11 = dot(mp.dxi, mp.dxi);
      const double g12 = dot(mp.dxi, mp.deta);
      const double g22 = dot(mp.deta, mp.deta);
      const double det = g11 * g22 - g12 * g12;
      Vec3 d1{}, d2{};
      for (int k = 0; k < 3; ++k) {
        d1[k] = (g22 * mp.dxi[k] - g12 * mp.deta[k]) / det;
        d2[k] = (g11 * mp.deta[k] - g12 * mp.dxi[k]) / det;
      }
      q.xi.push_back(g.points[a]);
      q.eta.push_back(g.points[b]);
      q.points.push_back(mp.x);
      q.weights.push_back(g.weights[a] * g.weights[b] * jac);
      q.dual_xi.push_back(d1);
      q.dual_eta.push_back(d2);
    }
  }
  return q;
}

FacetQuadrature Mesh::side_quadrature(int cell, int local, int nq, bool reversed) const
{
  const GaussRule g = gauss_legendre(nq);
  FacetQuadrature fq;
  for (int k = 0; k < nq; ++k) {
    const double s = g.points[k];
    const auto ref = facet_reference_point(local, s);
    const MappedPoint mp = map(cell, ref[0], ref[1]);
    const Vec3& tangent = (local == West || local == East) ? mp.deta : mp.dxi;
    const Vec3 up = kind_ == MeshKind::Slice ? Vec3{0.0, 0.0, 1.0} : mp.x;
    Vec3 nrm = cross(tangent, up);
    const double len = norm(nrm);
    for (double& v : nrm) v /= len;
    Vec3 outward = (local == West || local == East) ? mp.dxi : mp.deta;
    if (local == West || local == South)
      for (double& v : outward) v = -v;
    if (dot(nrm, outward) < 0.0)
      for (double& v : nrm) v = -v;
    fq.s_plus.push_back(s);
    fq.s_minus.push_back(reversed ? -s : s);
    fq.points.push_back(mp.x);
    fq.normals.push_back(nrm);
    fq.weights.push_back(g.weights[k] * norm(tangent));
  }
  return fq;
}

FacetQuadrature Mesh::facet_quadrature(int facet, int nq) const
{
  require(facet >= 0 && facet < static_cast<int>(interior_.size()),
          "facet_quadrature: invalid facet index " + std::to_string(facet));
  require(nq >= 1, "facet_quadrature: need at least one point");
  const FacetRecord& rec = interior_[facet];
  return side_quadrature(rec.cell_plus, rec.local_plus, nq, rec.reversed);
}

FacetQuadrature Mesh::boundary_facet_quadrature(int facet, int nq) const
{
  require(facet >= 0 && facet < static_cast<int>(boundary_.size()),
          "boundary_facet_quadrature: invalid facet index " + std::to_string(facet));
  require(nq >= 1, "boundary_facet_quadrature: need at least one point");
  const BoundaryFacet& bf = boundary_[facet];
  return side_quadrature(bf.cell, bf.local, nq, false);
}

} // namespace ctdg
