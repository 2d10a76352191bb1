#include "ctdg/io.hpp"

#include <fstream>
#include <iomanip>

#include "ctdg/error.hpp"

namespace ctdg {

nlohmann::json mesh_to_json(const Mesh& mesh)
{
  nlohmann::json j;
  const bool sphere = mesh.kind() == MeshKind::CubedSphere;
  j["kind"] = sphere ? "cubed-sphere" : "slice";
  if (sphere) {
    j["ne"] = mesh.ne();
    j["radius"] = mesh.radius();
    j["panel_convention"] = {
        {"cell_index", "panel*ne*ne + j*ne + i, (i, j) along equiangular (alpha, beta)"},
        {"panels", {"(1,X,Y)", "(-X,1,Y)", "(-1,-X,Y)", "(X,-1,Y)", "(-Y,X,1)", "(Y,X,-1)"}},
        {"map", "X = tan(alpha), Y = tan(beta), then radial projection to the sphere"}};
  } else {
    j["nx"] = mesh.nx();
    j["nz"] = mesh.nz();
    j["lx"] = mesh.lx();
    j["hz"] = mesh.hz();
  }
  j["local_vertex_order"] = "0 (-1,-1), 1 (1,-1), 2 (-1,1), 3 (1,1)";
  j["local_facets"] = "0 west (xi=-1), 1 east, 2 south (eta=-1), 3 north";
  j["vertices"] = mesh.vertices();
  nlohmann::json cells = nlohmann::json::array();
  for (int c = 0; c < mesh.num_cells(); ++c) cells.push_back(mesh.cell_vertices(c));
  j["cells"] = cells;
  nlohmann::json facets = nlohmann::json::array();
  for (const auto& f : mesh.interior_facets())
    facets.push_back({f.cell_plus, f.local_plus, f.cell_minus, f.local_minus, f.reversed});
  j["interior_facets"] = facets;
  nlohmann::json boundary = nlohmann::json::array();
  for (const auto& b : mesh.boundary_facets())
    boundary.push_back({b.cell, b.local, b.tag == BoundaryTag::Top ? "top" : "bottom"});
  j["boundary_facets"] = boundary;
  return j;
}

void dump_mesh_json(const Mesh& mesh, const std::string& path)
{
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot open " + path);
  out << mesh_to_json(mesh).dump(1) << "\n";
}

void dump_field_csv(const Field& f, const std::string& path)
{
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot open " + path);
  const bool sphere = f.space().mesh().kind() == MeshKind::CubedSphere;
  out << (sphere ? "dof,x,y,z,value\n" : "dof,x,z,value\n") << std::setprecision(17);
  const auto& pts = f.space().dof_points();
  for (int d = 0; d < f.size(); ++d) {
    out << d << ',' << pts[d][0] << ',' << pts[d][1];
    if (sphere) out << ',' << pts[d][2];
    out << ',' << f[d] << '\n';
  }
}

} // namespace ctdg
