#pragma once

#include <string>

#include <json.hpp>

#include "ctdg/space.hpp"

namespace ctdg {

/// Vertices, cell vertex lists, facet records and the panel convention.
nlohmann::json mesh_to_json(const Mesh& mesh);
void dump_mesh_json(const Mesh& mesh, const std::string& path);

/// One row per dof: dof,x,y[,z],value.
void dump_field_csv(const Field& f, const std::string& path);

} // namespace ctdg
