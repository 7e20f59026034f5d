#pragma once

#include "mcbench/mesh.hpp"

#include <filesystem>

namespace mcbench {

/// A mesh together with the files it came from (or will be written to).
struct MeshBundle {
    TexturedMesh mesh;
    std::filesystem::path geometry_path;
    std::filesystem::path material_path;  // empty when untextured
    std::filesystem::path texture_path;   // empty when untextured
};

/// Loads a Wavefront OBJ mesh. Supports v/vt/f records, negative (relative)
/// indices, fan triangulation of polygons, comments, blank lines and CRLF
/// endings. Resolves the MTL file and its diffuse texture map (map_Kd, PNG
/// or JPEG). Normals and other material channels are ignored. Faces must be
/// consistently textured: mixing corners with and without vt indices, or
/// referencing more than one diffuse texture, is an error.
/// Parse errors report the file and line number.
MeshBundle load_mesh(const std::filesystem::path& path);

/// Writes `<path>.obj` (plus `.mtl` and a PNG texture when the mesh is
/// textured) such that load_mesh inverts it. `path` may name the .obj file
/// directly or a stem without extension. Positions and UVs are printed with
/// 9 significant digits.
void save_mesh(const MeshBundle& bundle, const std::filesystem::path& path);

/// Convenience overload wrapping a bare mesh.
void save_mesh(const TexturedMesh& mesh, const std::filesystem::path& path);

/// Reads a region mask file: one eligible vertex index per line.
/// Vertices not listed are ineligible.
RegionMask load_region_mask(const std::filesystem::path& path, int vertex_count);

}  // namespace mcbench
