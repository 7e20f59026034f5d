#include "mcbench/obj_io.hpp"

#include "mcbench/image_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mcbench {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void parse_error(const fs::path& path, int line, const std::string& what) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Calls fn(line_view, line_number) for each line, tolerating CRLF endings.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        fn(line, line_no);
        if (end == text.size()) break;
        pos = end + 1;
    }
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) tokens.push_back(s.substr(start, i - start));
    }
    return tokens;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view token, const fs::path& path, int line) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        parse_error(path, line, "malformed number '" + std::string(token) + "'");
    return value;
}

long parse_long(std::string_view token, const fs::path& path, int line) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        parse_error(path, line, "malformed index '" + std::string(token) + "'");
    return value;
}

// OBJ indices are 1-based; negative values count back from the current end.
int resolve_index(long raw, std::size_t count, const char* what, const fs::path& path,
                  int line) {
    long idx = raw > 0 ? raw - 1 : static_cast<long>(count) + raw;
    if (raw == 0 || idx < 0 || idx >= static_cast<long>(count))
        parse_error(path, line, std::string(what) + " index " + std::to_string(raw) +
                                    " out of range (have " + std::to_string(count) + ")");
    return static_cast<int>(idx);
}

struct FaceCorner {
    int vertex;
    int uv;  // -1 when the corner has no texture coordinate
};

// Parses the MTL file into material name -> diffuse texture path.
std::map<std::string, fs::path> parse_mtl(const fs::path& path) {
    const std::string text = read_file(path);
    std::map<std::string, fs::path> diffuse;
    std::string current;
    for_each_line(text, [&](std::string_view line, int line_no) {
        line = trim(line);
        if (line.empty() || line.front() == '#') return;
        const auto tokens = split_ws(line);
        if (tokens[0] == "newmtl") {
            if (tokens.size() < 2) parse_error(path, line_no, "newmtl without a name");
            current = std::string(tokens[1]);
            diffuse.emplace(current, fs::path());
        } else if (tokens[0] == "map_Kd") {
            if (current.empty())
                parse_error(path, line_no, "map_Kd before any newmtl");
            std::string_view rest = trim(line.substr(std::strlen("map_Kd")));
            if (rest.empty()) parse_error(path, line_no, "map_Kd without a file name");
            diffuse[current] = path.parent_path() / std::string(rest);
        }
        // Other material channels are ignored.
    });
    return diffuse;
}

}  // namespace

MeshBundle load_mesh(const fs::path& path) {
    const std::string text = read_file(path);

    std::vector<Vec3> positions;
    std::vector<Vec2> uvs;
    std::vector<std::array<FaceCorner, 3>> faces;
    std::vector<std::string> face_materials;  // active usemtl per face
    std::optional<bool> faces_textured;

    fs::path mtl_path;
    std::map<std::string, fs::path> materials;
    std::string active_material;

    for_each_line(text, [&](std::string_view line, int line_no) {
        line = trim(line);
        if (line.empty() || line.front() == '#') return;
        const auto tokens = split_ws(line);
        const std::string_view key = tokens[0];

        if (key == "v") {
            if (tokens.size() < 4) parse_error(path, line_no, "v record needs 3 coordinates");
            positions.emplace_back(parse_double(tokens[1], path, line_no),
                                   parse_double(tokens[2], path, line_no),
                                   parse_double(tokens[3], path, line_no));
        } else if (key == "vt") {
            if (tokens.size() < 3) parse_error(path, line_no, "vt record needs 2 coordinates");
            uvs.emplace_back(parse_double(tokens[1], path, line_no),
                             parse_double(tokens[2], path, line_no));
        } else if (key == "f") {
            if (tokens.size() < 4) parse_error(path, line_no, "face needs at least 3 corners");
            std::vector<FaceCorner> corners;
            for (std::size_t t = 1; t < tokens.size(); ++t) {
                std::string_view spec = tokens[t];
                const std::size_t s1 = spec.find('/');
                std::string_view v_part = spec.substr(0, s1);
                std::string_view t_part;
                if (s1 != std::string_view::npos) {
                    std::string_view rest = spec.substr(s1 + 1);
                    const std::size_t s2 = rest.find('/');
                    t_part = s2 == std::string_view::npos ? rest : rest.substr(0, s2);
                    // The normal index, if present, is ignored.
                }
                FaceCorner corner;
                corner.vertex = resolve_index(parse_long(v_part, path, line_no),
                                              positions.size(), "vertex", path, line_no);
                corner.uv = t_part.empty()
                                ? -1
                                : resolve_index(parse_long(t_part, path, line_no),
                                                uvs.size(), "texture", path, line_no);
                corners.push_back(corner);
            }
            const bool textured = corners.front().uv >= 0;
            for (const FaceCorner& c : corners)
                if ((c.uv >= 0) != textured)
                    parse_error(path, line_no,
                                "face mixes textured and untextured corners");
            if (faces_textured && *faces_textured != textured)
                parse_error(path, line_no,
                            "mesh mixes textured and untextured faces");
            faces_textured = textured;
            for (std::size_t i = 1; i + 1 < corners.size(); ++i) {
                const std::array<FaceCorner, 3> tri = {corners[0], corners[i],
                                                       corners[i + 1]};
                if (tri[0].vertex == tri[1].vertex || tri[1].vertex == tri[2].vertex ||
                    tri[0].vertex == tri[2].vertex)
                    parse_error(path, line_no, "degenerate face repeats a vertex index");
                faces.push_back(tri);
                face_materials.push_back(active_material);
            }
        } else if (key == "mtllib") {
            if (tokens.size() < 2) parse_error(path, line_no, "mtllib without a file name");
            mtl_path = path.parent_path() / std::string(trim(line.substr(6)));
            materials = parse_mtl(mtl_path);
        } else if (key == "usemtl") {
            active_material = tokens.size() > 1 ? std::string(tokens[1]) : std::string();
        }
        // vn, o, g, s, l, p and unknown records are ignored.
    });

    MeshBundle bundle;
    bundle.geometry_path = path;
    TexturedMesh& mesh = bundle.mesh;
    mesh.vertices = std::move(positions);
    mesh.triangles.reserve(faces.size());
    for (const auto& tri : faces)
        mesh.triangles.push_back({tri[0].vertex, tri[1].vertex, tri[2].vertex});

    const bool textured = faces_textured.value_or(false);
    if (textured) {
        mesh.corner_uvs.reserve(faces.size());
        for (const auto& tri : faces)
            mesh.corner_uvs.push_back(
                {uvs[tri[0].uv], uvs[tri[1].uv], uvs[tri[2].uv]});
    }

    // Resolve the diffuse texture: the single map_Kd among materials used by
    // faces (or defined in the MTL when no usemtl appeared).
    if (!materials.empty()) {
        std::set<fs::path> used;
        bool any_usemtl = false;
        for (const std::string& m : face_materials)
            if (!m.empty()) {
                any_usemtl = true;
                auto it = materials.find(m);
                if (it != materials.end() && !it->second.empty()) used.insert(it->second);
            }
        if (!any_usemtl)
            for (const auto& [name, tex] : materials)
                if (!tex.empty()) used.insert(tex);
        if (used.size() > 1)
            throw std::runtime_error(path.string() +
                                     ": multi-material meshes are not supported");
        if (used.size() == 1) {
            if (!textured && !mesh.triangles.empty())
                throw std::runtime_error(path.string() +
                                         ": material references a texture but faces "
                                         "have no texture coordinates");
            bundle.material_path = mtl_path;
            bundle.texture_path = *used.begin();
            mesh.texture =
                std::make_shared<const TextureImage>(load_texture(bundle.texture_path));
        }
    }

    validate_mesh(mesh);
    return bundle;
}

namespace {

struct UvKey {
    std::uint64_t u, v;
    bool operator==(const UvKey&) const = default;
};

struct UvKeyHash {
    std::size_t operator()(const UvKey& k) const {
        return std::hash<std::uint64_t>()(k.u * 0x9e3779b97f4a7c15ull ^ k.v);
    }
};

UvKey uv_key(const Vec2& uv) {
    UvKey k;
    std::memcpy(&k.u, &uv.x(), sizeof k.u);
    std::memcpy(&k.v, &uv.y(), sizeof k.v);
    return k;
}

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    out += buf;
}

}  // namespace

void save_mesh(const MeshBundle& bundle, const fs::path& path) {
    const TexturedMesh& mesh = bundle.mesh;
    validate_mesh(mesh);

    fs::path obj_path = path;
    if (obj_path.extension() != ".obj") obj_path += ".obj";
    const fs::path mtl_path = fs::path(obj_path).replace_extension(".mtl");
    const fs::path tex_path = fs::path(obj_path).replace_extension(".png");

    std::string out;
    out.reserve(mesh.vertices.size() * 48 + mesh.triangles.size() * 32);
    if (mesh.has_texture()) {
        out += "mtllib ";
        out += mtl_path.filename().string();
        out += "\n";
    }
    for (const Vec3& v : mesh.vertices) {
        out += "v ";
        append_number(out, v.x());
        out += ' ';
        append_number(out, v.y());
        out += ' ';
        append_number(out, v.z());
        out += '\n';
    }

    // Deduplicate identical texture coordinates to keep files compact.
    std::vector<std::array<int, 3>> corner_uv_index;
    if (mesh.has_uvs()) {
        std::unordered_map<UvKey, int, UvKeyHash> uv_ids;
        std::vector<const Vec2*> unique_uvs;
        corner_uv_index.reserve(mesh.corner_uvs.size());
        for (const auto& tri_uv : mesh.corner_uvs) {
            std::array<int, 3> ids;
            for (int c = 0; c < 3; ++c) {
                auto [it, inserted] =
                    uv_ids.try_emplace(uv_key(tri_uv[c]), int(unique_uvs.size()));
                if (inserted) unique_uvs.push_back(&tri_uv[c]);
                ids[c] = it->second;
            }
            corner_uv_index.push_back(ids);
        }
        for (const Vec2* uv : unique_uvs) {
            out += "vt ";
            append_number(out, uv->x());
            out += ' ';
            append_number(out, uv->y());
            out += '\n';
        }
    }

    if (mesh.has_texture()) out += "usemtl material0\n";
    char buf[96];
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        if (mesh.has_uvs()) {
            const auto& uvi = corner_uv_index[t];
            std::snprintf(buf, sizeof buf, "f %d/%d %d/%d %d/%d\n", tri[0] + 1,
                          uvi[0] + 1, tri[1] + 1, uvi[1] + 1, tri[2] + 1, uvi[2] + 1);
        } else {
            std::snprintf(buf, sizeof buf, "f %d %d %d\n", tri[0] + 1, tri[1] + 1,
                          tri[2] + 1);
        }
        out += buf;
    }

    std::ofstream obj_out(obj_path, std::ios::binary);
    if (!obj_out) throw std::runtime_error("cannot create file: " + obj_path.string());
    obj_out << out;
    if (!obj_out.flush())
        throw std::runtime_error("write failed: " + obj_path.string());

    if (mesh.has_texture()) {
        std::ofstream mtl_out(mtl_path, std::ios::binary);
        if (!mtl_out) throw std::runtime_error("cannot create file: " + mtl_path.string());
        mtl_out << "newmtl material0\nmap_Kd " << tex_path.filename().string() << "\n";
        if (!mtl_out.flush())
            throw std::runtime_error("write failed: " + mtl_path.string());
        save_texture_png(*mesh.texture, tex_path);
    }
}

void save_mesh(const TexturedMesh& mesh, const fs::path& path) {
    MeshBundle bundle;
    bundle.mesh = mesh;
    save_mesh(bundle, path);
}

RegionMask load_region_mask(const fs::path& path, int vertex_count) {
    const std::string text = read_file(path);
    RegionMask mask(vertex_count, false);
    for_each_line(text, [&](std::string_view line, int line_no) {
        line = trim(line);
        if (line.empty() || line.front() == '#') return;
        const long idx = parse_long(line, path, line_no);
        if (idx < 0 || idx >= vertex_count)
            parse_error(path, line_no, "mask index " + std::to_string(idx) +
                                           " out of range (have " +
                                           std::to_string(vertex_count) + " vertices)");
        mask[idx] = true;
    });
    return mask;
}

}  // namespace mcbench
