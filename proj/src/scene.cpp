// Copyright 2026 The veil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "veil/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "veil/error.hpp"
#include "veil/image.hpp"

namespace veil {

double Scene::degenerate_quad_percent() const {
  if (quads.empty()) return 0.0;
  size_t degenerate = 0;
  for (const Quad& q : quads)
    if (q.is_degenerate()) ++degenerate;
  return 100.0 * double(degenerate) / double(quads.size());
}

void validate_camera(const Camera& camera) {
  if (camera.width <= 0 || camera.height <= 0)
    throw Error(ErrorCode::invalid_argument, "viewport dimensions must be positive");
  if (camera.width > kMaxViewportWidth || camera.height > kMaxViewportHeight)
    throw Error(ErrorCode::invalid_argument, "viewport exceeds the 2560x2048 limit");
}

void validate_scene(const Scene& scene) {
  validate_camera(scene.camera);
  for (size_t i = 0; i < scene.quads.size(); ++i) {
    const Quad& q = scene.quads[i];
    for (uint32_t v : q.v)
      if (v >= scene.vertices.size())
        throw Error(ErrorCode::invalid_argument,
                    "quad " + std::to_string(i) + " references vertex " + std::to_string(v) +
                        " out of range");
    if (q.material_id >= scene.materials.size())
      throw Error(ErrorCode::invalid_argument,
                  "quad " + std::to_string(i) + " references material out of range");
  }
  for (const Material& m : scene.materials)
    if (m.texture >= int(scene.textures.size()))
      throw Error(ErrorCode::invalid_argument, "material references texture out of range");
}

Vec4d project_to_clip(Vec3d position, const Camera& camera) {
  return camera.view_projection.transform({position.x, position.y, position.z, 1.0});
}

Vec2d clip_to_pixel(Vec4d clip, const Camera& camera) {
  double inv_w = 1.0 / clip.w;
  double ndc_x = clip.x * inv_w;
  double ndc_y = clip.y * inv_w;
  return {(ndc_x + 1.0) * 0.5 * camera.width, (1.0 - ndc_y) * 0.5 * camera.height};
}

std::optional<Vec3d> camera_eye(const Camera& camera) {
  if (camera.eye) return camera.eye;
  // The eye is the preimage of clip (0,0,z,0); for w-affine (orthographic)
  // matrices there is no finite eye.
  bool ok = false;
  Mat4 inv = inverse(camera.view_projection, &ok);
  if (!ok) return std::nullopt;
  Vec4d h = inv.transform({0.0, 0.0, 1.0, 0.0});
  if (std::abs(h.w) < 1e-12) return std::nullopt;
  double s = 1.0 / h.w;
  return Vec3d{h.x * s, h.y * s, h.z * s};
}

Vec3d camera_forward(const Camera& camera) {
  // Gradient of clip z wrt world position: rows of the matrix.
  const auto& m = camera.view_projection.m;
  Vec3d grad{m[2][0], m[2][1], m[2][2]};
  double len = length(grad);
  if (len <= 0.0) return {0.0, 0.0, 1.0};
  return grad * (1.0 / len);
}

Mat4 inverse(const Mat4& in, bool* ok) {
  double a[4][8];
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a[i][j] = in.m[i][j];
    for (int j = 0; j < 4; ++j) a[i][4 + j] = (i == j) ? 1.0 : 0.0;
  }
  *ok = true;
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-14) {
      *ok = false;
      return Mat4::identity();
    }
    if (pivot != col)
      for (int j = 0; j < 8; ++j) std::swap(a[pivot][j], a[col][j]);
    double inv_p = 1.0 / a[col][col];
    for (int j = 0; j < 8; ++j) a[col][j] *= inv_p;
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      double f = a[r][col];
      if (f == 0.0) continue;
      for (int j = 0; j < 8; ++j) a[r][j] -= f * a[col][j];
    }
  }
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.m[i][j] = a[i][4 + j];
  return out;
}

Camera make_look_at_camera(Vec3d from, Vec3d at, Vec3d up, double fov_deg, double near_z,
                           double far_z, int width, int height) {
  Vec3d fwd = normalize(at - from);  // view -z
  Vec3d right = normalize(cross(fwd, up));
  Vec3d v_up = cross(right, fwd);

  Mat4 view = Mat4::identity();
  view.m[0][0] = right.x; view.m[0][1] = right.y; view.m[0][2] = right.z;
  view.m[1][0] = v_up.x;  view.m[1][1] = v_up.y;  view.m[1][2] = v_up.z;
  view.m[2][0] = -fwd.x;  view.m[2][1] = -fwd.y;  view.m[2][2] = -fwd.z;
  view.m[0][3] = -dot(right, from);
  view.m[1][3] = -dot(v_up, from);
  view.m[2][3] = dot(fwd, from);

  // Right-handed perspective looking down view -z, depth range [0, 1].
  double f = 1.0 / std::tan(fov_deg * (3.14159265358979323846 / 180.0) * 0.5);
  double aspect = double(width) / double(height);
  Mat4 proj;
  proj.m[0][0] = f / aspect;
  proj.m[1][1] = f;
  proj.m[2][2] = far_z / (near_z - far_z);
  proj.m[2][3] = near_z * far_z / (near_z - far_z);
  proj.m[3][2] = -1.0;

  Camera cam;
  cam.view_projection = proj * view;
  cam.width = width;
  cam.height = height;
  cam.eye = from;
  return cam;
}

// --- texture mip chain ------------------------------------------------------

Texture build_texture(const Image8& image) {
  Texture tex;
  TextureLevel base;
  base.width = image.width;
  base.height = image.height;
  base.texels.resize(size_t(image.width) * image.height);
  for (size_t i = 0; i < base.texels.size(); ++i) {
    const uint8_t* p = image.rgba.data() + i * 4;
    base.texels[i] = {p[0] / 255.0f, p[1] / 255.0f, p[2] / 255.0f, p[3] / 255.0f};
  }
  tex.levels.push_back(std::move(base));
  while (tex.levels.back().width > 1 || tex.levels.back().height > 1) {
    const TextureLevel& src = tex.levels.back();
    TextureLevel next;
    next.width = std::max(1, src.width / 2);
    next.height = std::max(1, src.height / 2);
    next.texels.resize(size_t(next.width) * next.height);
    for (int y = 0; y < next.height; ++y) {
      for (int x = 0; x < next.width; ++x) {
        int x0 = std::min(2 * x, src.width - 1), x1 = std::min(2 * x + 1, src.width - 1);
        int y0 = std::min(2 * y, src.height - 1), y1 = std::min(2 * y + 1, src.height - 1);
        Vec4f s = src.texels[size_t(y0) * src.width + x0] +
                  src.texels[size_t(y0) * src.width + x1] +
                  src.texels[size_t(y1) * src.width + x0] +
                  src.texels[size_t(y1) * src.width + x1];
        next.texels[size_t(y) * next.width + x] = s * 0.25f;
      }
    }
    tex.levels.push_back(std::move(next));
  }
  return tex;
}

// --- OBJ / MTL / camera parsing ---------------------------------------------

namespace {

struct ObjIndex {
  int v = 0, vt = 0, vn = 0;
  bool operator<(const ObjIndex& o) const {
    if (v != o.v) return v < o.v;
    if (vt != o.vt) return vt < o.vt;
    return vn < o.vn;
  }
};

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw Error(ErrorCode::parse, path + ":" + std::to_string(line) + ": " + what);
}

int resolve_index(int idx, size_t count, const std::string& path, int line) {
  // OBJ indices are 1-based; negative indices are relative to the end.
  int r = idx > 0 ? idx - 1 : int(count) + idx;
  if (idx == 0 || r < 0 || r >= int(count))
    parse_fail(path, line, "index " + std::to_string(idx) + " out of range");
  return r;
}

ObjIndex parse_face_vertex(const std::string& token, const std::string& path, int line) {
  ObjIndex out;
  size_t s1 = token.find('/');
  if (s1 == std::string::npos) {
    out.v = std::atoi(token.c_str());
    return out;
  }
  out.v = std::atoi(token.substr(0, s1).c_str());
  size_t s2 = token.find('/', s1 + 1);
  if (s2 == std::string::npos) {
    out.vt = std::atoi(token.substr(s1 + 1).c_str());
    return out;
  }
  if (s2 > s1 + 1) out.vt = std::atoi(token.substr(s1 + 1, s2 - s1 - 1).c_str());
  if (s2 + 1 < token.size()) out.vn = std::atoi(token.substr(s2 + 1).c_str());
  if (out.v == 0) parse_fail(path, line, "malformed face vertex '" + token + "'");
  return out;
}

void load_materials(const std::string& path, Scene* scene,
                    std::map<std::string, uint32_t>* by_name) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open material file " + path);
  std::string dir = std::filesystem::path(path).parent_path().string();
  std::string line;
  int line_no = 0;
  Material* current = nullptr;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key) || key[0] == '#') continue;
    if (key == "newmtl") {
      std::string name;
      ss >> name;
      (*by_name)[name] = uint32_t(scene->materials.size());
      scene->materials.emplace_back();
      current = &scene->materials.back();
      current->name = name;
    } else if (current && key == "Kd") {
      ss >> current->base_color.x >> current->base_color.y >> current->base_color.z;
    } else if (current && key == "d") {
      ss >> current->opacity;
      if (current->opacity < 0.0f || current->opacity > 1.0f)
        parse_fail(path, line_no, "dissolve outside [0,1]");
    } else if (current && key == "map_Kd") {
      std::string tex_path;
      ss >> tex_path;
      if (!dir.empty()) tex_path = dir + "/" + tex_path;
      scene->textures.push_back(build_texture(load_png(tex_path)));
      current->texture = int(scene->textures.size()) - 1;
      current->uses_uvs = true;
    }
  }
}

}  // namespace

Scene load_scene(const std::string& mesh_path, const std::string& material_path,
                 const std::string& camera_path) {
  std::ifstream in(mesh_path);
  if (!in) throw Error(ErrorCode::io, "cannot open mesh file " + mesh_path);
  std::string dir = std::filesystem::path(mesh_path).parent_path().string();

  Scene scene;
  std::map<std::string, uint32_t> materials_by_name;
  std::vector<Vec3f> positions;
  std::vector<Vec4f> position_colors;
  std::vector<Vec3f> normals;
  std::vector<Vec2f> uvs;
  std::map<ObjIndex, uint32_t> vertex_cache;
  uint32_t current_material = 0;

  if (!material_path.empty()) load_materials(material_path, &scene, &materials_by_name);

  auto ensure_default_material = [&] {
    if (scene.materials.empty()) {
      scene.materials.emplace_back();
      scene.materials.back().name = "default";
    }
  };

  auto vertex_for = [&](ObjIndex idx, int line) -> uint32_t {
    auto it = vertex_cache.find(idx);
    if (it != vertex_cache.end()) return it->second;
    Vertex v;
    int pi = resolve_index(idx.v, positions.size(), mesh_path, line);
    v.position = positions[pi];
    v.color = position_colors[pi];
    if (idx.vt != 0) {
      v.uv = uvs[resolve_index(idx.vt, uvs.size(), mesh_path, line)];
      scene.has_uvs = true;
    }
    if (idx.vn != 0) {
      v.normal = normalize(normals[resolve_index(idx.vn, normals.size(), mesh_path, line)]);
      scene.has_vertex_normals = true;
    }
    uint32_t id = uint32_t(scene.vertices.size());
    scene.vertices.push_back(v);
    vertex_cache.emplace(idx, id);
    return id;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key) || key[0] == '#') continue;
    if (key == "v") {
      Vec3f p;
      if (!(ss >> p.x >> p.y >> p.z)) parse_fail(mesh_path, line_no, "malformed vertex");
      Vec4f c{1.0f, 1.0f, 1.0f, 1.0f};
      float r, g, b;
      if (ss >> r >> g >> b) {  // "v x y z r g b" color extension
        c = {r, g, b, 1.0f};
        scene.has_vertex_colors = true;
      }
      positions.push_back(p);
      position_colors.push_back(c);
    } else if (key == "vn") {
      Vec3f n;
      if (!(ss >> n.x >> n.y >> n.z)) parse_fail(mesh_path, line_no, "malformed normal");
      normals.push_back(n);
    } else if (key == "vt") {
      Vec2f t;
      if (!(ss >> t.x >> t.y)) parse_fail(mesh_path, line_no, "malformed texcoord");
      uvs.push_back(t);
    } else if (key == "f") {
      std::vector<ObjIndex> face;
      std::string token;
      while (ss >> token) face.push_back(parse_face_vertex(token, mesh_path, line_no));
      if (face.size() < 3 || face.size() > 4)
        parse_fail(mesh_path, line_no,
                   "unsupported face arity " + std::to_string(face.size()));
      ensure_default_material();
      Quad q;
      q.material_id = current_material;
      for (size_t i = 0; i < face.size(); ++i) q.v[i] = vertex_for(face[i], line_no);
      if (face.size() == 3) q.v[3] = q.v[2];
      scene.quads.push_back(q);
    } else if (key == "usemtl") {
      std::string name;
      ss >> name;
      auto it = materials_by_name.find(name);
      if (it == materials_by_name.end()) {
        ensure_default_material();
        current_material = 0;  // unknown name falls back to the first material
      } else {
        current_material = it->second;
      }
    } else if (key == "mtllib" && material_path.empty()) {
      std::string mtl;
      ss >> mtl;
      if (!dir.empty()) mtl = dir + "/" + mtl;
      load_materials(mtl, &scene, &materials_by_name);
    }
    // o/g/s and anything else are ignored.
  }
  ensure_default_material();

  if (!camera_path.empty()) scene.camera = load_camera_config(camera_path);
  validate_scene(scene);
  return scene;
}

Camera load_camera_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open camera config " + path);
  Camera cam;
  bool have_matrix = false, have_look = false;
  Vec3d from{0, 0, 5}, at{0, 0, 0}, up{0, 1, 0};
  double fov = 60.0, near_z = 0.1, far_z = 100.0;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t eq = line.find('=');
    if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    key.erase(std::remove_if(key.begin(), key.end(), [](char c) { return c == ' ' || c == '\t'; }),
              key.end());
    std::istringstream vs(line.substr(eq + 1));
    auto want = [&](int n, double* out) {
      for (int i = 0; i < n; ++i)
        if (!(vs >> out[i])) parse_fail(path, line_no, "expected " + std::to_string(n) + " numbers");
    };
    if (key == "view_projection") {
      double v[16];
      want(16, v);
      for (int i = 0; i < 16; ++i) cam.view_projection.m[i / 4][i % 4] = v[i];
      have_matrix = true;
    } else if (key == "width") {
      double v;
      want(1, &v);
      cam.width = int(v);
    } else if (key == "height") {
      double v;
      want(1, &v);
      cam.height = int(v);
    } else if (key == "eye") {
      double v[3];
      want(3, v);
      cam.eye = Vec3d{v[0], v[1], v[2]};
    } else if (key == "look_from") {
      want(3, &from.x);
      have_look = true;
    } else if (key == "look_at") {
      want(3, &at.x);
      have_look = true;
    } else if (key == "up") {
      want(3, &up.x);
    } else if (key == "fov_deg") {
      want(1, &fov);
    } else if (key == "near") {
      want(1, &near_z);
    } else if (key == "far") {
      want(1, &far_z);
    } else {
      parse_fail(path, line_no, "unknown camera key '" + key + "'");
    }
  }
  if (have_look && !have_matrix) {
    auto eye_override = cam.eye;
    Camera look = make_look_at_camera(from, at, up, fov, near_z, far_z, cam.width, cam.height);
    look.width = cam.width;
    look.height = cam.height;
    if (eye_override) look.eye = eye_override;
    cam = look;
  }
  validate_camera(cam);
  return cam;
}

}  // namespace veil
