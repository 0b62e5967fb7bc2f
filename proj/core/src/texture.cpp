#include "facerr/texture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "facerr/error.hpp"

namespace facerr {

Color sample_bilinear(const Image& image, double x, double y) {
  const int x0 = std::clamp(static_cast<int>(std::floor(x)), 0, image.width - 1);
  const int y0 = std::clamp(static_cast<int>(std::floor(y)), 0, image.height - 1);
  const int x1 = std::min(x0 + 1, image.width - 1);
  const int y1 = std::min(y0 + 1, image.height - 1);
  const double tx = std::clamp(x - x0, 0.0, 1.0);
  const double ty = std::clamp(y - y0, 0.0, 1.0);
  Color out;
  for (int c = 0; c < 3; ++c) {
    const double top = (1.0 - tx) * image.at(x0, y0, c) + tx * image.at(x1, y0, c);
    const double bottom = (1.0 - tx) * image.at(x0, y1, c) + tx * image.at(x1, y1, c);
    out[c] = (1.0 - ty) * top + ty * bottom;
  }
  return out;
}

VertexTextures acquire_textures(const Image& image, const FaceShape& shape, const Pose& pose) {
  if (image.empty()) throw Error(ErrorKind::kInvalidArgument, "cannot acquire textures from an empty image");
  const ImageSize size{image.width, image.height};
  VertexTextures out;
  out.colors.reserve(shape.size());
  out.valid.reserve(shape.size());
  for (const auto& v : shape.vertices) {
    const Vec2 p = to_image_frame(project_vertex(v, pose), image.height);
    if (in_image_bounds(p.x(), p.y(), size)) {
      out.colors.push_back(sample_bilinear(image, p.x(), p.y()));
      out.valid.push_back(1);
    } else {
      out.colors.push_back(kOutOfBoundsFill);
      out.valid.push_back(0);
    }
  }
  return out;
}

VertexTextures acquire_textures_from_render(const ScreenMesh& view,
                                            std::span<const Color> rendered_colors) {
  const auto verts = view.vertices();
  if (rendered_colors.size() != verts.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "rendered color count does not match the mesh");
  }
  VertexTextures out;
  out.colors.reserve(verts.size());
  out.valid.reserve(verts.size());
  for (const auto& v : verts) {
    if (!in_image_bounds(v.x, v.y, view.size())) {
      out.colors.push_back(kOutOfBoundsFill);
      out.valid.push_back(0);
      continue;
    }
    const auto hit = view.front_surface_at(v.x, v.y);
    out.colors.push_back(hit ? view.shade(*hit, rendered_colors) : Color::Zero().eval());
    out.valid.push_back(1);
  }
  return out;
}

std::size_t VisibilityMap::visible_count() const {
  return static_cast<std::size_t>(std::count(visible.begin(), visible.end(), std::uint8_t{1}));
}

double visibility_epsilon(std::span<const ScreenVertex> vertices) {
  if (vertices.empty()) return 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& v : vertices) {
    lo = std::min(lo, v.depth);
    hi = std::max(hi, v.depth);
  }
  return 1e-3 * (hi - lo);
}

VisibilityMap resolve_visibility(const ScreenMesh& view) {
  const auto verts = view.vertices();
  const ImageSize size = view.size();
  VisibilityMap out;
  out.epsilon = visibility_epsilon(verts);
  out.owner_of_pixel = view.rasterize_depth();
  out.visible.assign(verts.size(), 0);

  // Isolated vertices occlude as points on their rounded pixel: keep the two
  // deepest per pixel so a vertex can be compared against the best other one.
  struct PointOccluders {
    double first = -std::numeric_limits<double>::infinity();
    std::uint32_t first_vertex = 0;
    double second = -std::numeric_limits<double>::infinity();
  };
  std::unordered_map<std::int64_t, PointOccluders> points;
  auto pixel_key = [&](const ScreenVertex& v) {
    return static_cast<std::int64_t>(std::lround(v.y)) * size.width + std::lround(v.x);
  };
  for (auto i : view.isolated_vertices()) {
    const auto& v = verts[i];
    if (!in_image_bounds(v.x, v.y, size)) continue;
    auto& slot = points[pixel_key(v)];
    if (v.depth > slot.first) {
      slot.second = slot.first;
      slot.first = v.depth;
      slot.first_vertex = i;
    } else if (v.depth > slot.second) {
      slot.second = v.depth;
    }
  }

  for (std::uint32_t i = 0; i < verts.size(); ++i) {
    const auto& v = verts[i];
    if (!in_image_bounds(v.x, v.y, size)) continue;
    bool visible = true;
    if (const auto hit = view.front_surface_at(v.x, v.y); hit && hit->depth > v.depth + out.epsilon) {
      visible = false;
    }
    if (visible && !points.empty()) {
      if (auto it = points.find(pixel_key(v)); it != points.end()) {
        const double other = it->second.first_vertex == i ? it->second.second : it->second.first;
        if (other > v.depth + out.epsilon) visible = false;
      }
    }
    out.visible[i] = visible ? 1 : 0;
  }
  return out;
}

VisibilityMap resolve_visibility(const FaceShape& shape, std::span<const Triangle> triangles,
                                 const Pose& pose, ImageSize size) {
  return resolve_visibility(ScreenMesh(shape, triangles, pose, size));
}

}  // namespace facerr
