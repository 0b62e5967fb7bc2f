#include "facerr/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "facerr/error.hpp"

namespace facerr {
namespace {

// (b - a) x (p - a). Zero exactly when p equals a or b.
inline double edge(const ScreenVertex& a, const ScreenVertex& b, double px, double py) {
  return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

// With positive orientation the interior is where every edge function is
// positive. In y-down coordinates an edge a->b is a top edge when it is
// horizontal running +x, and a left edge when it runs -y.
inline bool top_left(const ScreenVertex& a, const ScreenVertex& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  return (dy == 0.0 && dx > 0.0) || dy < 0.0;
}

void check_size(ImageSize size) {
  if (size.width <= 0 || size.height <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "image size must be positive, got " +
                                                 std::to_string(size.width) + "x" +
                                                 std::to_string(size.height));
  }
}

}  // namespace

ScreenMesh::ScreenMesh(const FaceShape& shape, std::span<const Triangle> triangles, const Pose& pose,
                       ImageSize size)
    : size_(size), triangles_(triangles.begin(), triangles.end()) {
  check_size(size);
  const auto n = shape.size();
  vertices_.reserve(n);
  for (const auto& v : shape.vertices) {
    const Vec2 p = to_image_frame(project_vertex(v, pose), size.height);
    vertices_.push_back({p.x(), p.y(), (pose.R * v).z()});
  }

  std::vector<std::uint8_t> referenced(n, 0);
  area_.resize(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    auto& tri = triangles_[t];
    for (auto i : tri) {
      if (i >= n) {
        throw Error(ErrorKind::kInvalidArgument, "triangle " + std::to_string(t) +
                                                     " references missing vertex " + std::to_string(i));
      }
      referenced[i] = 1;
    }
    const auto& a = vertices_[tri[0]];
    const auto& c = vertices_[tri[2]];
    double area = edge(a, vertices_[tri[1]], c.x, c.y);
    if (area < 0.0) {
      std::swap(tri[1], tri[2]);
      const auto& b2 = vertices_[tri[1]];
      const auto& c2 = vertices_[tri[2]];
      area = edge(a, b2, c2.x, c2.y);
    }
    area_[t] = (std::isfinite(area) && area > 0.0) ? area : 0.0;
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!referenced[i]) isolated_.push_back(i);
  }

  // Bin grid over the image rectangle grown by one pixel.
  grid_x0_ = -1.0;
  grid_y0_ = -1.0;
  grid_w_ = static_cast<int>(std::ceil((size.width + 1.0) / kBinSize)) + 1;
  grid_h_ = static_cast<int>(std::ceil((size.height + 1.0) / kBinSize)) + 1;
  const auto cells = static_cast<std::size_t>(grid_w_) * grid_h_;
  auto cell_range = [&](std::size_t t, int& cx0, int& cx1, int& cy0, int& cy1) {
    const auto& tri = triangles_[t];
    const auto& a = vertices_[tri[0]];
    const auto& b = vertices_[tri[1]];
    const auto& c = vertices_[tri[2]];
    const double x_lo = std::min({a.x, b.x, c.x}), x_hi = std::max({a.x, b.x, c.x});
    const double y_lo = std::min({a.y, b.y, c.y}), y_hi = std::max({a.y, b.y, c.y});
    const double gx_hi = grid_x0_ + grid_w_ * kBinSize, gy_hi = grid_y0_ + grid_h_ * kBinSize;
    if (x_hi < grid_x0_ || y_hi < grid_y0_ || x_lo >= gx_hi || y_lo >= gy_hi) return false;
    auto cell = [](double v, double origin, int count) {
      return std::clamp(static_cast<int>(std::floor((v - origin) / kBinSize)), 0, count - 1);
    };
    cx0 = cell(x_lo, grid_x0_, grid_w_);
    cx1 = cell(x_hi, grid_x0_, grid_w_);
    cy0 = cell(y_lo, grid_y0_, grid_h_);
    cy1 = cell(y_hi, grid_y0_, grid_h_);
    return true;
  };

  cell_start_.assign(cells + 1, 0);
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    int cx0, cx1, cy0, cy1;
    if (area_[t] == 0.0 || !cell_range(t, cx0, cx1, cy0, cy1)) continue;
    for (int cy = cy0; cy <= cy1; ++cy)
      for (int cx = cx0; cx <= cx1; ++cx) ++cell_start_[static_cast<std::size_t>(cy) * grid_w_ + cx + 1];
  }
  for (std::size_t i = 0; i < cells; ++i) cell_start_[i + 1] += cell_start_[i];
  cell_items_.resize(cell_start_[cells]);
  std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    int cx0, cx1, cy0, cy1;
    if (area_[t] == 0.0 || !cell_range(t, cx0, cx1, cy0, cy1)) continue;
    for (int cy = cy0; cy <= cy1; ++cy)
      for (int cx = cx0; cx <= cx1; ++cx)
        cell_items_[fill[static_cast<std::size_t>(cy) * grid_w_ + cx]++] = static_cast<std::uint32_t>(t);
  }
}

std::optional<SurfaceHit> ScreenMesh::test_triangle(std::uint32_t t, double x, double y) const {
  const auto& tri = triangles_[t];
  const auto& a = vertices_[tri[0]];
  const auto& b = vertices_[tri[1]];
  const auto& c = vertices_[tri[2]];
  const double e0 = edge(b, c, x, y);
  const double e1 = edge(c, a, x, y);
  const double e2 = edge(a, b, x, y);
  if (e0 < 0.0 || e1 < 0.0 || e2 < 0.0) return std::nullopt;
  // Normalizing by the sum (not the area) makes the weights exactly (1, 0, 0)
  // at a vertex.
  const double sum = e0 + e1 + e2;
  if (!(sum > 0.0)) return std::nullopt;
  SurfaceHit hit;
  hit.triangle = t;
  hit.weights = {e0 / sum, e1 / sum, e2 / sum};
  hit.depth = hit.weights[0] * a.depth + hit.weights[1] * b.depth + hit.weights[2] * c.depth;
  return hit;
}

std::optional<SurfaceHit> ScreenMesh::front_surface_at(double x, double y) const {
  const int cx = static_cast<int>(std::floor((x - grid_x0_) / kBinSize));
  const int cy = static_cast<int>(std::floor((y - grid_y0_) / kBinSize));
  if (!(cx >= 0 && cy >= 0 && cx < grid_w_ && cy < grid_h_)) return std::nullopt;
  const auto cell = static_cast<std::size_t>(cy) * grid_w_ + cx;

  std::optional<SurfaceHit> best;
  for (auto k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
    const auto t = cell_items_[k];
    auto hit = test_triangle(t, x, y);
    if (!hit) continue;
    if (!best || hit->depth > best->depth || (hit->depth == best->depth && t < best->triangle)) best = hit;
  }
  return best;
}

Color ScreenMesh::shade(const SurfaceHit& hit, std::span<const Color> vertex_colors) const {
  const auto& tri = triangles_[hit.triangle];
  const Color& c0 = vertex_colors[tri[0]];
  const Color& c1 = vertex_colors[tri[1]];
  const Color& c2 = vertex_colors[tri[2]];
  Color out;
  for (int k = 0; k < 3; ++k) {
    const double v = hit.weights[0] * c0[k] + hit.weights[1] * c1[k] + hit.weights[2] * c2[k];
    out[k] = std::clamp(v, std::min({c0[k], c1[k], c2[k]}), std::max({c0[k], c1[k], c2[k]}));
  }
  return out;
}

DepthOutput ScreenMesh::rasterize_depth() const {
  DepthOutput out;
  out.width = size_.width;
  out.height = size_.height;
  out.depth.assign(static_cast<std::size_t>(out.width) * out.height, -std::numeric_limits<double>::infinity());
  out.tri_id.assign(out.depth.size(), kNoTriangle);

  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    if (area_[t] == 0.0) continue;
    const auto& tri = triangles_[t];
    const auto& a = vertices_[tri[0]];
    const auto& b = vertices_[tri[1]];
    const auto& c = vertices_[tri[2]];
    const double x_lo = std::ceil(std::min({a.x, b.x, c.x}));
    const double x_hi = std::floor(std::max({a.x, b.x, c.x}));
    const double y_lo = std::ceil(std::min({a.y, b.y, c.y}));
    const double y_hi = std::floor(std::max({a.y, b.y, c.y}));
    if (x_hi < 0.0 || y_hi < 0.0 || x_lo > size_.width - 1 || y_lo > size_.height - 1) continue;
    const int x0 = static_cast<int>(std::max(0.0, x_lo));
    const int x1 = static_cast<int>(std::min<double>(size_.width - 1, x_hi));
    const int y0 = static_cast<int>(std::max(0.0, y_lo));
    const int y1 = static_cast<int>(std::min<double>(size_.height - 1, y_hi));

    const bool tl0 = top_left(b, c), tl1 = top_left(c, a), tl2 = top_left(a, b);
    const auto tid = static_cast<std::int32_t>(t);
    for (int py = y0; py <= y1; ++py) {
      const double y = py;
      for (int px = x0; px <= x1; ++px) {
        const double x = px;
        const double e0 = edge(b, c, x, y);
        const double e1 = edge(c, a, x, y);
        const double e2 = edge(a, b, x, y);
        const bool inside = (e0 > 0.0 || (e0 == 0.0 && tl0)) && (e1 > 0.0 || (e1 == 0.0 && tl1)) &&
                            (e2 > 0.0 || (e2 == 0.0 && tl2));
        if (!inside) continue;
        const double sum = e0 + e1 + e2;
        const double d = (e0 / sum) * a.depth + (e1 / sum) * b.depth + (e2 / sum) * c.depth;
        const auto idx = out.index(px, py);
        if (d > out.depth[idx] || (d == out.depth[idx] && tid < out.tri_id[idx])) {
          out.depth[idx] = d;
          out.tri_id[idx] = tid;
        }
      }
    }
  }
  return out;
}

RenderOutput render(const ScreenMesh& mesh, std::span<const Color> vertex_colors) {
  if (vertex_colors.size() != mesh.vertices().size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "texture count " + std::to_string(vertex_colors.size()) + " != vertex count " +
                    std::to_string(mesh.vertices().size()));
  }
  DepthOutput depth = mesh.rasterize_depth();
  RenderOutput out;
  out.color = Image(depth.width, depth.height);
  out.coverage = Mask(depth.width, depth.height);
  const auto tris = mesh.triangles();
  const auto verts = mesh.vertices();
  for (int y = 0; y < depth.height; ++y) {
    for (int x = 0; x < depth.width; ++x) {
      const auto idx = depth.index(x, y);
      const auto t = depth.tri_id[idx];
      if (t == kNoTriangle) continue;
      // Same weights as the depth pass: identical expressions on identical inputs.
      const auto& tri = tris[static_cast<std::size_t>(t)];
      const auto& a = verts[tri[0]];
      const auto& b = verts[tri[1]];
      const auto& c = verts[tri[2]];
      const double e0 = edge(b, c, x, y);
      const double e1 = edge(c, a, x, y);
      const double e2 = edge(a, b, x, y);
      const double sum = e0 + e1 + e2;
      SurfaceHit hit{static_cast<std::uint32_t>(t), {e0 / sum, e1 / sum, e2 / sum}, depth.depth[idx]};
      out.color.set_pixel(x, y, mesh.shade(hit, vertex_colors));
      out.coverage.set(x, y, true);
    }
  }
  out.depth = std::move(depth.depth);
  out.tri_id = std::move(depth.tri_id);
  return out;
}

RenderOutput render(const FaceShape& shape, std::span<const Triangle> triangles,
                    std::span<const Color> vertex_colors, const Pose& pose, ImageSize size) {
  check_size(size);
  if (vertex_colors.size() != shape.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "texture count " + std::to_string(vertex_colors.size()) + " != vertex count " +
                    std::to_string(shape.size()));
  }
  return render(ScreenMesh(shape, triangles, pose, size), vertex_colors);
}

DepthOutput render_depth_only(const FaceShape& shape, std::span<const Triangle> triangles,
                              const Pose& pose, ImageSize size) {
  return ScreenMesh(shape, triangles, pose, size).rasterize_depth();
}

}  // namespace facerr
