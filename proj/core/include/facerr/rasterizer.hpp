#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "facerr/geometry.hpp"
#include "facerr/image.hpp"
#include "facerr/morphable_model.hpp"

namespace facerr {

inline constexpr std::int32_t kNoTriangle = -1;

// Max-z buffer. depth is -inf and tri_id is kNoTriangle wherever nothing was drawn.
struct DepthOutput {
  int width = 0;
  int height = 0;
  std::vector<double> depth;
  std::vector<std::int32_t> tri_id;

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  bool covered(int x, int y) const { return tri_id[index(x, y)] != kNoTriangle; }
};

struct RenderOutput {
  Image color;
  std::vector<double> depth;
  std::vector<std::int32_t> tri_id;
  Mask coverage;

  int width() const { return color.width; }
  int height() const { return color.height; }
};

struct ScreenVertex {
  double x = 0.0;
  double y = 0.0;
  double depth = 0.0;
};

// Frontmost surface point at a continuous image position.
struct SurfaceHit {
  std::uint32_t triangle = 0;
  std::array<double, 3> weights{};  // barycentric, ordered as ScreenMesh::triangles()[triangle]
  double depth = 0.0;
};

// Image frame: x right, y down, (0, 0) at the top-left pixel center. The raw
// projection has y up, so the flip happens here and only here.
inline Vec2 to_image_frame(const Vec2& raw, int image_height) {
  return {raw.x(), static_cast<double>(image_height - 1) - raw.y()};
}

// A mesh projected into one view, with a uniform bin grid over the projected
// triangles for point queries. Both the rasterizer and texture acquisition
// work from this so the two always agree on which surface is in front.
class ScreenMesh {
 public:
  ScreenMesh(const FaceShape& shape, std::span<const Triangle> triangles, const Pose& pose,
             ImageSize size);

  ImageSize size() const { return size_; }
  std::span<const ScreenVertex> vertices() const { return vertices_; }
  std::span<const Triangle> triangles() const { return triangles_; }

  // Triangles whose projection has zero (or non-finite) area never cover anything.
  bool degenerate(std::uint32_t t) const { return area_[t] == 0.0; }

  // Frontmost triangle containing (x, y), edges inclusive. Ties in depth go to
  // the lower triangle index. Positions more than a pixel outside the image
  // never hit.
  std::optional<SurfaceHit> front_surface_at(double x, double y) const;

  // Barycentric color at a hit, clamped to the triangle's per-channel range.
  Color shade(const SurfaceHit& hit, std::span<const Color> vertex_colors) const;

  // Rasterize depth and triangle ids over the image with the top-left rule at
  // integer pixel centers.
  DepthOutput rasterize_depth() const;

  // Vertices not referenced by any triangle.
  const std::vector<std::uint32_t>& isolated_vertices() const { return isolated_; }

 private:
  std::optional<SurfaceHit> test_triangle(std::uint32_t t, double x, double y) const;

  ImageSize size_;
  std::vector<ScreenVertex> vertices_;
  std::vector<Triangle> triangles_;  // reordered so the projected area is positive
  std::vector<double> area_;
  std::vector<std::uint32_t> isolated_;

  // Bin grid (CSR layout).
  double grid_x0_ = 0.0;
  double grid_y0_ = 0.0;
  int grid_w_ = 0;
  int grid_h_ = 0;
  std::vector<std::uint32_t> cell_start_;
  std::vector<std::uint32_t> cell_items_;
};

inline constexpr double kBinSize = 8.0;

// Throws Error(kInvalidArgument) on a zero-area image and
// Error(kDimensionMismatch) if the color count differs from the vertex count.
RenderOutput render(const FaceShape& shape, std::span<const Triangle> triangles,
                    std::span<const Color> vertex_colors, const Pose& pose, ImageSize size);
RenderOutput render(const ScreenMesh& mesh, std::span<const Color> vertex_colors);

DepthOutput render_depth_only(const FaceShape& shape, std::span<const Triangle> triangles,
                              const Pose& pose, ImageSize size);

}  // namespace facerr
