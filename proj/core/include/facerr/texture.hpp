#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "facerr/geometry.hpp"
#include "facerr/image.hpp"
#include "facerr/rasterizer.hpp"

namespace facerr {

struct VertexTextures {
  std::vector<Color> colors;
  std::vector<std::uint8_t> valid;  // projected inside the image

  std::size_t size() const { return colors.size(); }
};

inline const Color kOutOfBoundsFill{0.5, 0.5, 0.5};

// Inside the rectangle spanned by the corner pixel centers.
inline bool in_image_bounds(double x, double y, ImageSize size) {
  return x >= 0.0 && y >= 0.0 && x <= size.width - 1 && y <= size.height - 1;
}

Color sample_bilinear(const Image& image, double x, double y);

// Samples every vertex, occluded ones included: those pick up whatever surface
// sits in front of them, which is the artifact the training pairs rely on.
// Throws Error(kInvalidArgument) on an empty image.
VertexTextures acquire_textures(const Image& image, const FaceShape& shape, const Pose& pose);

// Acquisition from a render of `view` colored with `rendered_colors`. The
// render is sampled as the continuous image it discretizes: the front surface
// at each projected vertex, interpolated exactly. A visible vertex therefore
// gets its rendered color back without resampling error.
VertexTextures acquire_textures_from_render(const ScreenMesh& view,
                                            std::span<const Color> rendered_colors);

struct VisibilityMap {
  std::vector<std::uint8_t> visible;
  DepthOutput owner_of_pixel;  // tri_id per pixel
  double epsilon = 0.0;

  std::size_t visible_count() const;
};

// 1e-3 of the rotated-depth range of the vertices.
double visibility_epsilon(std::span<const ScreenVertex> vertices);

// A vertex is visible when it projects inside the image and no surface lies
// more than epsilon in front of it along its viewing ray. Vertices outside
// every triangle act as point occluders on their rounded pixel.
VisibilityMap resolve_visibility(const FaceShape& shape, std::span<const Triangle> triangles,
                                 const Pose& pose, ImageSize size);
VisibilityMap resolve_visibility(const ScreenMesh& view);

}  // namespace facerr
