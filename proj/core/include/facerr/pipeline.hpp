#pragma once

#include <cstdint>
#include <vector>

#include "facerr/geometry.hpp"
#include "facerr/image.hpp"
#include "facerr/morphable_model.hpp"
#include "facerr/rasterizer.hpp"
#include "facerr/texture.hpp"

namespace facerr {

// Imported fit of one image: shape, its mesh topology and pose a.
struct FittedFace {
  FaceShape shape;
  std::vector<Triangle> triangles;
  Pose pose_a;
  Image source_image;
};

void validate_face(const FittedFace& face);

struct AngleRange {
  double lo = 0.0;  // radians
  double hi = 0.0;
};

// Random view change. Each draw is keyed by (seed, stream) so batch entries
// are independent of scheduling.
struct PoseSampler {
  AngleRange yaw{deg_to_rad(-90.0), deg_to_rad(90.0)};
  AngleRange pitch{deg_to_rad(-20.0), deg_to_rad(20.0)};
  AngleRange roll{0.0, 0.0};
  std::uint64_t seed = 0;

  static PoseSampler fixed(const EulerAngles& e);

  EulerAngles draw_angles(std::uint64_t stream) const;
  Mat3 draw(std::uint64_t stream) const { return euler_to_matrix(draw_angles(stream)); }
};

void validate_sampler(const PoseSampler& sampler);

// 5 px at 256 px, scaled with the shorter image side.
int default_erosion_radius(ImageSize size);

// Everything produced while renewing the pose-a textures.
struct Prerender {
  VertexTextures raw;    // straight off the source image
  RenderOutput render;   // raw textures rendered at pose a
  Mask eroded_coverage;  // render coverage eroded by a disc
  Image eroded_image;    // render with the eroded-away band set to fill_color
  Color fill_color;      // mean of the valid raw vertex colors
  VertexTextures textures;  // renewed textures
  int stabilization_passes = 0;
};

Color mean_valid_color(const VertexTextures& textures);

// Throws Error(kEmptySilhouette) when the erosion removes the whole silhouette
// and Error(kInvalidArgument) for a negative radius.
Prerender prerender_and_erode(const FittedFace& face, int radius);
VertexTextures erode_prerender(const FittedFace& face, int radius);

struct TrainingPair {
  Image input_render;      // Rd_a'
  Image target;            // source image, untouched
  Mask artifact_mask;
  Image aux_render;        // Rd_b
  Pose pose_b;
  Image eroded_prerender;  // renewed textures rendered at pose a
  std::vector<std::uint8_t> visible_a;
  std::vector<std::uint8_t> visible_b;
};

// Pixels covered at pose a whose triangle has a vertex that could not sample
// itself from the pose-b render. A vertex already hidden at pose a keeps its
// value when the two views coincide, since it resamples the same occluder.
Mask artifact_mask(std::span<const std::int32_t> pose_a_tri_id, ImageSize size,
                   std::span<const Triangle> triangles, std::span<const std::uint8_t> visible_a,
                   std::span<const std::uint8_t> visible_b, bool same_view);

TrainingPair rotate_and_render_pair(const FittedFace& face, const Mat3& r_random, int erosion_radius);
TrainingPair rotate_and_render_pair(const FittedFace& face, const PoseSampler& sampler,
                                    std::uint64_t stream, int erosion_radius);

// Test-time path: renewed textures rendered at an arbitrary pose.
RenderOutput rotate_to_target_render(const FittedFace& face, const Pose& target, int erosion_radius);
Image rotate_to_target(const FittedFace& face, const Pose& target, int erosion_radius);

}  // namespace facerr
