#pragma once

// Brute-force references for tests. Nothing here calls into the production
// modules; only the plain data types are shared.

#include <cstdint>
#include <span>
#include <vector>

#include "facerr/geometry.hpp"
#include "facerr/image.hpp"
#include "facerr/morphable_model.hpp"
#include "facerr/rasterizer.hpp"

namespace facerr::oracle {

// Edge-function distance (pixels) below which coverage is treated as a tie,
// and depth difference below which two surfaces are treated as a tie.
inline constexpr double kEdgeMargin = 1e-9;
inline constexpr double kDepthMargin = 1e-9;

struct OracleRender {
  RenderOutput output;
  Mask ambiguous;  // pixels within kEdgeMargin of an edge or with a depth tie
};

// Every pixel against every triangle, long double edge functions.
OracleRender oracle_render(const FaceShape& shape, std::span<const Triangle> triangles,
                           std::span<const Color> colors, const Pose& pose, ImageSize size);

// Largest depth, at the vertex's projected position, over triangles that do
// not contain the vertex; -inf where no such triangle covers it.
std::vector<double> oracle_occluder_depth(const FaceShape& shape,
                                          std::span<const Triangle> triangles, const Pose& pose);

// Visible iff no triangle not containing the vertex lies strictly in front of it.
std::vector<std::uint8_t> oracle_vertex_visibility(const FaceShape& shape,
                                                   std::span<const Triangle> triangles,
                                                   const Pose& pose);

std::vector<double> oracle_vertex_depth(const FaceShape& shape, const Pose& pose);

Color oracle_bilinear(const Image& image, double x, double y);

// Pixels whose distance to the complement (including everything outside the
// image) exceeds `radius` survive; distances found by exhaustive search.
Mask oracle_erode(const Mask& mask, int radius);

}  // namespace facerr::oracle
