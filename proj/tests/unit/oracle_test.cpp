#include <gtest/gtest.h>

#include <cmath>

#include "facerr/oracle.hpp"
#include "facerr/rasterizer.hpp"
#include "test_support.hpp"

namespace facerr::oracle {
namespace {

const Pose kFlat{1.0, Mat3::Identity(), Vec2(0.0, 0.0)};

TEST(OracleRender, SingleTriangleMatchesRasterizer) {
  FaceShape s{{Vec3(1.2, 2.5, 0.3), Vec3(13.7, 4.1, -0.2), Vec3(6.4, 12.9, 0.8)}};
  const std::vector<Triangle> tris{{0, 1, 2}};
  const std::vector<Color> colors{Color(1, 0, 0), Color(0, 1, 0), Color(0, 0, 1)};
  const OracleRender ref = oracle_render(s, tris, colors, kFlat, {16, 16});
  const RenderOutput out = render(s, tris, colors, kFlat, {16, 16});
  EXPECT_EQ(ref.ambiguous.count(), 0u);
  EXPECT_EQ(ref.output.tri_id, out.tri_id);
  EXPECT_LE(max_abs_difference(ref.output.color, out.color), 1e-12);
}

TEST(OracleRender, EmptyMeshIsBlack) {
  FaceShape s{{Vec3(0, 0, 0)}};
  const OracleRender ref = oracle_render(s, {}, std::vector<Color>(1), kFlat, {5, 5});
  EXPECT_EQ(ref.output.coverage.count(), 0u);
  for (double v : ref.output.color.data) EXPECT_EQ(v, 0.0);
}

TEST(OracleRender, FlagsPixelsOnSharedEdges) {
  // Diagonal through pixel centers: every pixel on it sits exactly on an edge.
  FaceShape s{{Vec3(2, 2, 0), Vec3(12, 2, 0), Vec3(12, 12, 0), Vec3(2, 12, 0)}};
  const std::vector<Triangle> tris{{0, 1, 2}, {0, 2, 3}};
  const OracleRender ref = oracle_render(s, tris, std::vector<Color>(4), kFlat, {16, 16});
  EXPECT_TRUE(ref.ambiguous.at(7, 8));
  EXPECT_FALSE(ref.ambiguous.at(5, 8));
}

TEST(OracleVisibility, ConvexFrontHemisphereVisible) {
  const Icosphere ico = make_icosphere(2);
  FaceShape s{ico.vertices};
  const Pose p{10.0, Mat3::Identity(), Vec2(20, 20)};
  const auto vis = oracle_vertex_visibility(s, ico.triangles, p);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.vertices[i].z() > 1e-9) {
      EXPECT_TRUE(vis[i]);
    } else if (s.vertices[i].z() < -1e-9) {
      EXPECT_FALSE(vis[i]);
    }
  }
}

TEST(OracleVisibility, VertexBehindQuadIsHidden) {
  FaceShape s{{Vec3(-5, -5, 1), Vec3(5, -5, 1), Vec3(5, 5, 1), Vec3(-5, 5, 1), Vec3(0.3, 0.1, 0.5)}};
  const std::vector<Triangle> tris{{0, 1, 2}, {0, 2, 3}};
  EXPECT_EQ(oracle_vertex_visibility(s, tris, kFlat)[4], 0);
  EXPECT_DOUBLE_EQ(oracle_occluder_depth(s, tris, kFlat)[4], 1.0);
}

TEST(OracleBilinear, IntegerAndMidpoint) {
  Image img(3, 2);
  img.set_pixel(0, 0, Color(0.0, 0.2, 0.4));
  img.set_pixel(1, 0, Color(1.0, 0.6, 0.0));
  EXPECT_EQ(oracle_bilinear(img, 1, 0), Color(1.0, 0.6, 0.0));
  const Color mid = oracle_bilinear(img, 0.5, 0);
  EXPECT_NEAR(mid[0], 0.5, 1e-15);
  EXPECT_NEAR(mid[1], 0.4, 1e-15);
  EXPECT_NEAR(mid[2], 0.2, 1e-15);
}

TEST(OracleErode, FullMaskDistanceToBorder) {
  const Mask full(11, 9, true);
  const Mask e = oracle_erode(full, 2);
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 11; ++x) EXPECT_EQ(e.at(x, y), x >= 2 && y >= 2 && x <= 8 && y <= 6);
}

}  // namespace
}  // namespace facerr::oracle
