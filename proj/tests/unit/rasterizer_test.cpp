#include <gtest/gtest.h>

#include <cmath>

#include "facerr/error.hpp"
#include "facerr/oracle.hpp"
#include "facerr/rasterizer.hpp"
#include "facerr/synthetic.hpp"
#include "test_support.hpp"

namespace facerr {
namespace {

using testing::Rng;

const Pose kFlat{1.0, Mat3::Identity(), Vec2(0.0, 0.0)};

// Raw y for image row `row` in an image of height h.
double raw_y(double row, int h) { return (h - 1) - row; }

TEST(Rasterizer, EmptyMeshRendersBackground) {
  FaceShape s{{Vec3(1, 1, 0)}};
  const std::vector<Color> colors{Color(1, 1, 1)};
  const RenderOutput out = render(s, {}, colors, kFlat, {10, 6});
  EXPECT_EQ(out.coverage.count(), 0u);
  for (double v : out.color.data) EXPECT_EQ(v, 0.0);
  for (auto t : out.tri_id) EXPECT_EQ(t, kNoTriangle);
  for (double d : out.depth) EXPECT_EQ(d, -INFINITY);
}

TEST(Rasterizer, RightTriangleCoversExactlyTheHalfPlanePixels) {
  const int w = 16, h = 16;
  // Legs along image x and y from (2, 2) to (12, 2) and (2, 12), in image coordinates.
  FaceShape s{{Vec3(2.3, raw_y(2.3, h), 0.5), Vec3(12.3, raw_y(2.3, h), 0.5), Vec3(2.3, raw_y(12.3, h), 0.5)}};
  const std::vector<Triangle> tris{{0, 1, 2}};
  const Color c(0.2, 0.4, 0.6);
  const std::vector<Color> colors(3, c);
  const RenderOutput out = render(s, tris, colors, kFlat, {w, h});
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool inside = x >= 2.3 && y >= 2.3 && (x - 2.3) + (y - 2.3) <= 10.0;
      ASSERT_EQ(out.coverage.at(x, y), inside) << x << "," << y;
      EXPECT_EQ(out.color.pixel(x, y), inside ? c : Color::Zero().eval());
    }
  }
}

TEST(Rasterizer, DepthTestKeepsTheNearerOfStackedTriangles) {
  for (bool near_first : {false, true}) {
    const double z0 = near_first ? 0.9 : 0.1, z1 = near_first ? 0.1 : 0.9;
    FaceShape s{{Vec3(1, 1, z0), Vec3(14, 1, z0), Vec3(1, 14, z0), Vec3(1, 1, z1), Vec3(14, 1, z1),
                 Vec3(1, 14, z1)}};
    const std::vector<Triangle> tris{{0, 1, 2}, {3, 4, 5}};
    std::vector<Color> colors{Color(1, 0, 0), Color(1, 0, 0), Color(1, 0, 0),
                              Color(0, 0, 1), Color(0, 0, 1), Color(0, 0, 1)};
    const RenderOutput out = render(s, tris, colors, kFlat, {16, 16});
    const int winner = near_first ? 0 : 1;
    ASSERT_GT(out.coverage.count(), 0u);
    for (std::size_t i = 0; i < out.tri_id.size(); ++i) {
      if (out.tri_id[i] == kNoTriangle) continue;
      EXPECT_EQ(out.tri_id[i], winner);
      EXPECT_NEAR(out.depth[i], 0.9, 1e-12);
    }
  }
}

TEST(Rasterizer, EqualDepthTieGoesToLowerIndex) {
  FaceShape s{{Vec3(1, 1, 0.5), Vec3(14, 1, 0.5), Vec3(1, 14, 0.5)}};
  const std::vector<Triangle> tris{{0, 1, 2}, {0, 2, 1}};
  const RenderOutput out = render(s, tris, std::vector<Color>(3, Color(1, 1, 1)), kFlat, {16, 16});
  for (auto t : out.tri_id) EXPECT_NE(t, 1);
}

TEST(Rasterizer, SharedEdgeIsWatertight) {
  // Square split along a diagonal that passes through pixel centers.
  FaceShape s{{Vec3(2, 2, 0), Vec3(12, 2, 0), Vec3(12, 12, 0), Vec3(2, 12, 0)}};
  const std::vector<Triangle> both{{0, 1, 2}, {0, 2, 3}};
  const std::vector<Color> colors(4, Color(1, 1, 1));
  const DepthOutput a = render_depth_only(s, std::vector<Triangle>{both[0]}, kFlat, {16, 16});
  const DepthOutput b = render_depth_only(s, std::vector<Triangle>{both[1]}, kFlat, {16, 16});
  const DepthOutput ab = render_depth_only(s, both, kFlat, {16, 16});
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      EXPECT_FALSE(a.covered(x, y) && b.covered(x, y)) << x << "," << y;
      EXPECT_EQ(ab.covered(x, y), a.covered(x, y) || b.covered(x, y));
    }
  }
}

TEST(Rasterizer, DepthOnlyMatchesFullRenderBitExact) {
  Rng rng(5);
  const FittedFace face = synthetic_face(5, 3, {96, 96}, testing::random_angles(rng));
  const auto colors = testing::random_colors(face.shape.size(), rng);
  const RenderOutput full = render(face.shape, face.triangles, colors, face.pose_a, {96, 96});
  const DepthOutput depth = render_depth_only(face.shape, face.triangles, face.pose_a, {96, 96});
  EXPECT_EQ(full.depth, depth.depth);
  EXPECT_EQ(full.tri_id, depth.tri_id);
}

TEST(Rasterizer, DepthIsLinearOverATriangle) {
  // Centroid at pixel (6, 6): its depth equals the mean of the edge-midpoint depths.
  const int h = 16;
  FaceShape s{{Vec3(2, raw_y(3, h), 0.1), Vec3(11, raw_y(4, h), 0.7), Vec3(5, raw_y(11, h), -0.4)}};
  const std::vector<Triangle> tris{{0, 1, 2}};
  const DepthOutput d = render_depth_only(s, tris, kFlat, {16, h});
  ASSERT_TRUE(d.covered(6, 6));
  const double z0 = 0.1, z1 = 0.7, z2 = -0.4;
  const double mid_mean = ((z0 + z1) / 2 + (z1 + z2) / 2 + (z2 + z0) / 2) / 3;
  EXPECT_NEAR(d.depth[d.index(6, 6)], mid_mean, 1e-6);
}

TEST(Rasterizer, InvariantsOnRandomSoups) {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto soup = testing::random_soup(150, rng);
    const auto colors = testing::random_colors(soup.shape.size(), rng);
    const Pose p{24.0, euler_to_matrix(testing::random_angles(rng, 180, 90, 180)), Vec2(31.5, 31.5)};
    const RenderOutput out = render(soup.shape, soup.triangles, colors, p, {64, 64});
    const ScreenMesh mesh(soup.shape, soup.triangles, p, {64, 64});
    for (int y = 0; y < 64; ++y) {
      for (int x = 0; x < 64; ++x) {
        const auto idx = static_cast<std::size_t>(y) * 64 + x;
        const std::int32_t t = out.tri_id[idx];
        ASSERT_EQ(out.coverage.at(x, y), t != kNoTriangle);
        if (t == kNoTriangle) {
          EXPECT_EQ(out.color.pixel(x, y), Color::Zero().eval());
          continue;
        }
        ASSERT_TRUE(std::isfinite(out.depth[idx]));
        const Triangle& tri = soup.triangles[static_cast<std::size_t>(t)];
        for (int c = 0; c < 3; ++c) {
          const double lo = std::min({colors[tri[0]][c], colors[tri[1]][c], colors[tri[2]][c]});
          const double hi = std::max({colors[tri[0]][c], colors[tri[1]][c], colors[tri[2]][c]});
          EXPECT_GE(out.color.at(x, y, c), lo);
          EXPECT_LE(out.color.at(x, y, c), hi);
        }
        // The depth at the pixel is the plane of its triangle there.
        const auto sv = mesh.vertices();
        const auto& a = sv[tri[0]];
        const auto& b = sv[tri[1]];
        const auto& c = sv[tri[2]];
        const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        const double l1 = ((x - a.x) * (c.y - a.y) - (c.x - a.x) * (y - a.y)) / det;
        const double l2 = ((b.x - a.x) * (y - a.y) - (x - a.x) * (b.y - a.y)) / det;
        EXPECT_NEAR(out.depth[idx], (1 - l1 - l2) * a.depth + l1 * b.depth + l2 * c.depth, 1e-9);
      }
    }
  }
}

TEST(Rasterizer, DeterministicAcrossRuns) {
  Rng rng(9);
  const auto soup = testing::random_soup(300, rng);
  const auto colors = testing::random_colors(soup.shape.size(), rng);
  const Pose p{30.0, euler_to_matrix(testing::random_angles(rng)), Vec2(40, 40)};
  const RenderOutput a = render(soup.shape, soup.triangles, colors, p, {80, 80});
  const RenderOutput b = render(soup.shape, soup.triangles, colors, p, {80, 80});
  EXPECT_EQ(a.color, b.color);
  EXPECT_EQ(a.depth, b.depth);
  EXPECT_EQ(a.tri_id, b.tri_id);
}

TEST(Rasterizer, RejectsBadArguments) {
  FaceShape s{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}};
  const std::vector<Triangle> tris{{0, 1, 2}};
  EXPECT_THROW(render(s, tris, std::vector<Color>(2), kFlat, {4, 4}), Error);
  EXPECT_THROW(render(s, tris, std::vector<Color>(3), kFlat, {0, 4}), Error);
}

TEST(Rasterizer, FrontSurfaceQueryAgreesWithRaster) {
  Rng rng(10);
  const FittedFace face = synthetic_face(10, 3, {64, 64}, testing::random_angles(rng));
  const ScreenMesh mesh(face.shape, face.triangles, face.pose_a, {64, 64});
  const DepthOutput d = mesh.rasterize_depth();
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      const auto hit = mesh.front_surface_at(x, y);
      if (!d.covered(x, y)) continue;
      ASSERT_TRUE(hit.has_value());
      EXPECT_NEAR(hit->depth, d.depth[d.index(x, y)], 1e-9);
    }
  }
}

class OracleEquivalence : public ::testing::TestWithParam<int> {};

TEST_P(OracleEquivalence, MatchesBruteForce) {
  Rng rng(100 + GetParam());
  FaceShape shape;
  std::vector<Triangle> tris;
  if (GetParam() % 2 == 0) {
    const FittedFace face = synthetic_face(GetParam(), 2, {64, 64});
    shape = face.shape;
    tris = face.triangles;
  } else {
    auto soup = testing::random_soup(500, rng);
    shape = soup.shape;
    tris = soup.triangles;
  }
  const auto colors = testing::random_colors(shape.size(), rng);
  const Pose p = synthetic_framing({64, 64}, testing::random_angles(rng, 180, 90, 180));
  const RenderOutput out = render(shape, tris, colors, p, {64, 64});
  const oracle::OracleRender ref = oracle::oracle_render(shape, tris, colors, p, {64, 64});
  std::size_t ambiguous = 0;
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      if (ref.ambiguous.at(x, y)) {
        ++ambiguous;
        continue;
      }
      const auto idx = static_cast<std::size_t>(y) * 64 + x;
      ASSERT_EQ(out.tri_id[idx], ref.output.tri_id[idx]) << x << "," << y;
      ASSERT_EQ(out.coverage.at(x, y), ref.output.coverage.at(x, y));
      if (out.tri_id[idx] == kNoTriangle) continue;
      EXPECT_NEAR(out.depth[idx], ref.output.depth[idx], 1e-9);
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(out.color.at(x, y, c), ref.output.color.at(x, y, c), 1e-9);
    }
  }
  EXPECT_LE(ambiguous, out.coverage.count() / 1000 + 1);
}

INSTANTIATE_TEST_SUITE_P(Meshes, OracleEquivalence, ::testing::Range(1, 7));

}  // namespace
}  // namespace facerr
