#include "facerr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

// Independent of rasterizer.cpp / texture.cpp / erosion.cpp: projection,
// coverage, depth and interpolation are all recomputed here from the raw
// pose, in long double, one pixel and one triangle at a time.

namespace facerr::oracle {
namespace {

using Real = long double;

struct P3 {
  Real x, y, z;
};

P3 to_screen(const Vec3& v, const Pose& pose, int height) {
  Real r[3];
  for (int i = 0; i < 3; ++i) {
    r[i] = 0;
    for (int k = 0; k < 3; ++k) r[i] += static_cast<Real>(pose.R(i, k)) * static_cast<Real>(v[k]);
  }
  const Real u = static_cast<Real>(pose.f) * r[0] + static_cast<Real>(pose.h2d.x());
  const Real w = static_cast<Real>(pose.f) * r[1] + static_cast<Real>(pose.h2d.y());
  return {u, static_cast<Real>(height - 1) - w, r[2]};
}

std::vector<P3> screen_vertices(const FaceShape& shape, const Pose& pose, int height) {
  std::vector<P3> out;
  out.reserve(shape.size());
  for (const auto& v : shape.vertices) out.push_back(to_screen(v, pose, height));
  return out;
}

// Signed doubled area of (a, b, p).
Real cross(const P3& a, const P3& b, Real px, Real py) {
  return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

struct Coverage {
  bool inside = false;
  bool near_edge = false;
  Real l[3] = {0, 0, 0};
};

// Point-in-triangle with the top-left convention, orientation-independent.
Coverage cover(const P3& a0, const P3& b0, const P3& c0, Real px, Real py, bool inclusive) {
  Coverage out;
  const P3* v[3] = {&a0, &b0, &c0};
  Real area = cross(a0, b0, c0.x, c0.y);
  int order[3] = {0, 1, 2};
  if (area < 0) {
    std::swap(order[1], order[2]);
    area = -area;
  }
  if (!(area > 0)) return out;
  const P3& a = *v[order[0]];
  const P3& b = *v[order[1]];
  const P3& c = *v[order[2]];
  const P3* edge_from[3] = {&b, &c, &a};
  const P3* edge_to[3] = {&c, &a, &b};
  Real e[3];
  bool inside = true;
  for (int i = 0; i < 3; ++i) {
    const P3& s = *edge_from[i];
    const P3& t = *edge_to[i];
    e[i] = cross(s, t, px, py);
    const Real len = std::sqrt((t.x - s.x) * (t.x - s.x) + (t.y - s.y) * (t.y - s.y));
    if (std::abs(e[i]) / len < static_cast<Real>(kEdgeMargin)) out.near_edge = true;
    bool ok;
    if (inclusive) {
      ok = e[i] >= 0;
    } else {
      const bool top = (t.y == s.y && t.x > s.x);
      const bool left = t.y < s.y;
      ok = e[i] > 0 || (e[i] == 0 && (top || left));
    }
    inside = inside && ok;
  }
  out.inside = inside;
  if (inside) {
    const Real sum = e[0] + e[1] + e[2];
    out.l[order[0]] = e[0] / sum;
    out.l[order[1]] = e[1] / sum;
    out.l[order[2]] = e[2] / sum;
  }
  return out;
}

}  // namespace

OracleRender oracle_render(const FaceShape& shape, std::span<const Triangle> triangles,
                           std::span<const Color> colors, const Pose& pose, ImageSize size) {
  const auto sv = screen_vertices(shape, pose, size.height);
  OracleRender out;
  auto& r = out.output;
  r.color = Image(size.width, size.height);
  r.coverage = Mask(size.width, size.height);
  r.depth.assign(static_cast<std::size_t>(size.width) * size.height, -std::numeric_limits<double>::infinity());
  r.tri_id.assign(r.depth.size(), kNoTriangle);
  out.ambiguous = Mask(size.width, size.height);

  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      Real best = -std::numeric_limits<Real>::infinity();
      Real runner_up = -std::numeric_limits<Real>::infinity();
      long best_t = -1;
      Real best_l[3] = {0, 0, 0};
      bool ambiguous = false;
      for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        // Outside the bounding box (plus margin) a triangle can neither cover
        // the pixel nor pass close to it.
        const Real m = static_cast<Real>(kEdgeMargin);
        if (x < std::min({sv[tri[0]].x, sv[tri[1]].x, sv[tri[2]].x}) - m ||
            x > std::max({sv[tri[0]].x, sv[tri[1]].x, sv[tri[2]].x}) + m ||
            y < std::min({sv[tri[0]].y, sv[tri[1]].y, sv[tri[2]].y}) - m ||
            y > std::max({sv[tri[0]].y, sv[tri[1]].y, sv[tri[2]].y}) + m) {
          continue;
        }
        const Coverage c = cover(sv[tri[0]], sv[tri[1]], sv[tri[2]], x, y, false);
        if (c.near_edge) ambiguous = true;
        if (!c.inside) continue;
        const Real d = c.l[0] * sv[tri[0]].z + c.l[1] * sv[tri[1]].z + c.l[2] * sv[tri[2]].z;
        if (d > best) {
          runner_up = best;
          best = d;
          best_t = static_cast<long>(t);
          std::copy(c.l, c.l + 3, best_l);
        } else {
          runner_up = std::max(runner_up, d);
        }
      }
      if (best_t >= 0 && best - runner_up < static_cast<Real>(kDepthMargin)) ambiguous = true;
      out.ambiguous.set(x, y, ambiguous);
      if (best_t < 0) continue;
      const auto& tri = triangles[static_cast<std::size_t>(best_t)];
      const auto idx = static_cast<std::size_t>(y) * size.width + x;
      r.depth[idx] = static_cast<double>(best);
      r.tri_id[idx] = static_cast<std::int32_t>(best_t);
      r.coverage.set(x, y, true);
      for (int k = 0; k < 3; ++k) {
        Real v = 0;
        for (int j = 0; j < 3; ++j) v += best_l[j] * static_cast<Real>(colors[tri[j]][k]);
        r.color.at(x, y, k) = static_cast<double>(v);
      }
    }
  }
  return out;
}

std::vector<double> oracle_vertex_depth(const FaceShape& shape, const Pose& pose) {
  std::vector<double> out;
  for (const auto& p : screen_vertices(shape, pose, 1)) out.push_back(static_cast<double>(p.z));
  return out;
}

std::vector<double> oracle_occluder_depth(const FaceShape& shape, std::span<const Triangle> triangles,
                                          const Pose& pose) {
  const auto sv = screen_vertices(shape, pose, 1);
  std::vector<double> out(sv.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < sv.size(); ++i) {
    Real best = -std::numeric_limits<Real>::infinity();
    for (const auto& tri : triangles) {
      if (tri[0] == i || tri[1] == i || tri[2] == i) continue;
      const Coverage c = cover(sv[tri[0]], sv[tri[1]], sv[tri[2]], sv[i].x, sv[i].y, true);
      if (!c.inside) continue;
      best = std::max(best, c.l[0] * sv[tri[0]].z + c.l[1] * sv[tri[1]].z + c.l[2] * sv[tri[2]].z);
    }
    out[i] = static_cast<double>(best);
  }
  return out;
}

std::vector<std::uint8_t> oracle_vertex_visibility(const FaceShape& shape,
                                                   std::span<const Triangle> triangles,
                                                   const Pose& pose) {
  const auto sv = screen_vertices(shape, pose, 1);
  const auto occluder = oracle_occluder_depth(shape, triangles, pose);
  std::vector<std::uint8_t> out(sv.size());
  for (std::size_t i = 0; i < sv.size(); ++i) {
    out[i] = static_cast<Real>(occluder[i]) > sv[i].z ? 0 : 1;
  }
  return out;
}

Color oracle_bilinear(const Image& image, double x, double y) {
  // Weighted sum over the four surrounding pixel centers, weights from the
  // tent function max(0, 1 - |dx|) * max(0, 1 - |dy|).
  Color out = Color::Zero();
  const int cx = static_cast<int>(std::floor(x));
  const int cy = static_cast<int>(std::floor(y));
  for (int py = cy; py <= cy + 1; ++py) {
    for (int px = cx; px <= cx + 1; ++px) {
      if (px < 0 || py < 0 || px >= image.width || py >= image.height) continue;
      const double w = std::max(0.0, 1.0 - std::abs(x - px)) * std::max(0.0, 1.0 - std::abs(y - py));
      if (w == 0.0) continue;
      for (int c = 0; c < 3; ++c) out[c] += w * image.at(px, py, c);
    }
  }
  return out;
}

Mask oracle_erode(const Mask& mask, int radius) {
  Mask out(mask.width, mask.height);
  const long r2 = static_cast<long>(radius) * radius;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      // Any background pixel (border ring included) within the disc kills
      // this one; scanning the bounding square is enough.
      long best = std::numeric_limits<long>::max();
      for (int qy = y - radius; qy <= y + radius; ++qy) {
        for (int qx = x - radius; qx <= x + radius; ++qx) {
          const bool outside = qx < 0 || qy < 0 || qx >= mask.width || qy >= mask.height;
          if (!outside && mask.at(qx, qy)) continue;
          const long dx = qx - x, dy = qy - y;
          best = std::min(best, dx * dx + dy * dy);
        }
      }
      out.set(x, y, best > r2);
    }
  }
  return out;
}

}  // namespace facerr::oracle
