#include "facerr/pipeline.hpp"

#include <cmath>
#include <random>
#include <string>

#include "facerr/erosion.hpp"
#include "facerr/error.hpp"

namespace facerr {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxStabilizationPasses = 64;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform(std::mt19937_64& rng, const AngleRange& range) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return range.lo + (range.hi - range.lo) * u;
}

ImageSize size_of(const Image& image) { return {image.width, image.height}; }

Prerender prerender_impl(const FittedFace& face, const ScreenMesh& view_a, int radius) {
  if (radius < 0) throw Error(ErrorKind::kInvalidArgument, "erosion radius must be >= 0");
  Prerender pre;
  pre.raw = acquire_textures(face.source_image, face.shape, face.pose_a);
  pre.render = render(view_a, pre.raw.colors);
  pre.fill_color = mean_valid_color(pre.raw);
  if (pre.render.coverage.count() == 0) {
    throw Error(ErrorKind::kEmptySilhouette, "the face does not cover any pixel at pose a");
  }
  pre.eroded_coverage = radius == 0 ? pre.render.coverage : erode_disc(pre.render.coverage, radius);
  if (pre.eroded_coverage.count() == 0) {
    throw Error(ErrorKind::kEmptySilhouette,
                "erosion radius " + std::to_string(radius) + " removes the whole silhouette");
  }

  pre.eroded_image = pre.render.color;
  const ImageSize size = view_a.size();
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      if (pre.render.coverage.at(x, y) && !pre.eroded_coverage.at(x, y)) {
        pre.eroded_image.set_pixel(x, y, pre.fill_color);
      }
    }
  }

  // Acquire from the eroded render: the surviving interior is the render
  // itself, everything else reads as the fill color.
  const auto verts = view_a.vertices();
  VertexTextures& tex = pre.textures;
  tex.colors.resize(verts.size());
  tex.valid = pre.raw.valid;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const auto& v = verts[i];
    if (!pre.raw.valid[i]) {
      tex.colors[i] = kOutOfBoundsFill;
      continue;
    }
    if (radius > 0) {
      const int px = static_cast<int>(std::lround(v.x));
      const int py = static_cast<int>(std::lround(v.y));
      if (!pre.eroded_coverage.at(px, py)) {
        tex.colors[i] = pre.fill_color;
        continue;
      }
    }
    const auto hit = view_a.front_surface_at(v.x, v.y);
    tex.colors[i] = hit ? view_a.shade(*hit, pre.raw.colors) : Color::Zero().eval();
  }

  // Vertices hidden at pose a copy whatever surface covers them, and that
  // surface may itself have just been renewed. Re-acquire from the render of
  // the renewed textures until nothing changes, so that rendering these
  // textures at pose a and sampling them back is an exact round trip.
  for (pre.stabilization_passes = 0; pre.stabilization_passes < kMaxStabilizationPasses;
       ++pre.stabilization_passes) {
    VertexTextures next = acquire_textures_from_render(view_a, tex.colors);
    if (next.colors == tex.colors) break;
    tex.colors = std::move(next.colors);
  }
  return pre;
}

}  // namespace

void validate_face(const FittedFace& face) {
  validate_pose(face.pose_a);
  if (face.source_image.empty()) throw Error(ErrorKind::kInvalidArgument, "source image is empty");
  for (const auto& t : face.triangles) {
    for (auto i : t) {
      if (i >= face.shape.size()) {
        throw Error(ErrorKind::kInvalidArgument, "triangle references missing vertex " + std::to_string(i));
      }
    }
  }
}

PoseSampler PoseSampler::fixed(const EulerAngles& e) {
  PoseSampler s;
  s.yaw = {e.yaw, e.yaw};
  s.pitch = {e.pitch, e.pitch};
  s.roll = {e.roll, e.roll};
  return s;
}

EulerAngles PoseSampler::draw_angles(std::uint64_t stream) const {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(stream)));
  EulerAngles e;
  e.yaw = uniform(rng, yaw);
  e.pitch = uniform(rng, pitch);
  e.roll = uniform(rng, roll);
  return e;
}

void validate_sampler(const PoseSampler& sampler) {
  for (const auto* r : {&sampler.yaw, &sampler.pitch, &sampler.roll}) {
    if (!(r->lo <= r->hi) || !(r->lo > -kPi) || !(r->hi <= kPi)) {
      throw Error(ErrorKind::kInvalidArgument, "sampler ranges must satisfy -pi < lo <= hi <= pi");
    }
  }
}

int default_erosion_radius(ImageSize size) {
  const int side = std::min(size.width, size.height);
  return static_cast<int>(std::lround(5.0 * side / 256.0));
}

Color mean_valid_color(const VertexTextures& textures) {
  Color sum = Color::Zero();
  std::size_t n = 0;
  for (std::size_t i = 0; i < textures.size(); ++i) {
    if (!textures.valid[i]) continue;
    sum += textures.colors[i];
    ++n;
  }
  return n == 0 ? kOutOfBoundsFill : Color(sum / static_cast<double>(n));
}

Prerender prerender_and_erode(const FittedFace& face, int radius) {
  validate_face(face);
  const ScreenMesh view_a(face.shape, face.triangles, face.pose_a, size_of(face.source_image));
  return prerender_impl(face, view_a, radius);
}

VertexTextures erode_prerender(const FittedFace& face, int radius) {
  return prerender_and_erode(face, radius).textures;
}

Mask artifact_mask(std::span<const std::int32_t> pose_a_tri_id, ImageSize size,
                   std::span<const Triangle> triangles, std::span<const std::uint8_t> visible_a,
                   std::span<const std::uint8_t> visible_b, bool same_view) {
  if (pose_a_tri_id.size() != static_cast<std::size_t>(size.width) * size.height) {
    throw Error(ErrorKind::kDimensionMismatch, "triangle-id map does not match the image size");
  }
  if (visible_a.size() != visible_b.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "visibility maps differ in length");
  }
  std::vector<std::uint8_t> at_risk(visible_b.size());
  for (std::size_t i = 0; i < at_risk.size(); ++i) {
    at_risk[i] = !visible_b[i] && (visible_a[i] || !same_view);
  }
  Mask mask(size.width, size.height);
  for (std::size_t p = 0; p < pose_a_tri_id.size(); ++p) {
    const auto t = pose_a_tri_id[p];
    if (t == kNoTriangle) continue;
    const auto& tri = triangles[static_cast<std::size_t>(t)];
    if (at_risk[tri[0]] || at_risk[tri[1]] || at_risk[tri[2]]) mask.data[p] = 1;
  }
  return mask;
}

TrainingPair rotate_and_render_pair(const FittedFace& face, const Mat3& r_random, int erosion_radius) {
  validate_face(face);
  const ImageSize size = size_of(face.source_image);
  const ScreenMesh view_a(face.shape, face.triangles, face.pose_a, size);
  const Prerender pre = prerender_impl(face, view_a, erosion_radius);
  const VertexTextures& tex_a = pre.textures;

  TrainingPair pair;
  pair.target = face.source_image;
  pair.pose_b = compose_pose(face.pose_a, r_random);
  validate_pose(pair.pose_b);

  const RenderOutput prerender = render(view_a, tex_a.colors);
  const ScreenMesh view_b(face.shape, face.triangles, pair.pose_b, size);
  pair.aux_render = render(view_b, tex_a.colors).color;
  const VertexTextures tex_b = acquire_textures_from_render(view_b, tex_a.colors);
  pair.input_render = render(view_a, tex_b.colors).color;

  pair.visible_a = resolve_visibility(view_a).visible;
  pair.visible_b = resolve_visibility(view_b).visible;
  const bool same_view = pair.pose_b == face.pose_a;
  pair.artifact_mask =
      artifact_mask(prerender.tri_id, size, face.triangles, pair.visible_a, pair.visible_b, same_view);
  pair.eroded_prerender = prerender.color;
  return pair;
}

TrainingPair rotate_and_render_pair(const FittedFace& face, const PoseSampler& sampler,
                                    std::uint64_t stream, int erosion_radius) {
  validate_sampler(sampler);
  return rotate_and_render_pair(face, sampler.draw(stream), erosion_radius);
}

RenderOutput rotate_to_target_render(const FittedFace& face, const Pose& target, int erosion_radius) {
  validate_face(face);
  validate_pose(target);
  const ImageSize size = size_of(face.source_image);
  const ScreenMesh view_a(face.shape, face.triangles, face.pose_a, size);
  const Prerender pre = prerender_impl(face, view_a, erosion_radius);
  return render(ScreenMesh(face.shape, face.triangles, target, size), pre.textures.colors);
}

Image rotate_to_target(const FittedFace& face, const Pose& target, int erosion_radius) {
  return rotate_to_target_render(face, target, erosion_radius).color;
}

}  // namespace facerr
