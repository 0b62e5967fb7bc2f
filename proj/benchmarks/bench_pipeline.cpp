#include <benchmark/benchmark.h>

#include "facerr/erosion.hpp"
#include "facerr/pipeline.hpp"
#include "facerr/rasterizer.hpp"
#include "facerr/synthetic.hpp"
#include "facerr/texture.hpp"

namespace {

using namespace facerr;

FittedFace face_for(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  return synthetic_face(1, 4, {side, side});
}

void BM_ScreenMesh(benchmark::State& state) {
  const FittedFace face = face_for(state);
  const ImageSize size{face.source_image.width, face.source_image.height};
  for (auto _ : state) {
    ScreenMesh mesh(face.shape, face.triangles, face.pose_a, size);
    benchmark::DoNotOptimize(mesh.triangles().data());
  }
}

void BM_Render(benchmark::State& state) {
  const FittedFace face = face_for(state);
  const ImageSize size{face.source_image.width, face.source_image.height};
  const VertexTextures tex = acquire_textures(face.source_image, face.shape, face.pose_a);
  const ScreenMesh mesh(face.shape, face.triangles, face.pose_a, size);
  for (auto _ : state) {
    RenderOutput out = render(mesh, tex.colors);
    benchmark::DoNotOptimize(out.color.data.data());
  }
}

void BM_ErodeDisc(benchmark::State& state) {
  const FittedFace face = face_for(state);
  const ImageSize size{face.source_image.width, face.source_image.height};
  const VertexTextures tex = acquire_textures(face.source_image, face.shape, face.pose_a);
  const RenderOutput out = render(face.shape, face.triangles, tex.colors, face.pose_a, size);
  const int radius = default_erosion_radius(size);
  for (auto _ : state) {
    Mask m = erode_disc(out.coverage, radius);
    benchmark::DoNotOptimize(m.data.data());
  }
}

void BM_PrerenderAndErode(benchmark::State& state) {
  const FittedFace face = face_for(state);
  const int radius = default_erosion_radius({face.source_image.width, face.source_image.height});
  for (auto _ : state) {
    Prerender pre = prerender_and_erode(face, radius);
    benchmark::DoNotOptimize(pre.textures.colors.data());
  }
}

void BM_RotateAndRenderPair(benchmark::State& state) {
  const FittedFace face = face_for(state);
  const int radius = default_erosion_radius({face.source_image.width, face.source_image.height});
  PoseSampler sampler;
  sampler.seed = 3;
  std::uint64_t stream = 0;
  for (auto _ : state) {
    TrainingPair pair = rotate_and_render_pair(face, sampler, stream++, radius);
    benchmark::DoNotOptimize(pair.input_render.data.data());
  }
}

}  // namespace

BENCHMARK(BM_ScreenMesh)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Render)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ErodeDisc)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrerenderAndErode)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RotateAndRenderPair)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
