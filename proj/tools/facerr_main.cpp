#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "facerr/batch.hpp"
#include "facerr/documents.hpp"
#include "facerr/error.hpp"
#include "facerr/erosion.hpp"
#include "facerr/pipeline.hpp"
#include "facerr/png_io.hpp"
#include "facerr/synthetic.hpp"

namespace fs = std::filesystem;
using namespace facerr;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

void print_error(std::string_view kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
}

// Image size given as "N" or "WxH".
ImageSize parse_size(const std::string& text) {
  int w = 0, h = 0;
  char sep = 0;
  if (std::sscanf(text.c_str(), "%d%c%d", &w, &sep, &h) == 3 && (sep == 'x' || sep == 'X')) return {w, h};
  if (std::sscanf(text.c_str(), "%d", &w) == 1 && text.find_first_not_of("0123456789") == std::string::npos) {
    return {w, w};
  }
  throw CLI::ValidationError("--size", "expected N or WxH, got '" + text + "'");
}

struct SynthArgs {
  std::uint64_t seed = 0;
  int subdiv = 4;
  std::string size = "256";
  int count = 1;
  double coeff_scale = 1.0;
  fs::path out;
};

int run_synth(const SynthArgs& a) {
  const ImageSize size = parse_size(a.size);
  fs::create_directories(a.out);
  const SyntheticAsset asset = generate_synthetic_model(a.seed, a.subdiv, size);
  save_model(asset.model, a.out / "model.bin");
  write_image(a.out / "reference.png", asset.texture);

  std::string manifest;
  for (int i = 0; i < a.count; ++i) {
    const auto coeffs = random_coefficients(asset.model, a.seed + static_cast<std::uint64_t>(i), a.coeff_scale);
    FaceDocument doc{"model.bin", coeffs.alpha_id, coeffs.alpha_exp, synthetic_framing(size)};
    const std::string name = "face_" + entry_id(static_cast<std::size_t>(i)) + ".txt";
    write_face_document(a.out / name, doc);
    manifest += "reference.png " + name + "\n";
  }
  write_text_file(a.out / "manifest.txt", manifest);

  nlohmann::ordered_json j;
  j["model"] = (a.out / "model.bin").string();
  j["vertices"] = asset.model.n_vertices();
  j["triangles"] = asset.model.triangles().size();
  j["faces"] = a.count;
  j["manifest"] = (a.out / "manifest.txt").string();
  std::cout << j.dump() << '\n';
  return 0;
}

struct ViewArgs {
  fs::path image;
  fs::path face;
  double yaw = 0.0, pitch = 0.0, roll = 0.0;
  bool absolute = false;
  std::optional<int> radius;
};

Pose target_pose(const ViewArgs& a, const Pose& pose_a) {
  const Mat3 r = euler_to_matrix({deg_to_rad(a.yaw), deg_to_rad(a.pitch), deg_to_rad(a.roll)});
  if (!a.absolute) return compose_pose(pose_a, r);
  Pose p = pose_a;
  p.R = r;
  return p;
}

int run_rotate(const ViewArgs& a, const fs::path& out) {
  const FittedFace face = load_fitted_face({a.image, a.face});
  const int radius = a.radius.value_or(default_erosion_radius({face.source_image.width, face.source_image.height}));
  write_image(out, rotate_to_target(face, target_pose(a, face.pose_a), radius));
  return 0;
}

int run_inspect(const ViewArgs& a) {
  const FittedFace face = load_fitted_face({a.image, a.face});
  validate_face(face);
  const ImageSize size{face.source_image.width, face.source_image.height};
  const int radius = a.radius.value_or(default_erosion_radius(size));
  const Pose pose = target_pose(a, face.pose_a);
  const ScreenMesh view(face.shape, face.triangles, pose, size);
  const VisibilityMap vis = resolve_visibility(view);
  const DepthOutput depth = view.rasterize_depth();
  std::size_t covered = 0;
  for (auto t : depth.tri_id) covered += t != kNoTriangle;

  nlohmann::ordered_json j;
  j["width"] = size.width;
  j["height"] = size.height;
  j["vertices"] = face.shape.size();
  j["triangles"] = face.triangles.size();
  j["visible_vertices"] = vis.visible_count();
  j["visibility_epsilon"] = vis.epsilon;
  j["covered_pixels"] = covered;
  j["erosion_radius"] = radius;
  Mask coverage(size.width, size.height);
  for (int y = 0; y < size.height; ++y)
    for (int x = 0; x < size.width; ++x) coverage.set(x, y, depth.covered(x, y));
  j["eroded_pixels"] = erode_disc(coverage, radius).count();
  std::cout << j.dump() << '\n';
  return 0;
}

struct PairArgs {
  fs::path manifest;
  fs::path out;
  std::uint64_t seed = 0;
  double yaw_min = -90, yaw_max = 90, pitch_min = -20, pitch_max = 20, roll_min = 0, roll_max = 0;
  std::optional<int> radius;
  int threads = 1;
  fs::path report;
};

int run_make_pairs(const PairArgs& a) {
  BatchOptions opt;
  opt.sampler.seed = a.seed;
  opt.sampler.yaw = {deg_to_rad(a.yaw_min), deg_to_rad(a.yaw_max)};
  opt.sampler.pitch = {deg_to_rad(a.pitch_min), deg_to_rad(a.pitch_max)};
  opt.sampler.roll = {deg_to_rad(a.roll_min), deg_to_rad(a.roll_max)};
  validate_sampler(opt.sampler);
  opt.erosion_radius = a.radius;
  opt.output_dir = a.out;
  opt.parallelism = parallelism_from_env(a.threads);

  const BatchReport report = batch_generate(read_manifest(a.manifest), opt);
  const std::string json = report.to_json();
  if (a.report.empty()) {
    std::cout << json << '\n';
  } else {
    write_text_file(a.report, json + "\n");
  }
  if (report.succeeded < report.total) {
    print_error("batch", std::to_string(report.total - report.succeeded) + " of " +
                             std::to_string(report.total) + " entries failed");
    return kExitRuntime;
  }
  return 0;
}

struct BenchArgs {
  std::string size = "512";
  int iters = 50;
  int subdiv = 4;
  std::uint64_t seed = 0;
};

int run_bench(const BenchArgs& a) {
  const ImageSize size = parse_size(a.size);
  const FittedFace face = synthetic_face(a.seed, a.subdiv, size);
  const int radius = default_erosion_radius(size);
  PoseSampler sampler;
  sampler.seed = a.seed;

  using clock = std::chrono::steady_clock;
  double total = 0.0, best = 1e300, worst = 0.0;
  std::size_t checksum = 0;
  for (int i = 0; i < a.iters; ++i) {
    const auto t0 = clock::now();
    const TrainingPair pair = rotate_and_render_pair(face, sampler, static_cast<std::uint64_t>(i), radius);
    const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    checksum += pair.artifact_mask.count();
    total += ms;
    best = std::min(best, ms);
    worst = std::max(worst, ms);
  }
  nlohmann::ordered_json j;
  j["width"] = size.width;
  j["height"] = size.height;
  j["vertices"] = face.shape.size();
  j["triangles"] = face.triangles.size();
  j["iterations"] = a.iters;
  j["threads"] = 1;
  j["mean_ms_per_pair"] = total / a.iters;
  j["min_ms"] = best;
  j["max_ms"] = worst;
  j["mask_pixels_total"] = checksum;
  std::cout << j.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"facerr: rotate-and-render geometry engine"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth-model", "Write a synthetic model, reference image and face documents");
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");
  synth_cmd->add_option("--subdiv", synth.subdiv, "Icosphere subdivisions")->check(CLI::Range(0, 7));
  synth_cmd->add_option("--size", synth.size, "Reference image size, N or WxH");
  synth_cmd->add_option("--count", synth.count, "Number of face documents (one manifest line each)")
      ->check(CLI::Range(1, 1000000));
  synth_cmd->add_option("--coeff-scale", synth.coeff_scale, "Coefficient range [-s, s]")->check(CLI::Range(0.0, 10.0));
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();

  ViewArgs view;
  fs::path rotate_out;
  auto add_view_options = [&](CLI::App* cmd) {
    cmd->add_option("--image", view.image, "Source image (PNG)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--face", view.face, "Face document")->required()->check(CLI::ExistingFile);
    cmd->add_option("--yaw", view.yaw, "Yaw in degrees");
    cmd->add_option("--pitch", view.pitch, "Pitch in degrees");
    cmd->add_option("--roll", view.roll, "Roll in degrees");
    cmd->add_flag("--absolute", view.absolute, "Angles replace the fitted rotation instead of composing with it");
    cmd->add_option("--radius", view.radius, "Erosion radius in pixels")->check(CLI::NonNegativeNumber);
  };
  auto* rotate_cmd = app.add_subcommand("rotate", "Render the face at a new pose with renewed textures");
  add_view_options(rotate_cmd);
  rotate_cmd->add_option("--out", rotate_out, "Output PNG")->required();

  auto* inspect_cmd = app.add_subcommand("inspect", "Print visibility and coverage statistics as JSON");
  add_view_options(inspect_cmd);

  PairArgs pairs;
  auto* pairs_cmd = app.add_subcommand("make-pairs", "Generate training pairs from a manifest");
  pairs_cmd->add_option("--manifest", pairs.manifest, "Manifest file")->required()->check(CLI::ExistingFile);
  pairs_cmd->add_option("--out", pairs.out, "Output directory")->required();
  pairs_cmd->add_option("--seed", pairs.seed, "Rotation sampler seed");
  pairs_cmd->add_option("--yaw-min", pairs.yaw_min, "Degrees")->check(CLI::Range(-180.0, 180.0));
  pairs_cmd->add_option("--yaw-max", pairs.yaw_max, "Degrees")->check(CLI::Range(-180.0, 180.0));
  pairs_cmd->add_option("--pitch-min", pairs.pitch_min, "Degrees")->check(CLI::Range(-90.0, 90.0));
  pairs_cmd->add_option("--pitch-max", pairs.pitch_max, "Degrees")->check(CLI::Range(-90.0, 90.0));
  pairs_cmd->add_option("--roll-min", pairs.roll_min, "Degrees")->check(CLI::Range(-180.0, 180.0));
  pairs_cmd->add_option("--roll-max", pairs.roll_max, "Degrees")->check(CLI::Range(-180.0, 180.0));
  pairs_cmd->add_option("--radius", pairs.radius, "Erosion radius in pixels")->check(CLI::NonNegativeNumber);
  pairs_cmd->add_option("--threads", pairs.threads, "Worker threads (FACERR_THREADS overrides)")
      ->check(CLI::Range(1, 1024));
  pairs_cmd->add_option("--report", pairs.report, "Write the JSON report here instead of stdout");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time single-threaded pair generation on a synthetic face");
  bench_cmd->add_option("--size", bench.size, "Image size, N or WxH");
  bench_cmd->add_option("--iters", bench.iters, "Pairs to time")->check(CLI::Range(1, 1000000));
  bench_cmd->add_option("--subdiv", bench.subdiv, "Icosphere subdivisions")->check(CLI::Range(0, 7));
  bench_cmd->add_option("--seed", bench.seed, "Face and sampler seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return kExitUsage;
  }

  try {
    if (*synth_cmd) return run_synth(synth);
    if (*rotate_cmd) return run_rotate(view, rotate_out);
    if (*inspect_cmd) return run_inspect(view);
    if (*pairs_cmd) return run_make_pairs(pairs);
    if (*bench_cmd) return run_bench(bench);
  } catch (const CLI::ValidationError& e) {
    print_error("usage", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    print_error(to_string(e.kind()), e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    print_error("runtime", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
