#include "facerr/batch.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "facerr/documents.hpp"
#include "facerr/error.hpp"
#include "facerr/png_io.hpp"

namespace facerr {

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path out(p);
    return out.is_relative() ? base / out : out;
  };
  std::vector<ManifestEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string image, face, extra;
    if (!(fields >> image)) continue;
    if (!(fields >> face) || (fields >> extra)) {
      throw Error(ErrorKind::kFormat, path.string() + ":" + std::to_string(line_no) +
                                          ": expected '<image> <face document>'");
    }
    entries.push_back({resolve(image), resolve(face)});
  }
  return entries;
}

FittedFace load_fitted_face(const ManifestEntry& entry) {
  const FaceDocument doc = read_face_document(entry.face_document);
  const MorphableModel model = load_model(doc.model);
  ShapeCoefficients coeffs = ShapeCoefficients::zeros(model);
  if (doc.alpha_id.size() > 0) coeffs.alpha_id = doc.alpha_id;
  if (doc.alpha_exp.size() > 0) coeffs.alpha_exp = doc.alpha_exp;

  FittedFace face;
  face.shape = synthesize_shape(model, coeffs);
  face.triangles = model.triangles();
  face.pose_a = doc.pose;
  face.source_image = read_image(entry.image);
  return face;
}

std::string entry_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", index);
  return buf;
}

void write_pair(const std::filesystem::path& dir, const TrainingPair& pair) {
  std::filesystem::create_directories(dir);
  write_image(dir / "input.png", pair.input_render);
  write_image(dir / "target.png", pair.target);
  write_image(dir / "aux.png", pair.aux_render);
  write_mask(dir / "mask.png", pair.artifact_mask);
  write_text_file(dir / "pose_b.txt", format_pose_document(pair.pose_b));
}

std::string BatchReport::to_json() const {
  nlohmann::ordered_json j;
  j["total"] = total;
  j["succeeded"] = succeeded;
  j["failed"] = failures.size();
  j["parallelism"] = parallelism;
  j["wall_seconds"] = wall_seconds;
  j["pairs_per_second"] = pairs_per_second;
  auto& list = j["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : failures) list.push_back({{"index", f.index}, {"id", f.id}, {"reason", f.reason}});
  return j.dump(2);
}

BatchReport batch_generate(const std::vector<ManifestEntry>& entries, const BatchOptions& options) {
  validate_sampler(options.sampler);
  if (options.parallelism < 1) throw Error(ErrorKind::kInvalidArgument, "parallelism must be >= 1");
  std::filesystem::create_directories(options.output_dir);

  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> errors(entries.size());
  std::vector<std::uint8_t> ok(entries.size(), 0);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        const FittedFace face = load_fitted_face(entries[i]);
        const int radius = options.erosion_radius.value_or(
            default_erosion_radius({face.source_image.width, face.source_image.height}));
        const TrainingPair pair = rotate_and_render_pair(face, options.sampler, i, radius);
        write_pair(options.output_dir / entry_id(i), pair);
        ok[i] = 1;
      } catch (const Error& e) {
        errors[i] = std::string(to_string(e.kind())) + ": " + e.what();
      } catch (const std::exception& e) {
        errors[i] = std::string("error: ") + e.what();
      }
    }
  };

  const auto threads = static_cast<std::size_t>(options.parallelism);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  BatchReport report;
  report.total = entries.size();
  report.parallelism = options.parallelism;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (ok[i]) {
      ++report.succeeded;
    } else {
      report.failures.push_back({i, entry_id(i), errors[i]});
    }
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.pairs_per_second = report.wall_seconds > 0.0 ? report.succeeded / report.wall_seconds : 0.0;
  return report;
}

int parallelism_from_env(int fallback) {
  const char* value = std::getenv("FACERR_THREADS");
  if (value == nullptr || *value == '\0') return fallback;
  char* end = nullptr;
  const long n = std::strtol(value, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) return fallback;
  return static_cast<int>(n);
}

}  // namespace facerr
