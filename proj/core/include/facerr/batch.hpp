#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "facerr/pipeline.hpp"

namespace facerr {

struct ManifestEntry {
  std::filesystem::path image;
  std::filesystem::path face_document;
};

// One entry per line: image path and face document path, whitespace
// separated, relative paths resolved against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

FittedFace load_fitted_face(const ManifestEntry& entry);

struct BatchOptions {
  PoseSampler sampler;
  std::optional<int> erosion_radius;  // default scales with the image size
  std::filesystem::path output_dir;
  int parallelism = 1;
};

struct BatchFailure {
  std::size_t index = 0;
  std::string id;
  std::string reason;
};

struct BatchReport {
  std::size_t total = 0;
  std::size_t succeeded = 0;
  std::vector<BatchFailure> failures;
  double wall_seconds = 0.0;
  double pairs_per_second = 0.0;
  int parallelism = 1;

  std::string to_json() const;
};

std::string entry_id(std::size_t index);

// Writes <out>/<id>/{input,target,aux,mask}.png and pose_b.txt per entry.
// Entry i draws its rotation from sampler stream i, so the output does not
// depend on parallelism. A failing entry is reported and skipped.
BatchReport batch_generate(const std::vector<ManifestEntry>& entries, const BatchOptions& options);

void write_pair(const std::filesystem::path& dir, const TrainingPair& pair);

// FACERR_THREADS if set and valid, otherwise `fallback`.
int parallelism_from_env(int fallback);

}  // namespace facerr
