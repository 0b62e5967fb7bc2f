#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "facerr/batch.hpp"
#include "facerr/documents.hpp"
#include "facerr/error.hpp"
#include "facerr/png_io.hpp"
#include "facerr/synthetic.hpp"
#include "test_support.hpp"

namespace facerr {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

// Writes a model, an image and `n` face documents plus a manifest; returns the manifest path.
fs::path make_dataset(const fs::path& dir, int n, ImageSize size = {64, 64}) {
  const SyntheticAsset asset = generate_synthetic_model(17, 2, size);
  save_model(asset.model, dir / "model.bin");
  write_image(dir / "face.png", asset.texture);
  std::ostringstream manifest;
  for (int i = 0; i < n; ++i) {
    const auto c = random_coefficients(asset.model, static_cast<std::uint64_t>(i));
    const std::string name = "face" + std::to_string(i) + ".txt";
    write_face_document(dir / name, {"model.bin", c.alpha_id, c.alpha_exp, synthetic_framing(size)});
    manifest << "face.png " << name << "\n";
  }
  write_text_file(dir / "manifest.txt", manifest.str());
  return dir / "manifest.txt";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(Manifest, ParsesAndResolvesRelativePaths) {
  TempDir dir("manifest");
  write_text_file(dir / "m.txt", "# comment\na.png a.txt\n\n/abs/b.png b.txt  # tail\n");
  const auto entries = read_manifest(dir / "m.txt");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].image, dir / "a.png");
  EXPECT_EQ(entries[1].image, fs::path("/abs/b.png"));
  EXPECT_EQ(entries[1].face_document, dir / "b.txt");
  write_text_file(dir / "bad.txt", "only-one-field\n");
  EXPECT_THROW(read_manifest(dir / "bad.txt"), Error);
}

TEST(Batch, ThreeEntriesGiveThreePairs) {
  TempDir dir("batch3");
  BatchOptions opt;
  opt.output_dir = dir / "out";
  const BatchReport r = batch_generate(read_manifest(make_dataset(dir.path(), 3)), opt);
  EXPECT_EQ(r.total, 3u);
  EXPECT_EQ(r.succeeded, 3u);
  EXPECT_TRUE(r.failures.empty());
  for (const char* id : {"000000", "000001", "000002"}) {
    for (const char* f : {"input.png", "target.png", "aux.png", "mask.png", "pose_b.txt"}) {
      EXPECT_TRUE(fs::exists(opt.output_dir / id / f)) << id << "/" << f;
    }
  }
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_EQ(j["succeeded"], 3);
  EXPECT_EQ(j["failures"].size(), 0u);
  EXPECT_TRUE(j.contains("pairs_per_second"));
}

TEST(Batch, CorruptImageFailsOnlyItsEntry) {
  TempDir dir("batchbad");
  make_dataset(dir.path(), 3);
  std::ofstream(dir / "broken.png") << "not a png";
  write_text_file(dir / "manifest.txt", "face.png face0.txt\nbroken.png face1.txt\nface.png face2.txt\n");
  BatchOptions opt;
  opt.output_dir = dir / "out";
  const BatchReport r = batch_generate(read_manifest(dir / "manifest.txt"), opt);
  EXPECT_EQ(r.succeeded, 2u);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0].index, 1u);
  EXPECT_NE(r.failures[0].reason.find("format"), std::string::npos) << r.failures[0].reason;
  EXPECT_FALSE(fs::exists(opt.output_dir / "000001"));
  EXPECT_TRUE(fs::exists(opt.output_dir / "000002" / "input.png"));
}

TEST(Batch, OutputDoesNotDependOnParallelism) {
  TempDir dir("batchpar");
  const auto entries = read_manifest(make_dataset(dir.path(), 6));
  BatchOptions opt;
  opt.sampler.seed = 99;
  opt.output_dir = dir / "p1";
  batch_generate(entries, opt);
  opt.output_dir = dir / "p8";
  opt.parallelism = 8;
  batch_generate(entries, opt);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "p1")) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir / "p1");
    EXPECT_EQ(slurp(e.path()), slurp(dir / "p8" / rel)) << rel;
    ++files;
  }
  EXPECT_EQ(files, 30u);
}

TEST(Batch, TargetPngIsTheSourceImage) {
  TempDir dir("batchtarget");
  BatchOptions opt;
  opt.output_dir = dir / "out";
  batch_generate(read_manifest(make_dataset(dir.path(), 1)), opt);
  EXPECT_EQ(slurp(opt.output_dir / "000000" / "target.png").size() > 0, true);
  EXPECT_EQ(read_image(opt.output_dir / "000000" / "target.png"), read_image(dir / "face.png"));
}

TEST(Batch, ThreadsFromEnvironment) {
  ::setenv("FACERR_THREADS", "6", 1);
  EXPECT_EQ(parallelism_from_env(1), 6);
  ::setenv("FACERR_THREADS", "zero", 1);
  EXPECT_EQ(parallelism_from_env(3), 3);
  ::unsetenv("FACERR_THREADS");
  EXPECT_EQ(parallelism_from_env(2), 2);
}

TEST(Batch, EntryIdsAreZeroPadded) {
  EXPECT_EQ(entry_id(0), "000000");
  EXPECT_EQ(entry_id(1234567), "1234567");
}

}  // namespace
}  // namespace facerr
