#include <gtest/gtest.h>

#include <fstream>

#include <Eigen/Geometry>

#include "facerr/error.hpp"
#include "facerr/morphable_model.hpp"
#include "facerr/synthetic.hpp"
#include "test_support.hpp"

namespace facerr {
namespace {

using testing::Rng;
using testing::TempDir;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected facerr::Error";
  return ErrorKind::kIo;
}

Eigen::VectorXd mean_of(const MorphableModel& m) { return m.mean_shape().cast<double>(); }

Eigen::VectorXd flatten(const FaceShape& s) {
  Eigen::VectorXd out(3 * static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) out.segment<3>(3 * static_cast<Eigen::Index>(i)) = s.vertices[i];
  return out;
}

TEST(MorphableModel, ZeroCoefficientsGiveMeanShapeExactly) {
  const auto asset = generate_synthetic_model(3, 2);
  const FaceShape s = synthesize_shape(asset.model, ShapeCoefficients::zeros(asset.model));
  EXPECT_EQ(flatten(s), mean_of(asset.model));
}

TEST(MorphableModel, UnitIdentityCoefficientAddsThatColumn) {
  const auto asset = generate_synthetic_model(3, 2);
  for (Eigen::Index j = 0; j < asset.model.k_id(); ++j) {
    ShapeCoefficients c = ShapeCoefficients::zeros(asset.model);
    c.alpha_id[j] = 1.0;
    const Eigen::VectorXd expect = mean_of(asset.model) + asset.model.id_basis().col(j).cast<double>();
    EXPECT_LE((flatten(synthesize_shape(asset.model, c)) - expect).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(MorphableModel, Superposition) {
  const auto asset = generate_synthetic_model(5, 2);
  Rng rng(11);
  const FaceShape zero = synthesize_shape(asset.model, ShapeCoefficients::zeros(asset.model));
  for (int trial = 0; trial < 20; ++trial) {
    auto c1 = random_coefficients(asset.model, rng.index(1u << 30), 2.0);
    auto c2 = random_coefficients(asset.model, rng.index(1u << 30), 2.0);
    ShapeCoefficients sum{c1.alpha_id + c2.alpha_id, c1.alpha_exp + c2.alpha_exp};
    const Eigen::VectorXd lhs =
        flatten(synthesize_shape(asset.model, c1)) + flatten(synthesize_shape(asset.model, c2)) - flatten(zero);
    const Eigen::VectorXd rhs = flatten(synthesize_shape(asset.model, sum));
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff() / rhs.cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(MorphableModel, CoefficientLengthMismatchIsRejected) {
  const auto asset = generate_synthetic_model(1, 1);
  ShapeCoefficients c = ShapeCoefficients::zeros(asset.model);
  c.alpha_id.resize(c.alpha_id.size() + 1);
  EXPECT_EQ(kind_of([&] { synthesize_shape(asset.model, c); }), ErrorKind::kDimensionMismatch);
}

TEST(MorphableModel, ConstructorChecksInvariants) {
  Eigen::VectorXf mean = Eigen::VectorXf::Zero(9);
  EXPECT_EQ(kind_of([&] { MorphableModel(mean, Eigen::MatrixXf::Zero(8, 1), Eigen::MatrixXf::Zero(9, 1), {}); }),
            ErrorKind::kDimensionMismatch);
  EXPECT_EQ(kind_of([&] {
              MorphableModel(mean, Eigen::MatrixXf::Zero(9, 1), Eigen::MatrixXf::Zero(9, 1), {{0, 1, 3}});
            }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(kind_of([&] {
              MorphableModel(mean, Eigen::MatrixXf::Zero(9, 1), Eigen::MatrixXf::Zero(9, 1), {{0, 1, 1}});
            }),
            ErrorKind::kInvalidArgument);
}

TEST(SyntheticModel, DeterministicInSeed) {
  const auto a = generate_synthetic_model(1, 2);
  const auto b = generate_synthetic_model(1, 2);
  EXPECT_TRUE(a.model == b.model);
  EXPECT_EQ(a.texture, b.texture);
  EXPECT_FALSE(a.model == generate_synthetic_model(2, 2).model);
}

TEST(SyntheticModel, SubdivisionZeroIsTheIcosahedron) {
  const auto asset = generate_synthetic_model(1, 0);
  EXPECT_EQ(asset.model.n_vertices(), 12u);
  EXPECT_EQ(asset.model.triangles().size(), 20u);
  EXPECT_EQ(make_icosphere(0).vertices.size(), 12u);
}

TEST(SyntheticModel, IcosphereIsClosedAndOutwardWound) {
  const Icosphere ico = make_icosphere(3);
  EXPECT_EQ(ico.vertices.size(), 10u * 64 + 2);
  EXPECT_EQ(ico.triangles.size(), 20u * 64);
  for (const auto& t : ico.triangles) {
    const Vec3 &a = ico.vertices[t[0]], &b = ico.vertices[t[1]], &c = ico.vertices[t[2]];
    EXPECT_GT((b - a).cross(c - a).dot(a + b + c), 0.0);
  }
  for (const auto& v : ico.vertices) EXPECT_NEAR(v.norm(), 1.0, 1e-12);
}

TEST(SyntheticModel, NoseProtrudesOnPositiveZ) {
  const auto asset = generate_synthetic_model(4, 3);
  const FaceShape s = synthesize_shape(asset.model, ShapeCoefficients::zeros(asset.model));
  double max_z = -1e9, min_z = 1e9;
  for (const auto& v : s.vertices) {
    max_z = std::max(max_z, v.z());
    min_z = std::min(min_z, v.z());
  }
  EXPECT_GT(max_z, -min_z + 0.2);
}

TEST(ModelIo, RoundTripIsBitExact) {
  TempDir dir("model");
  const auto asset = generate_synthetic_model(9, 2);
  save_model(asset.model, dir / "m.bin");
  const MorphableModel back = load_model(dir / "m.bin");
  EXPECT_TRUE(back == asset.model);
  EXPECT_EQ(serialize_model(back), serialize_model(asset.model));
}

TEST(ModelIo, TruncatedFileIsReported) {
  const auto bytes = serialize_model(generate_synthetic_model(9, 1).model);
  std::vector<std::uint8_t> cut(bytes.begin(), bytes.end() - 5);
  EXPECT_EQ(kind_of([&] { deserialize_model(cut); }), ErrorKind::kTruncated);
}

TEST(ModelIo, WrongMagicIsAFormatError) {
  auto bytes = serialize_model(generate_synthetic_model(9, 1).model);
  bytes[0] = 'X';
  EXPECT_EQ(kind_of([&] { deserialize_model(bytes); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { deserialize_model({}); }), ErrorKind::kFormat);
}

TEST(ModelIo, TrailingBytesAreRejected) {
  auto bytes = serialize_model(generate_synthetic_model(9, 1).model);
  bytes.push_back(0);
  EXPECT_EQ(kind_of([&] { deserialize_model(bytes); }), ErrorKind::kDimensionMismatch);
}

TEST(ModelIo, MissingFileIsAnIoError) {
  EXPECT_EQ(kind_of([&] { load_model("/nonexistent/facerr/model.bin"); }), ErrorKind::kIo);
}

}  // namespace
}  // namespace facerr
