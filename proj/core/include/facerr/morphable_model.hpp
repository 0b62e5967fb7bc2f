#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "facerr/image.hpp"

namespace facerr {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Triangle = std::array<std::uint32_t, 3>;

// Linear shape model: S = mean + id_basis * alpha_id + exp_basis * alpha_exp,
// with S the flattened (x0, y0, z0, x1, ...) vertex vector. Values are held in
// single precision because that is what the model file stores; synthesis runs
// in double precision.
class MorphableModel {
 public:
  MorphableModel() = default;

  // Throws Error(kDimensionMismatch / kInvalidArgument) if the invariants fail:
  // basis row counts must equal 3 * n_vertices and every triangle must index
  // three distinct existing vertices.
  MorphableModel(Eigen::VectorXf mean_shape, Eigen::MatrixXf id_basis, Eigen::MatrixXf exp_basis,
                 std::vector<Triangle> triangles);

  std::size_t n_vertices() const { return static_cast<std::size_t>(mean_shape_.size()) / 3; }
  Eigen::Index k_id() const { return id_basis_.cols(); }
  Eigen::Index k_exp() const { return exp_basis_.cols(); }

  const Eigen::VectorXf& mean_shape() const { return mean_shape_; }
  const Eigen::MatrixXf& id_basis() const { return id_basis_; }
  const Eigen::MatrixXf& exp_basis() const { return exp_basis_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }

  friend bool operator==(const MorphableModel& a, const MorphableModel& b);

 private:
  Eigen::VectorXf mean_shape_;
  Eigen::MatrixXf id_basis_;
  Eigen::MatrixXf exp_basis_;
  std::vector<Triangle> triangles_;
};

struct ShapeCoefficients {
  Eigen::VectorXd alpha_id;
  Eigen::VectorXd alpha_exp;

  static ShapeCoefficients zeros(const MorphableModel& model) {
    return {Eigen::VectorXd::Zero(model.k_id()), Eigen::VectorXd::Zero(model.k_exp())};
  }
};

struct FaceShape {
  std::vector<Vec3> vertices;

  std::size_t size() const { return vertices.size(); }
};

FaceShape synthesize_shape(const MorphableModel& model, const ShapeCoefficients& coeffs);

// Unit icosphere: the 12-vertex icosahedron refined `n_subdiv` times with
// midpoints pushed back onto the sphere. Outward counter-clockwise winding.
struct Icosphere {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
};
Icosphere make_icosphere(int n_subdiv);

// Head-like test asset: anisotropic icosphere with a nose bump on +z, two
// identity modes (face width, nose length), one expression mode (jaw drop)
// and a smooth seeded color pattern to use as the source photograph.
struct SyntheticAsset {
  MorphableModel model;
  Image texture;
};

inline constexpr int kSyntheticIdModes = 2;
inline constexpr int kSyntheticExpModes = 1;

SyntheticAsset generate_synthetic_model(std::uint64_t seed, int n_subdiv, ImageSize texture_size = {256, 256});

// Binary model container. See README for the layout.
void save_model(const MorphableModel& model, const std::filesystem::path& path);
MorphableModel load_model(const std::filesystem::path& path);

// In-memory variants used by the file functions.
std::vector<std::uint8_t> serialize_model(const MorphableModel& model);
MorphableModel deserialize_model(const std::vector<std::uint8_t>& bytes);

}  // namespace facerr
