#include "facerr/morphable_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <utility>

#include "facerr/error.hpp"

namespace facerr {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch: return "dimension_mismatch";
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kTruncated: return "truncated";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kEmptySilhouette: return "empty_silhouette";
  }
  return "unknown";
}

MorphableModel::MorphableModel(Eigen::VectorXf mean_shape, Eigen::MatrixXf id_basis,
                               Eigen::MatrixXf exp_basis, std::vector<Triangle> triangles)
    : mean_shape_(std::move(mean_shape)),
      id_basis_(std::move(id_basis)),
      exp_basis_(std::move(exp_basis)),
      triangles_(std::move(triangles)) {
  if (mean_shape_.size() == 0 || mean_shape_.size() % 3 != 0) {
    throw Error(ErrorKind::kDimensionMismatch,
                "mean_shape length " + std::to_string(mean_shape_.size()) +
                    " is not a positive multiple of 3");
  }
  const auto rows = mean_shape_.size();
  if (id_basis_.rows() != rows) {
    throw Error(ErrorKind::kDimensionMismatch, "id_basis has " + std::to_string(id_basis_.rows()) +
                                                   " rows, expected " + std::to_string(rows));
  }
  if (exp_basis_.rows() != rows) {
    throw Error(ErrorKind::kDimensionMismatch, "exp_basis has " +
                                                   std::to_string(exp_basis_.rows()) +
                                                   " rows, expected " + std::to_string(rows));
  }
  const auto n = n_vertices();
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (auto i : tri) {
      if (i >= n) {
        throw Error(ErrorKind::kInvalidArgument, "triangle " + std::to_string(t) +
                                                     " references vertex " + std::to_string(i) +
                                                     " of " + std::to_string(n));
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw Error(ErrorKind::kInvalidArgument, "triangle " + std::to_string(t) + " is degenerate");
    }
  }
}

bool operator==(const MorphableModel& a, const MorphableModel& b) {
  auto same = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  return same(a.mean_shape_, b.mean_shape_) && same(a.id_basis_, b.id_basis_) &&
         same(a.exp_basis_, b.exp_basis_) && a.triangles_ == b.triangles_;
}

FaceShape synthesize_shape(const MorphableModel& model, const ShapeCoefficients& coeffs) {
  if (coeffs.alpha_id.size() != model.k_id()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "alpha_id has " + std::to_string(coeffs.alpha_id.size()) + " entries, id_basis has " +
                    std::to_string(model.k_id()) + " columns");
  }
  if (coeffs.alpha_exp.size() != model.k_exp()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "alpha_exp has " + std::to_string(coeffs.alpha_exp.size()) +
                    " entries, exp_basis has " + std::to_string(model.k_exp()) + " columns");
  }

  Eigen::VectorXd s = model.mean_shape().cast<double>();
  if (model.k_id() > 0) s.noalias() += model.id_basis().cast<double>() * coeffs.alpha_id;
  if (model.k_exp() > 0) s.noalias() += model.exp_basis().cast<double>() * coeffs.alpha_exp;

  FaceShape shape;
  shape.vertices.resize(model.n_vertices());
  for (std::size_t i = 0; i < shape.vertices.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(3 * i);
    shape.vertices[i] = Vec3(s[k], s[k + 1], s[k + 2]);
  }
  return shape;
}

Icosphere make_icosphere(int n_subdiv) {
  if (n_subdiv < 0) throw Error(ErrorKind::kInvalidArgument, "n_subdiv must be >= 0");

  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Icosphere mesh;
  mesh.vertices = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  };
  for (auto& v : mesh.vertices) v.normalize();
  mesh.triangles = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };

  for (int level = 0; level < n_subdiv; ++level) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto [it, inserted] = midpoints.try_emplace(key, 0);
      if (inserted) {
        it->second = static_cast<std::uint32_t>(mesh.vertices.size());
        mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]).normalized());
      }
      return it->second;
    };
    std::vector<Triangle> next;
    next.reserve(mesh.triangles.size() * 4);
    for (const auto& t : mesh.triangles) {
      const auto ab = midpoint(t[0], t[1]);
      const auto bc = midpoint(t[1], t[2]);
      const auto ca = midpoint(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.triangles = std::move(next);
  }
  return mesh;
}

namespace {

// Uniform double in [lo, hi) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

constexpr double kPi = 3.14159265358979323846;

// Head proportions: narrower than tall, shallower than wide so the profile
// silhouette is narrower than the frontal one even with the nose.
constexpr double kHalfWidth = 0.95;
constexpr double kHalfHeight = 1.1;
constexpr double kHalfDepth = 0.5;
constexpr double kNoseLength = 0.28;

double nose_profile(const Vec3& unit) {
  const double front = std::max(0.0, unit.z());
  const double gx = unit.x() / 0.24;
  const double gy = (unit.y() + 0.05) / 0.36;
  return front * front * std::exp(-(gx * gx + gy * gy));
}

double jaw_profile(const Vec3& unit) {
  const double below = std::max(0.0, -unit.y() - 0.25);
  return below * below;
}

}  // namespace

SyntheticAsset generate_synthetic_model(std::uint64_t seed, int n_subdiv, ImageSize texture_size) {
  if (texture_size.width <= 0 || texture_size.height <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "texture size must be positive");
  }
  const Icosphere sphere = make_icosphere(n_subdiv);
  const auto n = static_cast<Eigen::Index>(sphere.vertices.size());

  std::mt19937_64 rng(seed);
  // Low-frequency radial wobble keeps seeds apart without roughening the surface.
  const double wobble_amp = uniform(rng, 0.0, 0.04);
  const Vec3 wobble_dir = Vec3(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
  const double wobble_phase = uniform(rng, 0.0, 2.0 * kPi);

  Eigen::VectorXf mean(3 * n);
  Eigen::MatrixXf id_basis = Eigen::MatrixXf::Zero(3 * n, kSyntheticIdModes);
  Eigen::MatrixXf exp_basis = Eigen::MatrixXf::Zero(3 * n, kSyntheticExpModes);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3& u = sphere.vertices[static_cast<std::size_t>(i)];
    const double r = 1.0 + wobble_amp * std::sin(2.0 * wobble_dir.dot(u) + wobble_phase);
    Vec3 p(kHalfWidth * r * u.x(), kHalfHeight * r * u.y(), kHalfDepth * r * u.z());
    p.z() += kNoseLength * nose_profile(u);

    mean.segment<3>(3 * i) = p.cast<float>();
    id_basis(3 * i, 0) = static_cast<float>(0.15 * p.x());                // width
    id_basis(3 * i + 2, 1) = static_cast<float>(0.15 * nose_profile(u));  // nose length
    exp_basis(3 * i + 1, 0) = static_cast<float>(-0.3 * jaw_profile(u));  // jaw drop
  }

  SyntheticAsset asset{
      MorphableModel(std::move(mean), std::move(id_basis), std::move(exp_basis), sphere.triangles),
      Image(texture_size.width, texture_size.height)};

  // Two seeded sinusoids per channel, quantized to bytes so the pattern
  // survives a PNG round trip unchanged.
  struct Wave {
    double fx, fy, phase, amp;
  };
  std::array<std::array<Wave, 2>, 3> waves{};
  for (auto& channel : waves) {
    for (auto& w : channel) {
      w = {uniform(rng, 1.0, 4.0), uniform(rng, 1.0, 4.0), uniform(rng, 0.0, 2.0 * kPi),
           uniform(rng, 0.12, 0.22)};
    }
  }
  Image& tex = asset.texture;
  for (int y = 0; y < tex.height; ++y) {
    for (int x = 0; x < tex.width; ++x) {
      const double u = static_cast<double>(x) / tex.width;
      const double v = static_cast<double>(y) / tex.height;
      for (int c = 0; c < 3; ++c) {
        double value = 0.5;
        for (const auto& w : waves[c]) value += w.amp * std::sin(2.0 * kPi * (w.fx * u + w.fy * v) + w.phase);
        value = std::clamp(value, 0.0, 1.0);
        tex.at(x, y, c) = std::round(value * 255.0) / 255.0;
      }
    }
  }
  return asset;
}

}  // namespace facerr
