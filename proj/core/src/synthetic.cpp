#include "facerr/synthetic.hpp"

#include <algorithm>
#include <random>

#include "facerr/error.hpp"

namespace facerr {

Pose synthetic_framing(ImageSize size, const EulerAngles& angles) {
  if (size.width <= 0 || size.height <= 0) throw Error(ErrorKind::kInvalidArgument, "image size must be positive");
  Pose pose;
  pose.f = 0.36 * std::min(size.width, size.height);
  pose.R = euler_to_matrix(angles);
  pose.h2d = Vec2(0.5 * (size.width - 1), 0.5 * (size.height - 1));
  return pose;
}

ShapeCoefficients random_coefficients(const MorphableModel& model, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
  auto draw = [&] { return scale * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0); };
  ShapeCoefficients c = ShapeCoefficients::zeros(model);
  for (Eigen::Index i = 0; i < c.alpha_id.size(); ++i) c.alpha_id[i] = draw();
  for (Eigen::Index i = 0; i < c.alpha_exp.size(); ++i) c.alpha_exp[i] = draw();
  return c;
}

FittedFace make_synthetic_face(const SyntheticAsset& asset, const ShapeCoefficients& coeffs,
                               const Pose& pose_a) {
  return {synthesize_shape(asset.model, coeffs), asset.model.triangles(), pose_a, asset.texture};
}

FittedFace synthetic_face(std::uint64_t seed, int n_subdiv, ImageSize size, const EulerAngles& angles) {
  const SyntheticAsset asset = generate_synthetic_model(seed, n_subdiv, size);
  return make_synthetic_face(asset, random_coefficients(asset.model, seed), synthetic_framing(size, angles));
}

}  // namespace facerr
