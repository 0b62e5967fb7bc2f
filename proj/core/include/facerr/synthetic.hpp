#pragma once

#include <cstdint>

#include "facerr/geometry.hpp"
#include "facerr/morphable_model.hpp"
#include "facerr/pipeline.hpp"

namespace facerr {

// Pose that centers the synthetic head in an image of `size`, head height
// about 80% of the shorter side, rotated by `angles`.
Pose synthetic_framing(ImageSize size, const EulerAngles& angles = {});

// Coefficients drawn uniformly from [-scale, scale], deterministic in `seed`.
ShapeCoefficients random_coefficients(const MorphableModel& model, std::uint64_t seed, double scale = 1.0);

// A ready-to-use fitted face: the asset texture is the source image.
FittedFace make_synthetic_face(const SyntheticAsset& asset, const ShapeCoefficients& coeffs,
                               const Pose& pose_a);

// Shorthand for tests and benchmarks: a model generated from `seed`, random
// coefficients from the same seed, framed frontally at `size`.
FittedFace synthetic_face(std::uint64_t seed, int n_subdiv, ImageSize size, const EulerAngles& angles = {});

}  // namespace facerr
