#pragma once

#include <vector>

#include "facerr/image.hpp"

namespace facerr {

// Exact squared Euclidean distance from every pixel to the nearest unset
// pixel; pixels beyond the image border count as unset.
std::vector<double> squared_distance_to_background(const Mask& mask);

// Morphological erosion by a disc of the given radius: a pixel survives iff
// every pixel within distance `radius` is set.
Mask erode_disc(const Mask& mask, int radius);

}  // namespace facerr
