#include "facerr/image.hpp"

#include <algorithm>
#include <cmath>

#include "facerr/error.hpp"

namespace facerr {

double max_abs_difference(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorKind::kDimensionMismatch, "image sizes differ");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
  return worst;
}

}  // namespace facerr
