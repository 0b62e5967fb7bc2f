#include "facerr/erosion.hpp"

#include <limits>

#include "facerr/error.hpp"

namespace facerr {
namespace {

constexpr double kFar = 1e20;

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher), in place over a
// strided line of length n.
void distance_1d(double* f, std::size_t n, std::size_t stride, std::vector<double>& d,
                 std::vector<int>& v, std::vector<double>& z) {
  d.resize(n);
  v.resize(n);
  z.resize(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  auto at = [&](std::size_t q) { return f[q * stride]; };
  auto intersect = [&](int q, int p) {
    return ((at(q) + static_cast<double>(q) * q) - (at(p) + static_cast<double>(p) * p)) /
           (2.0 * (q - p));
  };
  for (int q = 1; q < static_cast<int>(n); ++q) {
    double s = intersect(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < static_cast<int>(n); ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + at(v[k]);
  }
  for (std::size_t q = 0; q < n; ++q) f[q * stride] = d[q];
}

}  // namespace

std::vector<double> squared_distance_to_background(const Mask& mask) {
  // One pixel of background padding stands in for everything beyond the border.
  const std::size_t w = static_cast<std::size_t>(mask.width) + 2;
  const std::size_t h = static_cast<std::size_t>(mask.height) + 2;
  std::vector<double> grid(w * h, 0.0);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.at(x, y)) grid[(y + 1) * w + (x + 1)] = kFar;

  std::vector<double> d;
  std::vector<int> v;
  std::vector<double> z;
  for (std::size_t x = 0; x < w; ++x) distance_1d(grid.data() + x, h, w, d, v, z);
  for (std::size_t y = 0; y < h; ++y) distance_1d(grid.data() + y * w, w, 1, d, v, z);

  std::vector<double> out(static_cast<std::size_t>(mask.width) * mask.height);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      out[static_cast<std::size_t>(y) * mask.width + x] = grid[(y + 1) * w + (x + 1)];
  return out;
}

Mask erode_disc(const Mask& mask, int radius) {
  if (radius < 0) throw Error(ErrorKind::kInvalidArgument, "erosion radius must be >= 0");
  if (radius == 0) return mask;
  const auto dist2 = squared_distance_to_background(mask);
  const double r2 = static_cast<double>(radius) * radius;
  Mask out(mask.width, mask.height);
  for (std::size_t i = 0; i < dist2.size(); ++i) out.data[i] = dist2[i] > r2 ? 1 : 0;
  return out;
}

}  // namespace facerr
