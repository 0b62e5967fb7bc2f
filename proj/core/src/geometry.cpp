#include "facerr/geometry.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

#include "facerr/error.hpp"

namespace facerr {

bool is_rotation(const Mat3& r, double tol) {
  if (!r.allFinite()) return false;
  const Mat3 gram = r.transpose() * r;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(r.determinant() - 1.0) <= tol;
}

void validate_pose(const Pose& pose) {
  if (!(pose.f > 0.0) || !std::isfinite(pose.f)) {
    throw Error(ErrorKind::kInvalidArgument, "pose scale f must be positive and finite");
  }
  if (!pose.h2d.allFinite()) throw Error(ErrorKind::kInvalidArgument, "pose h2d must be finite");
  if (!is_rotation(pose.R)) throw Error(ErrorKind::kInvalidArgument, "pose R is not a rotation matrix");
}

double wrap_angle(double radians) {
  constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
  constexpr double kPi = 3.14159265358979323846;
  double a = std::fmod(radians, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

EulerAngles canonicalize(const EulerAngles& e) {
  return {wrap_angle(e.yaw), wrap_angle(e.pitch), wrap_angle(e.roll)};
}

Mat3 euler_to_matrix(const EulerAngles& e) {
  const double cy = std::cos(e.yaw), sy = std::sin(e.yaw);
  const double cp = std::cos(e.pitch), sp = std::sin(e.pitch);
  const double cr = std::cos(e.roll), sr = std::sin(e.roll);
  Mat3 ry, rx, rz;
  ry << cy, 0, sy, 0, 1, 0, -sy, 0, cy;
  rx << 1, 0, 0, 0, cp, -sp, 0, sp, cp;
  rz << cr, -sr, 0, sr, cr, 0, 0, 0, 1;
  return ry * rx * rz;
}

Pose compose_pose(const Pose& pose, const Mat3& rotation) {
  Pose out = pose;
  out.R = rotation * pose.R;
  return out;
}

Vec2 project_vertex(const Vec3& v, const Pose& pose) {
  const Vec3 r = pose.R * v;
  return Vec2(pose.f * r.x(), pose.f * r.y()) + pose.h2d;
}

std::vector<Vec2> project(const FaceShape& shape, const Pose& pose) {
  std::vector<Vec2> out;
  out.reserve(shape.size());
  for (const auto& v : shape.vertices) out.push_back(project_vertex(v, pose));
  return out;
}

std::vector<double> rotated_depth(const FaceShape& shape, const Pose& pose) {
  std::vector<double> out;
  out.reserve(shape.size());
  for (const auto& v : shape.vertices) out.push_back((pose.R * v).z());
  return out;
}

}  // namespace facerr
