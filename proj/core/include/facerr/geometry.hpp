#pragma once

#include <vector>

#include <Eigen/Core>

#include "facerr/morphable_model.hpp"

namespace facerr {

using Mat3 = Eigen::Matrix3d;

// Weak-perspective pose: screen = f * [[1,0,0],[0,1,0]] * R * v + h2d.
struct Pose {
  double f = 1.0;
  Mat3 R = Mat3::Identity();
  Vec2 h2d = Vec2::Zero();

  friend bool operator==(const Pose& a, const Pose& b) {
    return a.f == b.f && a.R == b.R && a.h2d == b.h2d;
  }
};

inline constexpr double kRotationTolerance = 1e-6;

bool is_rotation(const Mat3& r, double tol = kRotationTolerance);
// Throws Error(kInvalidArgument) unless f > 0 (finite) and R is a proper rotation.
void validate_pose(const Pose& pose);

// Radians. R = R_y(yaw) * R_x(pitch) * R_z(roll), right-handed; the camera looks
// down -z so larger rotated z is nearer the viewer.
struct EulerAngles {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
};

// Wraps an angle into (-pi, pi].
double wrap_angle(double radians);
EulerAngles canonicalize(const EulerAngles& e);

Mat3 euler_to_matrix(const EulerAngles& e);
Pose compose_pose(const Pose& pose, const Mat3& rotation);

inline double deg_to_rad(double deg) { return deg * (3.14159265358979323846 / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / 3.14159265358979323846); }

// Raw projection (y up); no clipping.
Vec2 project_vertex(const Vec3& v, const Pose& pose);
std::vector<Vec2> project(const FaceShape& shape, const Pose& pose);

// [0, 0, 1] * (R * v): scale-free visibility key, larger is nearer.
std::vector<double> rotated_depth(const FaceShape& shape, const Pose& pose);

}  // namespace facerr
