#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "facerr/geometry.hpp"
#include "facerr/morphable_model.hpp"

namespace facerr {

// `key = value` lines, '#' starts a comment. Duplicate keys are an error.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(const std::string& text);

// Pose document: f, h2d ("x y"), and either R (9 numbers, row-major) or
// yaw/pitch/roll in degrees.
Pose pose_from_key_values(const KeyValues& kv);
Pose parse_pose_document(const std::string& text);
std::string format_pose_document(const Pose& pose);

// Face document: a pose plus `model` (path, relative to the document) and
// optional `alpha_id` / `alpha_exp` coefficient lists.
struct FaceDocument {
  std::filesystem::path model;
  Eigen::VectorXd alpha_id;
  Eigen::VectorXd alpha_exp;
  Pose pose;
};

FaceDocument read_face_document(const std::filesystem::path& path);
void write_face_document(const std::filesystem::path& path, const FaceDocument& doc);
std::string format_face_document(const FaceDocument& doc);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace facerr
