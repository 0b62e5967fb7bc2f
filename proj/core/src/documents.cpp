#include "facerr/documents.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "facerr/error.hpp"

namespace facerr {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string token;
  while (in >> token) {
    double v = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw Error(ErrorKind::kFormat, "'" + key + "': not a finite number: '" + token + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> numbers(const KeyValues& kv, const std::string& key, std::size_t count) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw Error(ErrorKind::kFormat, "missing key '" + key + "'");
  auto v = parse_numbers(key, it->second);
  if (v.size() != count) {
    throw Error(ErrorKind::kFormat, "'" + key + "' needs " + std::to_string(count) + " value(s), got " +
                                        std::to_string(v.size()));
  }
  return v;
}

std::string format_number(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kFormat, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::kFormat, "line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second) {
      throw Error(ErrorKind::kFormat, "duplicate key '" + key + "'");
    }
  }
  return kv;
}

Pose pose_from_key_values(const KeyValues& kv) {
  Pose pose;
  pose.f = numbers(kv, "f", 1)[0];
  const auto h = numbers(kv, "h2d", 2);
  pose.h2d = Vec2(h[0], h[1]);

  const bool has_matrix = kv.contains("R");
  const bool has_euler = kv.contains("yaw") || kv.contains("pitch") || kv.contains("roll");
  if (has_matrix && has_euler) throw Error(ErrorKind::kFormat, "give either R or yaw/pitch/roll, not both");
  if (has_matrix) {
    const auto r = numbers(kv, "R", 9);
    for (int i = 0; i < 9; ++i) pose.R(i / 3, i % 3) = r[static_cast<std::size_t>(i)];
  } else {
    auto angle = [&](const char* key) { return kv.contains(key) ? numbers(kv, key, 1)[0] : 0.0; };
    pose.R = euler_to_matrix({deg_to_rad(angle("yaw")), deg_to_rad(angle("pitch")), deg_to_rad(angle("roll"))});
  }
  try {
    validate_pose(pose);
  } catch (const Error& e) {
    throw Error(ErrorKind::kFormat, std::string("invalid pose: ") + e.what());
  }
  return pose;
}

Pose parse_pose_document(const std::string& text) { return pose_from_key_values(parse_key_values(text)); }

std::string format_pose_document(const Pose& pose) {
  std::ostringstream out;
  out << "f = " << format_number(pose.f) << '\n';
  out << "h2d = " << format_number(pose.h2d.x()) << ' ' << format_number(pose.h2d.y()) << '\n';
  out << "R =";
  for (int i = 0; i < 9; ++i) out << ' ' << format_number(pose.R(i / 3, i % 3));
  out << '\n';
  return out.str();
}

std::string format_face_document(const FaceDocument& doc) {
  std::ostringstream out;
  out << "model = " << doc.model.generic_string() << '\n';
  out << "alpha_id =";
  for (Eigen::Index i = 0; i < doc.alpha_id.size(); ++i) out << ' ' << format_number(doc.alpha_id[i]);
  out << "\nalpha_exp =";
  for (Eigen::Index i = 0; i < doc.alpha_exp.size(); ++i) out << ' ' << format_number(doc.alpha_exp[i]);
  out << '\n' << format_pose_document(doc.pose);
  return out.str();
}

FaceDocument read_face_document(const std::filesystem::path& path) {
  const KeyValues kv = parse_key_values(read_text_file(path));
  FaceDocument doc;
  const auto model = kv.find("model");
  if (model == kv.end() || model->second.empty()) throw Error(ErrorKind::kFormat, "missing key 'model'");
  doc.model = model->second;
  if (doc.model.is_relative()) doc.model = path.parent_path() / doc.model;
  auto vec = [&](const char* key) {
    const auto it = kv.find(key);
    const auto v = it == kv.end() ? std::vector<double>{} : parse_numbers(key, it->second);
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  doc.alpha_id = vec("alpha_id");
  doc.alpha_exp = vec("alpha_exp");
  doc.pose = pose_from_key_values(kv);
  return doc;
}

void write_face_document(const std::filesystem::path& path, const FaceDocument& doc) {
  write_text_file(path, format_face_document(doc));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

}  // namespace facerr
