#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>

#include "facerr/error.hpp"
#include "facerr/morphable_model.hpp"

// Layout: UTF-8 header of `key=value` lines ending with an empty line, then
// little-endian blobs: mean_shape (f32), id_basis (f32, column-major),
// exp_basis (f32, column-major), triangle indices (u32).

namespace facerr {
namespace {

constexpr std::string_view kMagic = "FACERR-MODEL-v1";

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

template <typename Matrix>
void put_floats(std::vector<std::uint8_t>& out, const Matrix& m) {
  // Eigen's default storage is column-major, matching the file.
  for (Eigen::Index i = 0; i < m.size(); ++i) put_u32(out, std::bit_cast<std::uint32_t>(m.data()[i]));
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos || value.size() > 10) {
    throw Error(ErrorKind::kFormat, "header field '" + key + "' is not a count: '" + value + "'");
  }
  return std::stoull(value);
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const MorphableModel& model) {
  std::ostringstream header;
  header << "magic=" << kMagic << '\n'
         << "n_vertices=" << model.n_vertices() << '\n'
         << "k_id=" << model.k_id() << '\n'
         << "k_exp=" << model.k_exp() << '\n'
         << "n_triangles=" << model.triangles().size() << '\n'
         << '\n';
  const std::string text = header.str();
  std::vector<std::uint8_t> out(text.begin(), text.end());
  put_floats(out, model.mean_shape());
  put_floats(out, model.id_basis());
  put_floats(out, model.exp_basis());
  for (const auto& t : model.triangles()) {
    for (auto i : t) put_u32(out, i);
  }
  return out;
}

MorphableModel deserialize_model(const std::vector<std::uint8_t>& bytes) {
  // Header ends at the first "\n\n".
  std::size_t header_end = std::string::npos;
  for (std::size_t i = 0; i + 1 < bytes.size() && i < 4096; ++i) {
    if (bytes[i] == '\n' && bytes[i + 1] == '\n') {
      header_end = i + 2;
      break;
    }
  }
  const std::string head(bytes.begin(),
                         bytes.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(
                                             header_end == std::string::npos ? bytes.size() : header_end,
                                             bytes.size())));
  if (head.rfind("magic=", 0) != 0 || head.compare(6, kMagic.size(), kMagic) != 0 ||
      head.size() <= 6 + kMagic.size() || head[6 + kMagic.size()] != '\n') {
    throw Error(ErrorKind::kFormat, "not a model file (bad magic)");
  }
  if (header_end == std::string::npos) throw Error(ErrorKind::kFormat, "model header is not terminated");

  std::map<std::string, std::uint64_t> fields;
  std::istringstream lines(head);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::kFormat, "malformed header line: '" + line + "'");
    const std::string key = line.substr(0, eq);
    if (key == "magic") continue;
    if (key != "n_vertices" && key != "k_id" && key != "k_exp" && key != "n_triangles") {
      throw Error(ErrorKind::kFormat, "unknown header field '" + key + "'");
    }
    if (!fields.emplace(key, parse_count(key, line.substr(eq + 1))).second) {
      throw Error(ErrorKind::kFormat, "duplicate header field '" + key + "'");
    }
  }
  for (const char* key : {"n_vertices", "k_id", "k_exp", "n_triangles"}) {
    if (!fields.contains(key)) throw Error(ErrorKind::kFormat, std::string("missing header field '") + key + "'");
  }
  const std::uint64_t n = fields["n_vertices"];
  const std::uint64_t k_id = fields["k_id"];
  const std::uint64_t k_exp = fields["k_exp"];
  const std::uint64_t n_tri = fields["n_triangles"];
  if (n == 0) throw Error(ErrorKind::kFormat, "n_vertices must be positive");

  const std::uint64_t words = 3 * n * (1 + k_id + k_exp) + 3 * n_tri;
  const std::uint64_t expected = header_end + 4 * words;
  if (bytes.size() < expected) {
    throw Error(ErrorKind::kTruncated, "model blob truncated: have " + std::to_string(bytes.size()) +
                                           " bytes, header implies " + std::to_string(expected));
  }
  if (bytes.size() > expected) {
    throw Error(ErrorKind::kDimensionMismatch,
                "model blob has " + std::to_string(bytes.size() - expected) +
                    " bytes beyond what the header dimensions describe");
  }

  const std::uint8_t* p = bytes.data() + header_end;
  auto read_floats = [&p](float* dst, std::uint64_t count) {
    for (std::uint64_t i = 0; i < count; ++i, p += 4) dst[i] = std::bit_cast<float>(get_u32(p));
  };
  const auto rows = static_cast<Eigen::Index>(3 * n);
  Eigen::VectorXf mean(rows);
  Eigen::MatrixXf id_basis(rows, static_cast<Eigen::Index>(k_id));
  Eigen::MatrixXf exp_basis(rows, static_cast<Eigen::Index>(k_exp));
  read_floats(mean.data(), 3 * n);
  read_floats(id_basis.data(), 3 * n * k_id);
  read_floats(exp_basis.data(), 3 * n * k_exp);
  std::vector<Triangle> triangles(n_tri);
  for (auto& t : triangles) {
    for (auto& i : t) {
      i = get_u32(p);
      p += 4;
    }
  }
  return MorphableModel(std::move(mean), std::move(id_basis), std::move(exp_basis), std::move(triangles));
}

void save_model(const MorphableModel& model, const std::filesystem::path& path) {
  const auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

MorphableModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace facerr
