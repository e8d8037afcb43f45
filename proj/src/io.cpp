#include "hcr/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "hcr/error.hpp"

namespace hcr {
namespace {

void append_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

std::uint32_t read_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void append_f32le(std::string& out, double value, const std::filesystem::path& path) {
  if (!std::isfinite(value)) {
    throw InvalidInput(path.string() + ": refusing to write non-finite value");
  }
  const float narrowed = static_cast<float>(value);
  if (!std::isfinite(narrowed)) {
    throw InvalidInput(path.string() + ": value " + std::to_string(value) +
                       " is not representable as float32");
  }
  append_u32le(out, std::bit_cast<std::uint32_t>(narrowed));
}

double read_f32le(const unsigned char* p, const std::filesystem::path& path) {
  const float value = std::bit_cast<float>(read_u32le(p));
  if (!std::isfinite(value)) {
    throw InvalidInput(path.string() + ": payload contains a non-finite value");
  }
  return static_cast<double>(value);
}

constexpr std::size_t kSeqHeaderBytes = 13;   // magic + version + T + d
constexpr std::size_t kGridHeaderBytes = 17;  // magic + version + C + H + W

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on " + path.string());
  return bytes;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("write failed on " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

Matrix read_hcrf(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < kSeqHeaderBytes) {
    throw FormatError(path.string() + ": truncated header");
  }
  if (bytes.compare(0, 4, "HCRF") != 0) throw FormatError(path.string() + ": bad magic");
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  if (data[4] != 1) {
    throw FormatError(path.string() + ": unsupported version " + std::to_string(data[4]));
  }
  const std::uint32_t rows = read_u32le(data + 5);
  const std::uint32_t cols = read_u32le(data + 9);
  if (rows == 0 || cols == 0) throw FormatError(path.string() + ": empty sequence");
  if (rows > static_cast<std::uint32_t>(std::numeric_limits<int>::max()) ||
      cols > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
    throw FormatError(path.string() + ": dimensions too large");
  }
  const std::uint64_t expected =
      kSeqHeaderBytes + 4ULL * static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols);
  if (bytes.size() != expected) {
    throw FormatError(path.string() + ": payload holds " +
                      std::to_string(bytes.size() - kSeqHeaderBytes) + " bytes, expected " +
                      std::to_string(expected - kSeqHeaderBytes));
  }

  Matrix m(static_cast<int>(rows), static_cast<int>(cols));
  for (std::size_t i = 0; i < m.values().size(); ++i) {
    m.values()[i] = read_f32le(data + kSeqHeaderBytes + 4 * i, path);
  }
  return m;
}

void write_hcrf(const std::filesystem::path& path, const Matrix& data) {
  if (data.rows() < 1 || data.cols() < 1) {
    throw InvalidArgument("refusing to write an empty sequence to " + path.string());
  }
  std::string bytes;
  bytes.reserve(kSeqHeaderBytes + 4 * data.values().size());
  bytes += "HCRF";
  bytes.push_back(static_cast<char>(1));
  append_u32le(bytes, static_cast<std::uint32_t>(data.rows()));
  append_u32le(bytes, static_cast<std::uint32_t>(data.cols()));
  for (double v : data.values()) append_f32le(bytes, v, path);
  write_file_atomic(path, bytes);
}

HeatmapStack read_hcrh(const std::filesystem::path& path, bool strict_range) {
  const std::string bytes = read_file(path);
  if (bytes.size() < kGridHeaderBytes) {
    throw FormatError(path.string() + ": truncated header");
  }
  if (bytes.compare(0, 4, "HCRH") != 0) throw FormatError(path.string() + ": bad magic");
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  if (data[4] != 1) {
    throw FormatError(path.string() + ": unsupported version " + std::to_string(data[4]));
  }
  const std::uint32_t channels = read_u32le(data + 5);
  const std::uint32_t height = read_u32le(data + 9);
  const std::uint32_t width = read_u32le(data + 13);
  if (channels == 0 || height == 0 || width == 0) {
    throw FormatError(path.string() + ": empty heatmap stack");
  }
  const std::uint32_t int_max = static_cast<std::uint32_t>(std::numeric_limits<int>::max());
  if (channels > int_max || height > int_max || width > int_max) {
    throw FormatError(path.string() + ": dimensions too large");
  }
  const std::uint64_t cells = static_cast<std::uint64_t>(channels) *
                              static_cast<std::uint64_t>(height) *
                              static_cast<std::uint64_t>(width);
  const std::uint64_t expected = kGridHeaderBytes + 4ULL * cells;
  if (bytes.size() != expected) {
    throw FormatError(path.string() + ": payload holds " +
                      std::to_string(bytes.size() - kGridHeaderBytes) + " bytes, expected " +
                      std::to_string(expected - kGridHeaderBytes));
  }

  HeatmapStack stack(static_cast<int>(channels), static_cast<int>(height),
                     static_cast<int>(width));
  for (std::size_t i = 0; i < stack.values.size(); ++i) {
    stack.values[i] = read_f32le(data + kGridHeaderBytes + 4 * i, path);
    if (strict_range && (stack.values[i] < 0.0 || stack.values[i] > 1.0)) {
      throw InvalidInput(path.string() + ": heatmap value " +
                         std::to_string(stack.values[i]) + " outside [0, 1]");
    }
  }
  return stack;
}

void write_hcrh(const std::filesystem::path& path, const HeatmapStack& stack) {
  stack.validate(/*strict_range=*/false);
  std::string bytes;
  bytes.reserve(kGridHeaderBytes + 4 * stack.values.size());
  bytes += "HCRH";
  bytes.push_back(static_cast<char>(1));
  append_u32le(bytes, static_cast<std::uint32_t>(stack.channels));
  append_u32le(bytes, static_cast<std::uint32_t>(stack.height));
  append_u32le(bytes, static_cast<std::uint32_t>(stack.width));
  for (double v : stack.values) append_f32le(bytes, v, path);
  write_file_atomic(path, bytes);
}

std::vector<ManifestItem> read_manifest(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": invalid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object() || !doc.contains("items") || !doc["items"].is_array()) {
    throw FormatError(path.string() + ": manifest must be an object with an \"items\" array");
  }

  std::vector<ManifestItem> items;
  for (const auto& entry : doc["items"]) {
    if (!entry.is_object() || !entry.contains("file") || !entry["file"].is_string() ||
        !entry.contains("label") || !entry["label"].is_string() || !entry.contains("id") ||
        !entry["id"].is_string()) {
      throw FormatError(path.string() +
                        ": every manifest item needs string fields file, label, id");
    }
    ManifestItem item{entry["file"].get<std::string>(), entry["label"].get<std::string>(),
                      entry["id"].get<std::string>()};
    if (item.label.empty()) {
      throw FormatError(path.string() + ": item '" + item.id + "' has an empty label");
    }
    items.push_back(std::move(item));
  }
  return items;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestItem>& items) {
  nlohmann::json doc;
  doc["items"] = nlohmann::json::array();
  for (const ManifestItem& item : items) {
    doc["items"].push_back({{"file", item.file}, {"label", item.label}, {"id", item.id}});
  }
  write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace hcr
