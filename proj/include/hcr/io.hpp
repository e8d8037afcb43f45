#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hcr/matrix.hpp"
#include "hcr/parts.hpp"

namespace hcr {

// Feature-sequence container (.hcrf): "HCRF" magic, u8 version = 1,
// u32-LE row count T, u32-LE feature count d, then T*d float32-LE values
// row-major. Exactly 13 + 4*T*d bytes; parsing rejects anything else.
Matrix read_hcrf(const std::filesystem::path& path);
void write_hcrf(const std::filesystem::path& path, const Matrix& data);

// Heatmap container (.hcrh): "HCRH" magic, u8 version = 1, u32-LE C/H/W,
// then C*H*W float32-LE values. strict_range additionally requires values in
// [0, 1] on load.
HeatmapStack read_hcrh(const std::filesystem::path& path, bool strict_range = true);
void write_hcrh(const std::filesystem::path& path, const HeatmapStack& stack);

// Dataset manifest: {"items": [{"file": ..., "label": ..., "id": ...}]}.
// Paths are kept as written; resolve them against the manifest's directory.
struct ManifestItem {
  std::string file;
  std::string label;
  std::string id;
};
std::vector<ManifestItem> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestItem>& items);

// Whole-file helpers; writes go through a temp file + rename so readers never
// observe a partial file.
std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace hcr
