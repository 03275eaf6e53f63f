#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ogn/encoding.hpp"
#include "ogn/geometry.hpp"
#include "ogn/nms.hpp"
#include "ogn/tracking.hpp"

namespace ogn::io {

/// In-memory form of an OGNT tensor file.
///
/// Layout, all little-endian:
///   "OGNT" | u16 version (1) | u8 dtype (0 = float32) | u8 ndim |
///   ndim x u32 dims | prod(dims) x float32, row-major
struct FloatTensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  std::size_t element_count() const;
  bool operator==(const FloatTensor&) const = default;
};

inline constexpr std::uint16_t kTensorVersion = 1;
inline constexpr std::uint8_t kDtypeFloat32 = 0;

std::vector<std::uint8_t> encode_tensor(const FloatTensor& t);
/// Throws kBadMagic, kUnsupportedVersion, kUnsupportedDtype, kTruncated,
/// kDimOverflow or kTrailingData.
FloatTensor decode_tensor(std::span<const std::uint8_t> bytes);

void write_tensor(const FloatTensor& t, const std::filesystem::path& path);
FloatTensor read_tensor(const std::filesystem::path& path);

FloatTensor to_tensor(const Grid3& g);
/// Expects exactly three dims (channels, rows, cols).
Grid3 grid_from_tensor(const FloatTensor& t);

/// Offsets are stored as one [2, K, H, W] tensor, x plane first.
FloatTensor offsets_to_tensor(const OffsetSet& o);
OffsetSet offsets_from_tensor(const FloatTensor& t);

inline constexpr int kSchemaVersion = 1;

struct InstanceRecord {
  ScoredInstance instance;
  std::optional<int> track_id;
  std::optional<Embedding> embedding;
};

struct InstanceFrame {
  int frame_id = 0;
  std::vector<InstanceRecord> instances;
};

struct BoxFrame {
  int frame_id = 0;
  std::vector<Box> boxes;
};

nlohmann::json instances_to_json(const std::vector<InstanceFrame>& frames);
/// Throws kSchema for structural problems (including a final_score that is
/// not box_score * pose_score) and kUnsupportedVersion for other schema
/// versions.
std::vector<InstanceFrame> instances_from_json(const nlohmann::json& doc);

nlohmann::json boxes_to_json(const std::vector<BoxFrame>& frames);
std::vector<BoxFrame> boxes_from_json(const nlohmann::json& doc);

/// Parses a file; I/O failures throw kIo and malformed JSON throws kSchema.
nlohmann::json read_json(const std::filesystem::path& path);
/// Writes with two-space indentation and a trailing newline.
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace ogn::io
