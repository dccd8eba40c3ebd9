#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "attnkit/attention_map.hpp"
#include "attnkit/image.hpp"
#include "attnkit/knowledge.hpp"

namespace attnkit {

enum class MapNormalization { kSum, kSoftmax };

/// Reads an attention map. Supported: .attn (raw float32), .pgm (P5, 8-bit),
/// .png (8-bit grayscale). Grayscale intensities go through the requested
/// normalization; .attn payloads already within mass tolerance are adopted
/// unchanged so round trips are exact.
AttentionMap load_map(const std::filesystem::path& path,
                      MapNormalization normalization = MapNormalization::kSum);

/// Writes an attention map. .attn stores float32 values losslessly; .pgm and
/// .png rescale so the peak value maps to 255.
void save_map(const AttentionMap& map, const std::filesystem::path& path);

/// Reads an RGB image (.png or .ppm P6); grayscale PNG is replicated to RGB.
Image load_image(const std::filesystem::path& path);

/// Writes an RGB image (.png or .ppm P6), rounding to 8-bit.
void save_image(const Image& image, const std::filesystem::path& path);

/// Reads an 8-bit mask file (.png or .pgm); any nonzero intensity is 1.
BinaryMask load_mask(const std::filesystem::path& path);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

/// One JSON-lines manifest row. Unknown fields survive round trips through
/// `extra` (values kept as serialized JSON).
struct ManifestRow {
  std::string id;
  std::string image;                       ///< image path, relative to the manifest
  std::map<std::string, std::string> maps; ///< pseudo-label source name -> path
  std::string attention;                   ///< predicted-map path, if any
  std::string mask;                        ///< instance-annotation path, if any
  std::string split;

  // Corruption provenance.
  std::string source;
  std::string kind;
  std::optional<int> severity;
  std::optional<std::uint64_t> seed;
  std::optional<bool> ok;
  std::string error;

  std::map<std::string, std::string> extra;
};

std::vector<ManifestRow> load_manifest(const std::filesystem::path& path);

/// Atomic write (temp file + rename); a crashed run never leaves a readable
/// truncated manifest behind.
void save_manifest(const std::vector<ManifestRow>& rows, const std::filesystem::path& path);

/// RLE-encoded instance annotations for one image: alternating background /
/// foreground run lengths, row-major, starting with background.
struct InstanceAnnotationFile {
  struct Entry {
    std::string image_id;
    int width = 0;
    int height = 0;
    std::vector<Instance> instances;
  };
  std::vector<Entry> entries;
};

InstanceAnnotationFile load_instance_annotations(const std::filesystem::path& path);
void save_instance_annotations(const InstanceAnnotationFile& file,
                               const std::filesystem::path& path);

BinaryMask decode_rle_mask(int width, int height, const std::vector<long long>& runs);
std::vector<long long> encode_rle_mask(const BinaryMask& mask);

}  // namespace attnkit
