#include "attnkit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "png_io.hpp"

namespace attnkit {

namespace {

using nlohmann::json;

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

constexpr char kAttnMagic[4] = {'A', 'T', 'T', 'N'};

void put_u32_le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (!in.good() && !in.eof()) throw IoError("failed while reading " + path.string());
  return bytes;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out.good()) throw IoError("failed while writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string());
}

RawMap raw_from_gray8(int width, int height, const std::vector<std::uint8_t>& data) {
  RawMap raw(width, height);
  for (std::size_t i = 0; i < raw.values.size(); ++i) {
    raw.values[i] = static_cast<double>(data[i]);
  }
  return raw;
}

AttentionMap normalize_raw(const RawMap& raw, MapNormalization normalization) {
  return normalization == MapNormalization::kSum ? normalize_sum(raw) : normalize_softmax(raw);
}

struct PgmPixels {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;
};

PgmPixels read_pgm(const std::filesystem::path& path) {
  const std::string bytes = read_file_bytes(path);
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) throw IoError("truncated PGM header in " + path.string());
    return bytes.substr(start, pos - start);
  };

  if (next_token() != "P5") throw IoError("not a binary PGM file: " + path.string());
  PgmPixels out;
  out.width = std::stoi(next_token());
  out.height = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (out.width < 1 || out.height < 1) throw IoError("bad PGM dimensions in " + path.string());
  if (maxval < 1 || maxval > 255) {
    throw IoError("only 8-bit PGM is supported: " + path.string());
  }
  ++pos;  // single whitespace after maxval
  const std::size_t count = static_cast<std::size_t>(out.width) * out.height;
  if (bytes.size() - pos < count) throw IoError("truncated PGM payload in " + path.string());
  out.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                  bytes.begin() + static_cast<std::ptrdiff_t>(pos + count));
  return out;
}

void write_pgm(const std::filesystem::path& path, int width, int height,
               const std::vector<std::uint8_t>& data) {
  std::string bytes = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  bytes.append(reinterpret_cast<const char*>(data.data()), data.size());
  write_file_atomic(path, bytes);
}

std::vector<std::uint8_t> quantize_peak(std::span<const double> values) {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, v);
  std::vector<std::uint8_t> out(values.size(), 0);
  if (peak <= 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(std::lround(values[i] / peak * 255.0));
  }
  return out;
}

}  // namespace

AttentionMap load_map(const std::filesystem::path& path, MapNormalization normalization) {
  const std::string ext = lower_extension(path);
  if (ext == ".attn") {
    const std::string bytes = read_file_bytes(path);
    if (bytes.size() < 12 || std::memcmp(bytes.data(), kAttnMagic, 4) != 0) {
      throw IoError("not an .attn map file: " + path.string());
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint32_t width = get_u32_le(p + 4);
    const std::uint32_t height = get_u32_le(p + 8);
    const std::size_t count = static_cast<std::size_t>(width) * height;
    if (width < 1 || height < 1 || bytes.size() != 12 + count * 4) {
      throw IoError("truncated .attn map file: " + path.string());
    }
    std::vector<double> values(count);
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t u = get_u32_le(p + 12 + i * 4);
      float f;
      std::memcpy(&f, &u, 4);
      values[i] = static_cast<double>(f);
      sum += values[i];
    }
    if (std::abs(sum - 1.0) <= kMassTolerance) {
      return AttentionMap::from_distribution(static_cast<int>(width), static_cast<int>(height),
                                             std::move(values));
    }
    return normalize_raw(RawMap(static_cast<int>(width), static_cast<int>(height), std::move(values)),
                         normalization);
  }
  if (ext == ".pgm") {
    const PgmPixels pgm = read_pgm(path);
    return normalize_raw(raw_from_gray8(pgm.width, pgm.height, pgm.data), normalization);
  }
  if (ext == ".png") {
    const detail::PngPixels png = detail::read_png(path);
    if (png.channels != 1) {
      throw IoError("attention maps must be grayscale PNG: " + path.string());
    }
    return normalize_raw(raw_from_gray8(png.width, png.height, png.data), normalization);
  }
  throw IoError("unsupported map format: " + path.string());
}

void save_map(const AttentionMap& map, const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".attn") {
    std::string bytes(kAttnMagic, 4);
    put_u32_le(bytes, static_cast<std::uint32_t>(map.width()));
    put_u32_le(bytes, static_cast<std::uint32_t>(map.height()));
    for (std::size_t i = 0; i < map.size(); ++i) {
      const float f = static_cast<float>(map[i]);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      put_u32_le(bytes, u);
    }
    write_file_atomic(path, bytes);
    return;
  }
  if (ext == ".pgm") {
    write_pgm(path, map.width(), map.height(), quantize_peak(map.values()));
    return;
  }
  if (ext == ".png") {
    detail::write_png(path, map.width(), map.height(), 1, quantize_peak(map.values()));
    return;
  }
  throw IoError("unsupported map format: " + path.string());
}

Image load_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    const detail::PngPixels png = detail::read_png(path);
    Image img(png.width, png.height);
    if (png.channels == 3) {
      for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = png.data[i] / 255.0;
    } else {
      for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const double v = png.data[i] / 255.0;
        img.data[i * 3] = img.data[i * 3 + 1] = img.data[i * 3 + 2] = v;
      }
    }
    return img;
  }
  if (ext == ".ppm") {
    const std::string bytes = read_file_bytes(path);
    std::size_t pos = 0;
    auto next_token = [&]() -> std::string {
      while (pos < bytes.size()) {
        if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
          ++pos;
        } else if (bytes[pos] == '#') {
          while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else {
          break;
        }
      }
      std::size_t start = pos;
      while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
      if (start == pos) throw IoError("truncated PPM header in " + path.string());
      return bytes.substr(start, pos - start);
    };
    if (next_token() != "P6") throw IoError("not a binary PPM file: " + path.string());
    const int width = std::stoi(next_token());
    const int height = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (width < 1 || height < 1 || maxval != 255) {
      throw IoError("only 8-bit PPM is supported: " + path.string());
    }
    ++pos;
    const std::size_t count = static_cast<std::size_t>(width) * height * 3;
    if (bytes.size() - pos < count) throw IoError("truncated PPM payload in " + path.string());
    Image img(width, height);
    for (std::size_t i = 0; i < count; ++i) {
      img.data[i] = static_cast<unsigned char>(bytes[pos + i]) / 255.0;
    }
    return img;
  }
  throw IoError("unsupported image format: " + path.string());
}

void save_image(const Image& image, const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  std::vector<std::uint8_t> data(image.data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = static_cast<std::uint8_t>(std::lround(std::clamp(image.data[i], 0.0, 1.0) * 255.0));
  }
  if (ext == ".png") {
    detail::write_png(path, image.width, image.height, 3, data);
    return;
  }
  if (ext == ".ppm") {
    std::string bytes =
        "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    bytes.append(reinterpret_cast<const char*>(data.data()), data.size());
    write_file_atomic(path, bytes);
    return;
  }
  throw IoError("unsupported image format: " + path.string());
}

BinaryMask load_mask(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;
  if (ext == ".png") {
    detail::PngPixels png = detail::read_png(path);
    if (png.channels != 1) throw IoError("masks must be grayscale PNG: " + path.string());
    width = png.width;
    height = png.height;
    data = std::move(png.data);
  } else if (ext == ".pgm") {
    PgmPixels pgm = read_pgm(path);
    width = pgm.width;
    height = pgm.height;
    data = std::move(pgm.data);
  } else {
    throw IoError("unsupported mask format: " + path.string());
  }
  BinaryMask mask(width, height);
  for (std::size_t i = 0; i < mask.size(); ++i) mask.values[i] = data[i] != 0 ? 1 : 0;
  return mask;
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<std::uint8_t> data(mask.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = mask.values[i] ? 255 : 0;
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    detail::write_png(path, mask.width, mask.height, 1, data);
  } else if (ext == ".pgm") {
    write_pgm(path, mask.width, mask.height, data);
  } else {
    throw IoError("unsupported mask format: " + path.string());
  }
}

namespace {

ManifestRow row_from_json(const json& doc) {
  ManifestRow row;
  for (const auto& [key, value] : doc.items()) {
    if (key == "id" && value.is_string()) {
      row.id = value.get<std::string>();
    } else if (key == "image" && value.is_string()) {
      row.image = value.get<std::string>();
    } else if (key == "maps" && value.is_object()) {
      for (const auto& [source, path] : value.items()) {
        row.maps[source] = path.get<std::string>();
      }
    } else if (key == "attention" && value.is_string()) {
      row.attention = value.get<std::string>();
    } else if (key == "mask" && value.is_string()) {
      row.mask = value.get<std::string>();
    } else if (key == "split" && value.is_string()) {
      row.split = value.get<std::string>();
    } else if (key == "source" && value.is_string()) {
      row.source = value.get<std::string>();
    } else if (key == "kind" && value.is_string()) {
      row.kind = value.get<std::string>();
    } else if (key == "severity" && value.is_number()) {
      row.severity = value.get<int>();
    } else if (key == "seed" && value.is_number()) {
      row.seed = value.get<std::uint64_t>();
    } else if (key == "ok" && value.is_boolean()) {
      row.ok = value.get<bool>();
    } else if (key == "error" && value.is_string()) {
      row.error = value.get<std::string>();
    } else {
      row.extra[key] = value.dump();
    }
  }
  return row;
}

json row_to_json(const ManifestRow& row) {
  json doc;
  if (!row.id.empty()) doc["id"] = row.id;
  if (!row.image.empty()) doc["image"] = row.image;
  if (!row.maps.empty()) {
    json maps = json::object();
    for (const auto& [source, path] : row.maps) maps[source] = path;
    doc["maps"] = maps;
  }
  if (!row.attention.empty()) doc["attention"] = row.attention;
  if (!row.mask.empty()) doc["mask"] = row.mask;
  if (!row.split.empty()) doc["split"] = row.split;
  if (!row.source.empty()) doc["source"] = row.source;
  if (!row.kind.empty()) doc["kind"] = row.kind;
  if (row.severity) doc["severity"] = *row.severity;
  if (row.seed) doc["seed"] = *row.seed;
  if (row.ok) doc["ok"] = *row.ok;
  if (!row.error.empty()) doc["error"] = row.error;
  for (const auto& [key, value] : row.extra) doc[key] = json::parse(value);
  return doc;
}

}  // namespace

std::vector<ManifestRow> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  std::vector<ManifestRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw IoError("manifest " + path.string() + " line " + std::to_string(line_no) + ": " +
                    e.what());
    }
    rows.push_back(row_from_json(doc));
  }
  // ids must be unique
  std::vector<std::string> ids;
  for (const ManifestRow& row : rows) {
    if (row.id.empty()) continue;
    if (std::find(ids.begin(), ids.end(), row.id) != ids.end()) {
      throw InvalidInput("duplicate manifest id: " + row.id);
    }
    ids.push_back(row.id);
  }
  return rows;
}

void save_manifest(const std::vector<ManifestRow>& rows, const std::filesystem::path& path) {
  std::string bytes;
  for (const ManifestRow& row : rows) {
    bytes += row_to_json(row).dump();
    bytes += '\n';
  }
  write_file_atomic(path, bytes);
}

BinaryMask decode_rle_mask(int width, int height, const std::vector<long long>& runs) {
  BinaryMask mask(width, height);
  std::size_t pos = 0;
  std::uint8_t value = 0;  // runs start with background
  for (long long run : runs) {
    if (run < 0 || pos + static_cast<std::size_t>(run) > mask.size()) {
      throw InvalidInput("RLE runs exceed the mask extent");
    }
    for (long long i = 0; i < run; ++i) mask.values[pos++] = value;
    value = static_cast<std::uint8_t>(1 - value);
  }
  if (pos != mask.size()) throw InvalidInput("RLE runs do not cover the mask");
  return mask;
}

std::vector<long long> encode_rle_mask(const BinaryMask& mask) {
  std::vector<long long> runs;
  std::uint8_t value = 0;
  long long run = 0;
  for (std::uint8_t v : mask.values) {
    if (v == value) {
      ++run;
    } else {
      runs.push_back(run);
      value = v;
      run = 1;
    }
  }
  runs.push_back(run);
  return runs;
}

InstanceAnnotationFile load_instance_annotations(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file_bytes(path));
  } catch (const json::parse_error& e) {
    throw IoError("cannot parse instance annotations " + path.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw IoError("instance annotation file must be a JSON array");

  InstanceAnnotationFile file;
  // Group rows by image id, preserving first-appearance order.
  for (const json& item : doc) {
    const std::string image_id = item.at("image").get<std::string>();
    const int width = item.at("width").get<int>();
    const int height = item.at("height").get<int>();
    auto it = std::find_if(file.entries.begin(), file.entries.end(),
                           [&](const auto& e) { return e.image_id == image_id; });
    if (it == file.entries.end()) {
      file.entries.push_back({image_id, width, height, {}});
      it = std::prev(file.entries.end());
    } else if (it->width != width || it->height != height) {
      throw InvalidInput("inconsistent dimensions for image " + image_id);
    }
    Instance instance;
    instance.category = item.at("category").get<std::string>();
    instance.mask = decode_rle_mask(width, height, item.at("rle").get<std::vector<long long>>());
    it->instances.push_back(std::move(instance));
  }
  return file;
}

void save_instance_annotations(const InstanceAnnotationFile& file,
                               const std::filesystem::path& path) {
  json doc = json::array();
  for (const auto& entry : file.entries) {
    for (const Instance& instance : entry.instances) {
      json item;
      item["image"] = entry.image_id;
      item["width"] = entry.width;
      item["height"] = entry.height;
      item["category"] = instance.category;
      item["rle"] = encode_rle_mask(instance.mask);
      doc.push_back(item);
    }
  }
  write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace attnkit
