#include "fusegrow/image_io.hpp"

#include <png.h>

#include <bit>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

namespace fusegrow {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open '" + path.string() + "': " + std::strerror(errno));
  return f;
}

// PNM header tokenizer: whitespace-separated tokens, '#' comments to end of line.
class HeaderReader {
 public:
  explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

  std::string token() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) throw IoError("truncated header");
    return bytes_.substr(start, pos_ - start);
  }

  long integer() {
    const std::string t = token();
    char* end = nullptr;
    const long value = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size()) throw IoError("malformed header field '" + t + "'");
    return value;
  }

  // The raster starts after exactly one whitespace byte.
  std::size_t payload_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
      throw IoError("missing separator before raster");
    return pos_ + 1;
  }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

RawImage decode_pnm(const std::string& bytes) {
  HeaderReader header(bytes);
  const std::string magic = header.token();
  int channels = 0;
  if (magic == "P5") channels = 1;
  else if (magic == "P6") channels = 3;
  else throw IoError("unsupported PNM type '" + magic + "'");

  const long w = header.integer();
  const long h = header.integer();
  const long maxval = header.integer();
  if (w <= 0 || h <= 0) throw IoError("zero image dimensions");
  if (maxval <= 0 || maxval > 65535) throw IoError("unsupported PNM maxval");
  const std::size_t offset = header.payload_offset();

  RawImage raw;
  raw.width = static_cast<int>(w);
  raw.height = static_cast<int>(h);
  raw.channels = channels;
  raw.maxval = static_cast<std::uint32_t>(maxval);
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * channels;
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  if (bytes.size() < offset + count * bytes_per) throw IoError("truncated PNM raster");
  raw.samples.resize(count);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
  for (std::size_t i = 0; i < count; ++i) {
    // 16-bit PNM samples are big-endian.
    raw.samples[i] = bytes_per == 2 ? static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1])
                                    : p[i];
  }
  return raw;
}

RawImage decode_png(const std::filesystem::path& path) {
  FilePtr f = open_file(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng init failed");
  }
  RawImage raw;
  std::vector<png_bytep> rows;
  std::vector<unsigned char> buffer;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("corrupt PNG '" + path.string() + "'");
  }
  png_init_io(png, f.get());
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS))
    png_set_strip_alpha(png);
  png_read_update_info(png, info);

  raw.width = static_cast<int>(png_get_image_width(png, info));
  raw.height = static_cast<int>(png_get_image_height(png, info));
  raw.channels = png_get_channels(png, info);
  const int out_depth = png_get_bit_depth(png, info);
  raw.maxval = out_depth == 16 ? 65535u : 255u;
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  buffer.resize(rowbytes * static_cast<std::size_t>(raw.height));
  rows.resize(static_cast<std::size_t>(raw.height));
  for (int y = 0; y < raw.height; ++y) rows[y] = buffer.data() + rowbytes * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (raw.width <= 0 || raw.height <= 0) throw IoError("zero image dimensions");
  const std::size_t count = static_cast<std::size_t>(raw.width) * raw.height * raw.channels;
  raw.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    raw.samples[i] = out_depth == 16
                         ? static_cast<std::uint16_t>((buffer[2 * i] << 8) | buffer[2 * i + 1])
                         : buffer[i];
  }
  return raw;
}

bool has_extension(const std::filesystem::path& path, const char* ext) {
  std::string e = path.extension().string();
  for (auto& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return e == ext;
}

void write_png_rgb(const std::filesystem::path& path, int width, int height, int channels,
                   const std::vector<unsigned char>& data) {
  FilePtr f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing PNG '" + path.string() + "'");
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y)
    png_write_row(png, data.data() + static_cast<std::size_t>(y) * width * channels);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

float load_le_float(const unsigned char* p, bool little_endian) {
  std::uint32_t bits = 0;
  if (little_endian) {
    bits = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
           std::uint32_t(p[3]) << 24;
  } else {
    bits = std::uint32_t(p[3]) | std::uint32_t(p[2]) << 8 | std::uint32_t(p[1]) << 16 |
           std::uint32_t(p[0]) << 24;
  }
  return std::bit_cast<float>(bits);
}

void store_le_float(std::string& out, float value) {
  const auto bits = std::bit_cast<std::uint32_t>(value);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

}  // namespace

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

RawImage read_raw_image(const std::filesystem::path& path) {
  std::string head;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    head.resize(8);
    in.read(head.data(), 8);
    head.resize(static_cast<std::size_t>(in.gcount()));
  }
  if (head.size() >= 8 && png_sig_cmp(reinterpret_cast<png_const_bytep>(head.data()), 0, 8) == 0)
    return decode_png(path);
  if (head.size() >= 2 && head[0] == 'P' && (head[1] == '5' || head[1] == '6'))
    return decode_pnm(read_file_bytes(path));
  throw IoError("unsupported image format '" + path.string() + "'");
}

GrayImage load_gray(const std::filesystem::path& path) {
  const RawImage raw = read_raw_image(path);
  const double scale = 1.0 / static_cast<double>(raw.maxval);
  std::vector<float> values(static_cast<std::size_t>(raw.width) * raw.height);
  for (int v = 0; v < raw.height; ++v) {
    for (int u = 0; u < raw.width; ++u) {
      double y = 0.0;
      if (raw.channels >= 3) {
        y = luma(raw.at(u, v, 0), raw.at(u, v, 1), raw.at(u, v, 2)) * scale;
      } else {
        y = raw.at(u, v, 0) * scale;
      }
      values[static_cast<std::size_t>(v) * raw.width + u] =
          static_cast<float>(std::min(1.0, std::max(0.0, y)));
    }
  }
  return GrayImage::from_values(raw.width, raw.height, std::move(values));
}

std::string encode_disparity_pfm(const DisparityMap& map) {
  std::string out = "Pf\n" + std::to_string(map.width()) + " " + std::to_string(map.height()) +
                    "\n-1.0\n";
  out.reserve(out.size() + static_cast<std::size_t>(map.width()) * map.height() * 4);
  const float inf = std::numeric_limits<float>::infinity();
  for (int v = map.height() - 1; v >= 0; --v)
    for (int u = 0; u < map.width(); ++u) store_le_float(out, map.valid(u, v) ? map.value(u, v) : inf);
  return out;
}

void save_disparity_pfm(const DisparityMap& map, const std::filesystem::path& path) {
  write_file_bytes(path, encode_disparity_pfm(map));
}

DisparityMap decode_disparity_pfm(const std::string& bytes, double scale) {
  HeaderReader header(bytes);
  const std::string magic = header.token();
  if (magic != "Pf") throw IoError("not a grayscale PFM (magic '" + magic + "')");
  const long w = header.integer();
  const long h = header.integer();
  if (w <= 0 || h <= 0) throw IoError("malformed PFM dimensions");
  const std::string scale_token = header.token();
  char* end = nullptr;
  const double file_scale = std::strtod(scale_token.c_str(), &end);
  if (end != scale_token.c_str() + scale_token.size() || file_scale == 0.0 ||
      !std::isfinite(file_scale))
    throw IoError("malformed PFM scale '" + scale_token + "'");
  const std::size_t offset = header.payload_offset();
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() < offset + count * 4) throw IoError("truncated PFM payload");

  const bool little = file_scale < 0.0;
  DisparityMap map(static_cast<int>(w), static_cast<int>(h));
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
  for (int row = 0; row < h; ++row) {
    const int v = static_cast<int>(h) - 1 - row;
    for (int u = 0; u < w; ++u, p += 4) {
      const float x = load_le_float(p, little);
      if (std::isfinite(x)) map.set(u, v, scale == 1.0 ? x : static_cast<float>(x * scale));
    }
  }
  return map;
}

DisparityMap load_disparity_pfm(const std::filesystem::path& path, double scale) {
  return decode_disparity_pfm(read_file_bytes(path), scale);
}

DisparityMap load_disparity_image(const std::filesystem::path& path, double scale) {
  const RawImage raw = read_raw_image(path);
  DisparityMap map(raw.width, raw.height);
  for (int v = 0; v < raw.height; ++v)
    for (int u = 0; u < raw.width; ++u)
      if (const auto s = raw.at(u, v, 0); s != 0) map.set(u, v, static_cast<float>(s * scale));
  return map;
}

DisparityMap load_disparity(const std::filesystem::path& path, double scale) {
  if (has_extension(path, ".pfm")) return load_disparity_pfm(path, scale);
  return load_disparity_image(path, scale);
}

Mask load_mask(const std::filesystem::path& path) {
  const RawImage raw = read_raw_image(path);
  Mask mask(raw.width, raw.height, 0);
  for (int v = 0; v < raw.height; ++v)
    for (int u = 0; u < raw.width; ++u) mask(u, v) = raw.at(u, v, 0) == raw.maxval ? 1 : 0;
  return mask;
}

void save_color(const ColorImage& img, const std::filesystem::path& path) {
  std::vector<unsigned char> data;
  data.reserve(img.size() * 3);
  for (const Rgb& c : img.values()) {
    data.push_back(c.r);
    data.push_back(c.g);
    data.push_back(c.b);
  }
  if (has_extension(path, ".png")) {
    write_png_rgb(path, img.width(), img.height(), 3, data);
    return;
  }
  std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                    "\n255\n";
  out.append(data.begin(), data.end());
  write_file_bytes(path, out);
}

void save_gray(const GrayImage& img, const std::filesystem::path& path) {
  std::vector<unsigned char> data;
  data.reserve(static_cast<std::size_t>(img.width()) * img.height());
  for (float x : img.values()) data.push_back(static_cast<unsigned char>(std::lround(x * 255.0f)));
  if (has_extension(path, ".png")) {
    write_png_rgb(path, img.width(), img.height(), 1, data);
    return;
  }
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                    "\n255\n";
  out.append(data.begin(), data.end());
  write_file_bytes(path, out);
}

}  // namespace fusegrow
