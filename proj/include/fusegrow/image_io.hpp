#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fusegrow/image.hpp"

namespace fusegrow {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undecoded samples as stored in a PNM or PNG file (8 or 16 bit, 1-4
/// channels, interleaved).
struct RawImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::uint32_t maxval = 0;
  std::vector<std::uint16_t> samples;

  std::uint16_t at(int u, int v, int c) const {
    return samples[(static_cast<std::size_t>(v) * width + u) * channels + c];
  }
};

/// Reads PGM (P5), PPM (P6) or PNG; the format is sniffed from the magic bytes.
RawImage read_raw_image(const std::filesystem::path& path);

/// Luminance on [0,1]. Colour goes through ITU-R 601 weights, alpha is ignored.
GrayImage load_gray(const std::filesystem::path& path);

/// PFM, little-endian, bottom-to-top rows. Invalid pixels are written as +inf.
void save_disparity_pfm(const DisparityMap& map, const std::filesystem::path& path);
std::string encode_disparity_pfm(const DisparityMap& map);

/// +inf and NaN payloads become invalid pixels. Valid values are multiplied by
/// `scale`.
DisparityMap load_disparity_pfm(const std::filesystem::path& path, double scale = 1.0);
DisparityMap decode_disparity_pfm(const std::string& bytes, double scale = 1.0);

/// Integer-coded disparity image (PGM or PNG, first channel). Zero marks an
/// unknown disparity; other samples are multiplied by `scale`.
DisparityMap load_disparity_image(const std::filesystem::path& path, double scale = 1.0);

/// Dispatches on extension: .pfm goes to load_disparity_pfm, anything else to
/// load_disparity_image.
DisparityMap load_disparity(const std::filesystem::path& path, double scale = 1.0);

/// Pixels equal to the sample maximum (255 for 8-bit) are set.
Mask load_mask(const std::filesystem::path& path);

/// .png writes PNG, anything else binary PPM.
void save_color(const ColorImage& img, const std::filesystem::path& path);

/// 8-bit grayscale PGM or PNG (by extension) of a [0,1] image.
void save_gray(const GrayImage& img, const std::filesystem::path& path);

std::string read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::string& bytes);

}  // namespace fusegrow
