#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fusegrow {

/// Dense row-major grid. Used for luminance images, masks and the value
/// planes of disparity maps.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) throw std::invalid_argument("negative grid size");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  bool contains(int u, int v) const {
    return u >= 0 && v >= 0 && u < width_ && v < height_;
  }

  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(u);
  }

  T& operator()(int u, int v) { return data_[index(u, v)]; }
  const T& operator()(int u, int v) const { return data_[index(u, v)]; }

  T* row(int v) { return data_.data() + index(0, v); }
  const T* row(int v) const { return data_.data() + index(0, v); }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Byte mask; nonzero means set. std::vector<bool> is avoided so rows can be
/// written concurrently.
using Mask = Grid<std::uint8_t>;

/// Luminance on [0,1].
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, float fill = 0.0f);

  /// Validates that every sample is finite and inside [0,1].
  static GrayImage from_values(int width, int height, std::vector<float> values);

  int width() const { return pixels_.width(); }
  int height() const { return pixels_.height(); }
  bool contains(int u, int v) const { return pixels_.contains(u, v); }

  float operator()(int u, int v) const { return pixels_(u, v); }
  /// Writes are clamped to [0,1].
  void set(int u, int v, float value);

  const float* row(int v) const { return pixels_.row(v); }
  std::span<const float> values() const { return pixels_.values(); }

 private:
  Grid<float> pixels_;
};

/// Disparity in pixels plus a validity mask. Values of invalid pixels are
/// meaningless; always consult valid().
class DisparityMap {
 public:
  DisparityMap() = default;
  DisparityMap(int width, int height);

  int width() const { return values_.width(); }
  int height() const { return values_.height(); }
  bool contains(int u, int v) const { return values_.contains(u, v); }

  bool valid(int u, int v) const { return valid_(u, v) != 0; }
  float value(int u, int v) const { return values_(u, v); }
  std::optional<float> at(int u, int v) const {
    if (!valid(u, v)) return std::nullopt;
    return values_(u, v);
  }

  /// Throws if value is not finite.
  void set(int u, int v, float value);
  void invalidate(int u, int v);

  const Mask& mask() const { return valid_; }
  std::size_t valid_count() const;

  /// Equality over valid pixels; values behind invalid pixels are ignored.
  friend bool operator==(const DisparityMap& a, const DisparityMap& b);

 private:
  Grid<float> values_;
  Mask valid_;
};

/// The prior map shares the disparity-map representation.
using PriorMap = DisparityMap;

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};
using ColorImage = Grid<Rgb>;

/// n*n samples centred on a pixel, row-major.
struct Window {
  int n = 0;
  std::vector<float> samples;
};

/// True when the n*n window centred at (u,v) lies entirely inside the image.
inline bool window_fits(int width, int height, int u, int v, int n) {
  const int r = n / 2;
  return u - r >= 0 && v - r >= 0 && u + r < width && v + r < height;
}

/// Returns std::nullopt when any sample would fall outside the image.
/// Throws std::invalid_argument for even or non-positive n.
std::optional<Window> extract_window(const GrayImage& img, int u, int v, int n);

/// ITU-R 601 luma of linear channel values.
inline double luma(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

}  // namespace fusegrow
