#include "fusegrow/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fusegrow {

GrayImage::GrayImage(int width, int height, float fill) : pixels_(width, height, fill) {
  if (!(fill >= 0.0f && fill <= 1.0f)) throw std::invalid_argument("luminance outside [0,1]");
}

GrayImage GrayImage::from_values(int width, int height, std::vector<float> values) {
  if (width < 1 || height < 1) throw std::invalid_argument("image must be at least 1x1");
  if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw std::invalid_argument("sample count does not match image size");
  GrayImage img(width, height);
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      const float x = values[img.pixels_.index(u, v)];
      if (!std::isfinite(x) || x < 0.0f || x > 1.0f)
        throw std::invalid_argument("luminance outside [0,1] at (" + std::to_string(u) + "," +
                                    std::to_string(v) + ")");
      img.pixels_(u, v) = x;
    }
  }
  return img;
}

void GrayImage::set(int u, int v, float value) {
  pixels_(u, v) = std::isnan(value) ? 0.0f : std::clamp(value, 0.0f, 1.0f);
}

DisparityMap::DisparityMap(int width, int height)
    : values_(width, height, 0.0f), valid_(width, height, 0) {}

void DisparityMap::set(int u, int v, float value) {
  if (!std::isfinite(value)) throw std::invalid_argument("disparity must be finite");
  values_(u, v) = value;
  valid_(u, v) = 1;
}

void DisparityMap::invalidate(int u, int v) {
  values_(u, v) = 0.0f;
  valid_(u, v) = 0;
}

std::size_t DisparityMap::valid_count() const {
  const auto m = valid_.values();
  return static_cast<std::size_t>(std::count_if(m.begin(), m.end(), [](auto x) { return x != 0; }));
}

bool operator==(const DisparityMap& a, const DisparityMap& b) {
  if (a.width() != b.width() || a.height() != b.height()) return false;
  if (a.valid_ != b.valid_) return false;
  for (int v = 0; v < a.height(); ++v)
    for (int u = 0; u < a.width(); ++u)
      if (a.valid(u, v) && a.value(u, v) != b.value(u, v)) return false;
  return true;
}

std::optional<Window> extract_window(const GrayImage& img, int u, int v, int n) {
  if (n <= 0 || n % 2 == 0) throw std::invalid_argument("window side must be odd and positive");
  if (!window_fits(img.width(), img.height(), u, v, n)) return std::nullopt;
  const int r = n / 2;
  Window w;
  w.n = n;
  w.samples.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int y = v - r; y <= v + r; ++y) {
    const float* row = img.row(y);
    w.samples.insert(w.samples.end(), row + (u - r), row + (u + r + 1));
  }
  return w;
}

}  // namespace fusegrow
