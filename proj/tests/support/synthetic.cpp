#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fusegrow::testing {
namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double lattice(std::uint64_t seed, std::int64_t i, std::int64_t j) {
  const std::uint64_t h = mix(seed ^ mix(static_cast<std::uint64_t>(i) * 0x100000001B3ull ^
                                         mix(static_cast<std::uint64_t>(j))));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

double value_noise(std::uint64_t seed, double x, double y) {
  const double fx = std::floor(x), fy = std::floor(y);
  const auto i = static_cast<std::int64_t>(fx), j = static_cast<std::int64_t>(fy);
  const double tx = smooth(x - fx), ty = smooth(y - fy);
  const double a = lattice(seed, i, j), b = lattice(seed, i + 1, j);
  const double c = lattice(seed, i, j + 1), d = lattice(seed, i + 1, j + 1);
  return (a * (1 - tx) + b * tx) * (1 - ty) + (c * (1 - tx) + d * tx) * ty;
}

double texture(const Layer& layer, std::uint64_t seed, double x, double y) {
  const double n1 = value_noise(seed, x / layer.scale, y / layer.scale);
  const double n2 = value_noise(seed ^ 0xABCDEFull, x / (layer.scale * 0.4), y / (layer.scale * 0.4));
  const double n = (2.0 * n1 + n2) / 3.0;
  return layer.mean + layer.contrast * 2.0 * (n - 0.5);
}

double layer_disparity(const Layer& l, int v) { return l.disparity + l.slope * v; }

bool covers(const Layer& l, double u, int v) {
  return u >= l.u0 && u < l.u1 && v >= l.v0 && v < l.v1;
}

}  // namespace

SyntheticScene shifted_texture(int width, int height, int shift, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(0.05f, 0.95f);
  std::vector<float> base(static_cast<std::size_t>(width + shift) * height);
  for (auto& x : base) x = dist(rng);
  SyntheticScene s;
  std::vector<float> l(static_cast<std::size_t>(width) * height), r(l.size());
  for (int v = 0; v < height; ++v)
    for (int u = 0; u < width; ++u) {
      l[static_cast<std::size_t>(v) * width + u] = base[static_cast<std::size_t>(v) * (width + shift) + u];
      r[static_cast<std::size_t>(v) * width + u] =
          base[static_cast<std::size_t>(v) * (width + shift) + u + shift];
    }
  s.left = GrayImage::from_values(width, height, std::move(l));
  s.right = GrayImage::from_values(width, height, std::move(r));
  s.gt_left = DisparityMap(width, height);
  s.gt_right = DisparityMap(width, height);
  for (int v = 0; v < height; ++v)
    for (int u = 0; u < width; ++u) {
      if (u - shift >= 0) s.gt_left.set(u, v, static_cast<float>(shift));
      if (u + shift < width) s.gt_right.set(u, v, static_cast<float>(shift));
    }
  return s;
}

SyntheticScene render_scene(const SceneSpec& spec) {
  const int w = spec.width, h = spec.height;
  std::vector<float> l(static_cast<std::size_t>(w) * h, 0.0f), r(l.size(), 0.0f);
  SyntheticScene s;
  s.gt_left = DisparityMap(w, h);
  s.gt_right = DisparityMap(w, h);
  std::mt19937_64 rng(spec.seed * 7919 + 17);
  std::uniform_real_distribution<double> noise(-spec.noise, spec.noise);

  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      // Left view: nearest layer covering (u, v).
      int best = -1;
      for (int k = 0; k < static_cast<int>(spec.layers.size()); ++k)
        if (covers(spec.layers[k], u, v) &&
            (best < 0 || layer_disparity(spec.layers[k], v) > layer_disparity(spec.layers[best], v)))
          best = k;
      double value = 0.0;
      if (best >= 0) {
        value = texture(spec.layers[best], spec.seed + best, u, v);
        s.gt_left.set(u, v, static_cast<float>(layer_disparity(spec.layers[best], v)));
      }
      l[static_cast<std::size_t>(v) * w + u] =
          static_cast<float>(std::clamp(value + (spec.noise > 0 ? noise(rng) : 0.0), 0.0, 1.0));

      // Right view: the surface point seen at column u sits at u + d in the left frame.
      best = -1;
      for (int k = 0; k < static_cast<int>(spec.layers.size()); ++k) {
        const double ul = u + layer_disparity(spec.layers[k], v);
        if (covers(spec.layers[k], ul, v) &&
            (best < 0 || layer_disparity(spec.layers[k], v) > layer_disparity(spec.layers[best], v)))
          best = k;
      }
      value = 0.0;
      if (best >= 0) {
        const double d = layer_disparity(spec.layers[best], v);
        value = texture(spec.layers[best], spec.seed + best, u + d, v);
        s.gt_right.set(u, v, static_cast<float>(d));
      }
      r[static_cast<std::size_t>(v) * w + u] =
          static_cast<float>(std::clamp(value + (spec.noise > 0 ? noise(rng) : 0.0), 0.0, 1.0));
    }
  }
  s.left = GrayImage::from_values(w, h, std::move(l));
  s.right = GrayImage::from_values(w, h, std::move(r));
  return s;
}

SceneSpec weak_texture_spec(int width, int height, std::uint64_t seed, double weak) {
  SceneSpec spec;
  spec.width = width;
  spec.height = height;
  spec.seed = seed;
  spec.noise = 0.01;
  const double W = width, H = height;
  const double base = 0.05 * W;  // background disparity
  // Background wall, slanted, weak texture.
  spec.layers.push_back({-W, 2 * W, 0, H, base, 0.02, 0.55, 0.06 * weak, 12.0});
  // Floor band at the bottom, stronger slant, moderate texture.
  spec.layers.push_back({-W, 2 * W, 0.8 * H, H, base + 4, 0.03, 0.45, 0.25 * weak, 5.0});
  // Nearly textureless box (lamp shade / plastic-like).
  spec.layers.push_back({0.15 * W, 0.45 * W, 0.2 * H, 0.7 * H, base + 0.04 * W, 0.0, 0.7,
                         0.03 * weak, 20.0});
  // Textured box (board-game-like).
  spec.layers.push_back({0.55 * W, 0.85 * W, 0.3 * H, 0.75 * H, base + 0.06 * W, 0.01, 0.4,
                         0.35 * weak, 3.0});
  // Small thin foreground object with medium texture.
  spec.layers.push_back({0.47 * W, 0.53 * W, 0.1 * H, 0.9 * H, base + 0.09 * W, 0.0, 0.3,
                         0.2 * weak, 4.0});
  return spec;
}

std::size_t matchable_pixels(const SyntheticScene& scene, int window) {
  std::size_t count = 0;
  const int w = scene.left.width(), h = scene.left.height();
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      const auto d = scene.gt_left.at(u, v);
      if (!d) continue;
      const int ur = u - static_cast<int>(std::lround(*d));
      if (window_fits(w, h, u, v, window) && window_fits(w, h, ur, v, window)) ++count;
    }
  return count;
}

SeedList corrupt_with_occlusion_seeds(const SyntheticScene& scene, const SeedList& clean,
                                      double fraction, std::uint64_t seed, std::size_t* injected) {
  const int w = scene.gt_left.width(), h = scene.gt_left.height();
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(clean.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_int_distribution<int> jitter(-2, 2);

  const auto target = static_cast<std::size_t>(std::lround(fraction * clean.size()));
  SeedList out = clean;
  std::size_t added = 0;
  for (std::size_t idx : order) {
    if (added >= target) break;
    const auto& s = clean[idx];
    const int d = s.disparity();
    // Background visible within a few pixels along the row.
    std::optional<int> background;
    for (int du = -12; du <= 12 && !background; ++du) {
      const auto g = scene.gt_left.at(std::clamp(s.u + du, 0, w - 1), s.v);
      if (g && std::lround(*g) < d - 3) background = static_cast<int>(std::lround(*g));
    }
    if (!background) continue;
    const int u = s.u + jitter(rng), v = std::clamp(s.v + jitter(rng), 0, h - 1);
    const SeedCorrespondence bad{u, u - *background, v};
    if (!seed_in_bounds(bad, w, h)) continue;
    out.push_back(bad);
    ++added;
  }
  canonicalize(out);
  if (injected) *injected = added;
  return out;
}

}  // namespace fusegrow::testing
