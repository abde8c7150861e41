#include "fusegrow/similarity.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace fusegrow {

std::string_view to_string(Statistic s) {
  switch (s) {
    case Statistic::mncc: return "mncc";
    case Statistic::expssd: return "expssd";
    case Statistic::epc: return "epc";
  }
  return "?";
}

std::optional<Statistic> parse_statistic(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "mncc") return Statistic::mncc;
  if (lower == "expssd") return Statistic::expssd;
  if (lower == "epc") return Statistic::epc;
  return std::nullopt;
}

void SimilarityParams::validate() const {
  if (window < 3 || window % 2 == 0) throw std::invalid_argument("window must be odd and >= 3");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(sigma_s_sq > 0.0)) throw std::invalid_argument("sigma_s_sq must be positive");
  if (!(sigma_p_sq > 0.0)) throw std::invalid_argument("sigma_p_sq must be positive");
}

namespace {

// Row-major walk over two windows given as row pointers. Both passes visit
// samples in the same order regardless of the source.
template <typename RowL, typename RowR>
PairMoments accumulate(int n, RowL row_left, RowR row_right, bool central) {
  PairMoments m;
  m.count = n * n;
  double sum_l = 0.0, sum_r = 0.0;
  for (int y = 0; y < n; ++y) {
    const float* l = row_left(y);
    const float* r = row_right(y);
    for (int x = 0; x < n; ++x) {
      const double a = l[x], b = r[x];
      const double diff = a - b;
      m.ssd += diff * diff;
      m.energy += a * a + b * b;
      sum_l += a;
      sum_r += b;
    }
  }
  if (!central) return m;
  const double mean_l = sum_l / m.count;
  const double mean_r = sum_r / m.count;
  for (int y = 0; y < n; ++y) {
    const float* l = row_left(y);
    const float* r = row_right(y);
    for (int x = 0; x < n; ++x) {
      const double a = l[x] - mean_l, b = r[x] - mean_r;
      m.var_left += a * a;
      m.var_right += b * b;
      m.cov += a * b;
    }
  }
  m.var_left /= m.count;
  m.var_right /= m.count;
  m.cov /= m.count;
  return m;
}

int side_of(std::size_t samples) {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(samples))));
  if (static_cast<std::size_t>(n) * static_cast<std::size_t>(n) != samples)
    throw std::invalid_argument("window sample count is not a square");
  return n;
}

}  // namespace

PairMoments pair_moments(std::span<const float> left, std::span<const float> right) {
  if (left.size() != right.size()) throw std::invalid_argument("window sizes differ");
  const int n = side_of(left.size());
  return accumulate(
      n, [&](int y) { return left.data() + static_cast<std::size_t>(y) * n; },
      [&](int y) { return right.data() + static_cast<std::size_t>(y) * n; }, true);
}

PairMoments pair_moments(const GrayImage& left, const GrayImage& right, int ul, int ur, int v,
                         int n, bool central) {
  const int r = n / 2;
  return accumulate(
      n, [&](int y) { return left.row(v - r + y) + (ul - r); },
      [&](int y) { return right.row(v - r + y) + (ur - r); }, central);
}

double mncc(const PairMoments& m, double epsilon) {
  return 2.0 * m.cov / (m.var_left + m.var_right + epsilon);
}

double expssd(const PairMoments& m, double sigma_s_sq) {
  if (m.energy == 0.0) return 1.0;
  return std::exp(-m.ssd / (sigma_s_sq * m.energy));
}

double mncc(std::span<const float> wl, std::span<const float> wr, double epsilon) {
  return mncc(pair_moments(wl, wr), epsilon);
}

double expssd(std::span<const float> wl, std::span<const float> wr, double sigma_s_sq) {
  return expssd(pair_moments(wl, wr), sigma_s_sq);
}

double range_likelihood(double d, double dp, double sigma_p_sq) {
  const double r = d - dp;
  return std::exp(-(r * r) / (2.0 * sigma_p_sq));
}

double epc(const PairMoments& m, double d, std::optional<double> dp, double sigma_s_sq,
           double sigma_p_sq) {
  const double image_term = m.energy == 0.0 ? 0.0 : m.ssd / (sigma_s_sq * m.energy);
  double prior_term = 0.0;
  if (dp) {
    const double r = d - *dp;
    prior_term = (r * r) / (2.0 * sigma_p_sq);
  }
  return std::exp(-image_term - prior_term);
}

double epc(std::span<const float> wl, std::span<const float> wr, double d,
           std::optional<double> dp, const SimilarityParams& params) {
  return epc(pair_moments(wl, wr), d, dp, params.sigma_s_sq, params.sigma_p_sq);
}

double score(const PairMoments& m, double d, std::optional<double> dp,
             const SimilarityParams& params) {
  switch (params.statistic) {
    case Statistic::mncc: return mncc(m, params.epsilon);
    case Statistic::expssd: return expssd(m, params.sigma_s_sq);
    case Statistic::epc: return epc(m, d, dp, params.sigma_s_sq, params.sigma_p_sq);
  }
  return 0.0;
}

}  // namespace fusegrow
