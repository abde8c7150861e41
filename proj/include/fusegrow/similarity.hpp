#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "fusegrow/image.hpp"

namespace fusegrow {

enum class Statistic { mncc, expssd, epc };

std::string_view to_string(Statistic s);
/// Accepts "mncc", "expssd", "epc" (case-insensitive).
std::optional<Statistic> parse_statistic(std::string_view name);

/// Very tight prior for pixel-unit disparities. It gates growth to within
/// ~0.04 px of the prior, so it is offered as a preset only.
inline constexpr double kNarrowSigmaPSq = 0.001;
/// Shipping default, chosen by scripts/sweep_sigma_p.py (accuracy is flat
/// between 0.5 and 1 and drops off below 0.1).
inline constexpr double kDefaultSigmaPSq = 1.0;

struct SimilarityParams {
  int window = 5;
  double epsilon = std::numeric_limits<double>::epsilon();
  double sigma_s_sq = 0.1;
  double sigma_p_sq = kDefaultSigmaPSq;
  Statistic statistic = Statistic::epc;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// Moments of a pair of equally sized windows. Central moments use the
/// population (1/N) convention and are computed two-pass, so a constant
/// window has exactly zero variance.
struct PairMoments {
  int count = 0;
  double var_left = 0.0;
  double var_right = 0.0;
  double cov = 0.0;
  double ssd = 0.0;     // sum (l - r)^2
  double energy = 0.0;  // sum l^2 + r^2
};

PairMoments pair_moments(std::span<const float> left, std::span<const float> right);

/// Same moments read straight from two images, windows centred at (ul,v) and
/// (ur,v). Caller guarantees both windows fit. Accumulation order matches
/// pair_moments on the extracted windows, so results are bitwise equal.
/// `central` = false skips var/cov.
PairMoments pair_moments(const GrayImage& left, const GrayImage& right, int ul, int ur, int v,
                         int n, bool central = true);

double mncc(const PairMoments& m, double epsilon);
double expssd(const PairMoments& m, double sigma_s_sq);

double mncc(std::span<const float> wl, std::span<const float> wr, double epsilon);
double expssd(std::span<const float> wl, std::span<const float> wr, double sigma_s_sq);
double range_likelihood(double d, double dp, double sigma_p_sq);

/// expssd * range_likelihood, evaluated as a single exponential. With no
/// prior the range term is dropped and the result equals expssd.
double epc(const PairMoments& m, double d, std::optional<double> dp, double sigma_s_sq,
           double sigma_p_sq);
double epc(std::span<const float> wl, std::span<const float> wr, double d,
           std::optional<double> dp, const SimilarityParams& params);

/// Dispatch on params.statistic. `dp` is ignored unless the statistic is EPC.
double score(const PairMoments& m, double d, std::optional<double> dp,
             const SimilarityParams& params);

inline bool needs_central_moments(Statistic s) { return s == Statistic::mncc; }

}  // namespace fusegrow
