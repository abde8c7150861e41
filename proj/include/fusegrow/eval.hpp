#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fusegrow/image.hpp"

namespace fusegrow {

struct EvaluationReport {
  std::string scene;
  std::string variant;
  double accuracy_percent = 0.0;
  std::uint64_t correct = 0;
  std::uint64_t wrong = 0;      // valid estimate off by >= 1 px
  std::uint64_t unmatched = 0;  // no estimate
  std::uint64_t evaluated_pixels = 0;
};

/// Error threshold: an estimate counts as correct when |d - d_gt| < 1 px.
inline constexpr double kCorrectThreshold = 1.0;
/// Slack of the left-right ground-truth cross-check.
inline constexpr double kConsistencySlack = 1.0;

/// Pixel is set when its left ground truth is valid, the right ground truth at
/// round(u - d) is valid, and the two disparities agree within 1 px.
Mask nonoccluded_mask(const DisparityMap& gt_left, const DisparityMap& gt_right);

/// Scores every masked pixel that has valid ground truth. Throws
/// std::invalid_argument on size mismatch.
EvaluationReport evaluate(const DisparityMap& est, const DisparityMap& gt, const Mask& mask);

/// {"scene","variant","accuracy_percent","correct","wrong","unmatched","evaluated_pixels"}
std::string to_json_line(const EvaluationReport& report);
EvaluationReport report_from_json_line(const std::string& line);

/// Fixed-width human-readable table, reports in the given order.
void print_report_table(std::ostream& out, const std::vector<EvaluationReport>& reports);

}  // namespace fusegrow
