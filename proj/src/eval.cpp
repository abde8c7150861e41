#include "fusegrow/eval.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace fusegrow {

Mask nonoccluded_mask(const DisparityMap& gt_left, const DisparityMap& gt_right) {
  if (gt_left.width() != gt_right.width() || gt_left.height() != gt_right.height())
    throw std::invalid_argument("ground-truth maps differ in size");
  Mask mask(gt_left.width(), gt_left.height(), 0);
#pragma omp parallel for schedule(static)
  for (int v = 0; v < gt_left.height(); ++v) {
    for (int u = 0; u < gt_left.width(); ++u) {
      const auto d = gt_left.at(u, v);
      if (!d) continue;
      const long ur = std::lround(u - static_cast<double>(*d));
      if (ur < 0 || ur >= gt_right.width()) continue;
      const auto dr = gt_right.at(static_cast<int>(ur), v);
      if (dr && std::abs(static_cast<double>(*d) - *dr) <= kConsistencySlack) mask(u, v) = 1;
    }
  }
  return mask;
}

EvaluationReport evaluate(const DisparityMap& est, const DisparityMap& gt, const Mask& mask) {
  if (est.width() != gt.width() || est.height() != gt.height() || mask.width() != gt.width() ||
      mask.height() != gt.height())
    throw std::invalid_argument("evaluate: estimate, ground truth and mask must have equal size");
  std::uint64_t correct = 0, wrong = 0, unmatched = 0;
#pragma omp parallel for schedule(static) reduction(+ : correct, wrong, unmatched)
  for (int v = 0; v < gt.height(); ++v) {
    for (int u = 0; u < gt.width(); ++u) {
      if (!mask(u, v) || !gt.valid(u, v)) continue;
      if (!est.valid(u, v)) {
        ++unmatched;
      } else if (std::abs(static_cast<double>(est.value(u, v)) - gt.value(u, v)) <
                 kCorrectThreshold) {
        ++correct;
      } else {
        ++wrong;
      }
    }
  }
  EvaluationReport r;
  r.correct = correct;
  r.wrong = wrong;
  r.unmatched = unmatched;
  r.evaluated_pixels = correct + wrong + unmatched;
  r.accuracy_percent =
      r.evaluated_pixels ? 100.0 * static_cast<double>(correct) / r.evaluated_pixels : 0.0;
  return r;
}

std::string to_json_line(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["scene"] = r.scene;
  j["variant"] = r.variant;
  j["accuracy_percent"] = r.accuracy_percent;
  j["correct"] = r.correct;
  j["wrong"] = r.wrong;
  j["unmatched"] = r.unmatched;
  j["evaluated_pixels"] = r.evaluated_pixels;
  return j.dump();
}

EvaluationReport report_from_json_line(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  EvaluationReport r;
  r.scene = j.at("scene").get<std::string>();
  r.variant = j.at("variant").get<std::string>();
  r.accuracy_percent = j.at("accuracy_percent").get<double>();
  r.correct = j.at("correct").get<std::uint64_t>();
  r.wrong = j.at("wrong").get<std::uint64_t>();
  r.unmatched = j.at("unmatched").get<std::uint64_t>();
  r.evaluated_pixels = j.at("evaluated_pixels").get<std::uint64_t>();
  return r;
}

void print_report_table(std::ostream& out, const std::vector<EvaluationReport>& reports) {
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-14s %9s %10s %10s %10s %10s\n", "scene", "variant",
                "accuracy", "correct", "wrong", "unmatched", "evaluated");
  out << line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-16s %-14s %8.2f%% %10llu %10llu %10llu %10llu\n",
                  r.scene.c_str(), r.variant.c_str(), r.accuracy_percent,
                  static_cast<unsigned long long>(r.correct),
                  static_cast<unsigned long long>(r.wrong),
                  static_cast<unsigned long long>(r.unmatched),
                  static_cast<unsigned long long>(r.evaluated_pixels));
    out << line;
  }
}

}  // namespace fusegrow
