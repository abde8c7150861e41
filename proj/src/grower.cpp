#include "fusegrow/grower.hpp"

#include <stdexcept>

namespace fusegrow {
namespace {

class Scorer {
 public:
  Scorer(const GrayImage& left, const GrayImage& right, const PriorMap& prior,
         const SimilarityParams& params)
      : left_(left),
        right_(right),
        prior_(prior),
        params_(params),
        central_(needs_central_moments(params.statistic)),
        use_prior_(params.statistic == Statistic::epc && prior.width() == left.width() &&
                   prior.height() == left.height()) {}

  bool admissible(const SeedCorrespondence& s) const {
    const int n = params_.window;
    return s.disparity() >= 0 && window_fits(left_.width(), left_.height(), s.u, s.v, n) &&
           window_fits(right_.width(), right_.height(), s.u_prime, s.v, n);
  }

  double operator()(const SeedCorrespondence& s) const {
    const PairMoments m = pair_moments(left_, right_, s.u, s.u_prime, s.v, params_.window, central_);
    std::optional<double> dp;
    if (use_prior_) {
      if (const auto p = prior_.at(s.u, s.v)) dp = *p;
    }
    return score(m, static_cast<double>(s.disparity()), dp, params_);
  }

 private:
  const GrayImage& left_;
  const GrayImage& right_;
  const PriorMap& prior_;
  const SimilarityParams& params_;
  bool central_;
  bool use_prior_;
};

}  // namespace

MatchState grow(const GrayImage& left, const GrayImage& right, const SeedList& seeds,
                const PriorMap& prior, const GrowParams& params) {
  if (left.width() != right.width() || left.height() != right.height())
    throw std::invalid_argument("grow: images must have equal size");
  if (prior.width() != 0 && (prior.width() != left.width() || prior.height() != left.height()))
    throw std::invalid_argument("grow: prior size differs from image size");
  params.similarity.validate();

  const int width = left.width(), height = left.height();
  MatchState state;
  state.disparity = DisparityMap(width, height);
  state.left_matched = Mask(width, height, 0);
  state.right_matched = Mask(width, height, 0);
  state.accepted_score = Grid<double>(width, height, 0.0);

  const Scorer scorer(left, right, prior, params.similarity);
  SeedQueue queue;
  for (const auto& s : seeds) {
    if (!seed_in_bounds(s, width, height) || !scorer.admissible(s)) continue;
    queue.push({scorer(s), s});
    ++state.seed_evals;
    ++state.seeds_queued;
  }

  while (!queue.empty()) {
    const SeedCorrespondence s = queue.pop().seed;
    ++state.pops;
    // Directions left, right, up, down; each offers disparities d+1, d, d-1
    // (right-column offsets -1, 0, +1).
    const int du[4] = {-1, 1, 0, 0};
    const int dv[4] = {0, 0, -1, 1};
    for (int dir = 0; dir < 4; ++dir) {
      bool found = false;
      double best_score = 0.0;
      SeedCorrespondence best;
      for (int delta = -1; delta <= 1; ++delta) {
        const SeedCorrespondence q{s.u + du[dir], s.u_prime + du[dir] + delta, s.v + dv[dir]};
        if (!scorer.admissible(q)) continue;
        const double c = scorer(q);
        ++state.eval_count;
        if (!found || c > best_score) {
          found = true;
          best_score = c;
          best = q;
        }
      }
      if (!found || !(best_score >= params.tau)) continue;
      if (state.left_matched(best.u, best.v) || state.right_matched(best.u_prime, best.v)) continue;
      state.left_matched(best.u, best.v) = 1;
      state.right_matched(best.u_prime, best.v) = 1;
      state.disparity.set(best.u, best.v, static_cast<float>(best.disparity()));
      state.accepted_score(best.u, best.v) = best_score;
      ++state.accepted;
      queue.push({best_score, best});
    }
  }
  return state;
}

GrowthSummary grown_statistics(const MatchState& state) {
  GrowthSummary summary;
  summary.matched = state.accepted;
  const double pixels =
      static_cast<double>(state.disparity.width()) * static_cast<double>(state.disparity.height());
  summary.density = pixels > 0 ? static_cast<double>(state.accepted) / pixels : 0.0;
  summary.eval_count = state.eval_count;
  summary.evals_per_match =
      state.accepted ? static_cast<double>(state.eval_count) / static_cast<double>(state.accepted)
                     : 0.0;
  summary.pops = state.pops;
  summary.seeds_queued = state.seeds_queued;
  return summary;
}

double visited_fraction(const MatchState& state, int disparity_levels) {
  const double space = static_cast<double>(state.disparity.width()) *
                       static_cast<double>(state.disparity.height()) * disparity_levels;
  if (space <= 0) return 0.0;
  return static_cast<double>(state.eval_count + state.seed_evals) / space;
}

void overlay_seeds(DisparityMap& map, const SeedList& seeds) {
  for (const auto& s : seeds)
    if (map.contains(s.u, s.v) && !map.valid(s.u, s.v))
      map.set(s.u, s.v, static_cast<float>(s.disparity()));
}

}  // namespace fusegrow
