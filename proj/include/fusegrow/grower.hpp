#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "fusegrow/image.hpp"
#include "fusegrow/seeding.hpp"
#include "fusegrow/similarity.hpp"

namespace fusegrow {

struct ScoredSeed {
  double score = 0.0;
  SeedCorrespondence seed;
};

/// Max-priority queue on score. Equal scores pop in ascending (v,u,u')
/// order, so the pop sequence is fully determined by the pushed set.
class SeedQueue {
 public:
  void push(const ScoredSeed& s) { heap_.push(s); }
  ScoredSeed pop() {
    ScoredSeed top = heap_.top();
    heap_.pop();
    return top;
  }
  const ScoredSeed& top() const { return heap_.top(); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct LowerPriority {
    bool operator()(const ScoredSeed& a, const ScoredSeed& b) const {
      if (a.score != b.score) return a.score < b.score;
      return b.seed < a.seed;
    }
  };
  std::priority_queue<ScoredSeed, std::vector<ScoredSeed>, LowerPriority> heap_;
};

struct GrowParams {
  SimilarityParams similarity;
  double tau = 0.5;
};

struct MatchState {
  DisparityMap disparity;
  Mask left_matched;
  Mask right_matched;
  Grid<double> accepted_score;  // score at acceptance, matched pixels only
  std::uint64_t eval_count = 0;    // neighbour-candidate evaluations
  std::uint64_t seed_evals = 0;    // initial seed scorings
  std::uint64_t seeds_queued = 0;  // seeds whose windows fit
  std::uint64_t pops = 0;
  std::uint64_t accepted = 0;
};

/// Best-first correspondence growing. Seeds are scored and queued but not
/// written to the output; each pop examines the four neighbour directions,
/// takes the best of three disparity hypotheses in each, and accepts it when
/// the score reaches tau and neither its left nor its right pixel is matched.
/// Candidates whose windows leave either image, or whose disparity would be
/// negative, are skipped. `prior` may be empty (0x0) or everywhere invalid.
MatchState grow(const GrayImage& left, const GrayImage& right, const SeedList& seeds,
                const PriorMap& prior, const GrowParams& params);

struct GrowthSummary {
  std::uint64_t matched = 0;
  double density = 0.0;  // matched / image pixels
  std::uint64_t eval_count = 0;
  double evals_per_match = 0.0;
  std::uint64_t pops = 0;
  std::uint64_t seeds_queued = 0;
};

GrowthSummary grown_statistics(const MatchState& state);

/// Fraction of the dense disparity space (pixels x disparity levels) that was
/// scored, counting seed scorings.
double visited_fraction(const MatchState& state, int disparity_levels);

/// Writes seed disparities into pixels the growth left empty. Diagnostic only.
void overlay_seeds(DisparityMap& map, const SeedList& seeds);

}  // namespace fusegrow
