#pragma once

// Randomized property checks shared by the acceptance binary. Each returns an
// empty string on success, otherwise a description of the first violation.

#include <cstdint>
#include <string>

namespace fusegrow::testing {

std::string check_similarity_properties(std::uint64_t seed, int trials);
std::string check_delaunay_empty_circumcircle(std::uint64_t seed, int trials);
std::string check_prior_linear_precision(std::uint64_t seed, int trials);
std::string check_grower_invariants(std::uint64_t seed, int trials);
std::string check_gap_fill_monotone(std::uint64_t seed, int trials);
std::string check_report_count_identity(std::uint64_t seed, int trials);

}  // namespace fusegrow::testing
