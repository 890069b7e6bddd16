#pragma once

// Property checkers for outer measures on sampled finite families.

#include "dyadlab/measures.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace dyadlab::measures {

/// E_0, ..., E_{l-1}: the sets whose union and pairwise inclusions are checked.
using Family = std::vector<IndexSet>;

struct FamilyShape {
    std::size_t max_sets = 3;      // l drawn from 1..max_sets
    std::size_t max_set_size = 3;  // |E_i| drawn from 1..max_set_size
    std::size_t pool = 48;         // points drawn from the first `pool` support indices
};

/// Seeded random families; a small pool makes overlapping sets common.
std::vector<Family> sample_families(const Support& support, std::size_t count, std::uint64_t seed,
                                    FamilyShape shape = {});

struct AxiomViolation {
    std::string axiom;  // empty_set | monotonicity | subadditivity
    std::size_t family = 0;
    std::string detail;
};

struct AxiomReport {
    std::string measure;
    std::size_t families = 0;
    std::size_t checks = 0;
    std::vector<AxiomViolation> violations;

    bool passed() const noexcept { return violations.empty(); }
    nlohmann::json to_json() const;
    std::string to_text() const;
};

/// mu(empty) = 0; E_i subset of the union and every E_i subset E_j imply
/// ordered values; mu(union) <= sum mu(E_i).
AxiomReport check_outer_measure_axioms(const OuterMeasure& mu, const std::vector<Family>& families);

struct FinitenessTrace {
    std::string measure;
    std::vector<Rational> partial_sums;  // after 1, 2, ..., N support points
    bool bounded_by_one = true;
    std::size_t first_excess = 0;  // 1-based N where the sum first exceeds 1 (0 if never)

    nlohmann::json to_json() const;
};

FinitenessTrace check_strong_finiteness(const OuterMeasure& mu, std::size_t budget);

}  // namespace dyadlab::measures
