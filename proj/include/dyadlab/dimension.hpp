#pragma once

// Finite-range surrogates for algorithmic and local dimensions: sampled
// profiles r -> K_r(x) or log2(1/mu(B(x, 2^-r))), tail min/max of value/r,
// and epsilon-quantile global dimensions over a weighted atom sample.

#include "dyadlab/measures.hpp"

#include <json.hpp>

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyadlab::dim {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RRange {
    unsigned min = 1;
    unsigned max = 48;
};

struct ProfileSample {
    unsigned r = 0;
    double value = 0;  // kInfinity when mu(B) = 0
};

struct DimensionProfile {
    std::string subject;
    std::vector<ProfileSample> samples;
    /// Some ball held no support point: the zero may be an artifact of (L, T).
    bool support_exhausted = false;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

struct SlopeEstimate {
    double lower = 0;  // min value/r over r >= r0
    double upper = 0;  // max value/r over r >= r0
    unsigned r0 = 0;
    double regression_slope = 0;  // diagnostic only; NaN if any tail value is infinite
    std::size_t tail_samples = 0;

    nlohmann::json to_json() const;
};

DimensionProfile k_profile(const geo::PointDescriptor& x, RRange range, unsigned guard, geo::ComplexityCache& cache);

DimensionProfile local_dim_profile(const measures::OuterMeasure& mu, const geo::PointDescriptor& x, RRange range);

/// Throws InsufficientData when fewer than three samples have r >= r0.
SlopeEstimate estimate_slopes(const DimensionProfile& profile, unsigned r0);

struct WeightedSlopes {
    Rational weight;
    SlopeEstimate slopes;
};

struct GlobalDims {
    double dimH = 0, DimH = 0, dimP = 0, DimP = 0;
    double epsilon = 0;
    std::size_t atoms = 0;

    nlohmann::json to_json() const;
};

/// dimH: largest a with weight{lower < a} <= eps*W; DimH: smallest a with
/// weight{lower > a} <= eps*W; dimP, DimP likewise on upper slopes.
GlobalDims global_dims_from_slopes(const std::vector<WeightedSlopes>& atoms, double epsilon);

/// Atoms are the support points of mu, weighted by mu({q}).
GlobalDims global_dims(const measures::OuterMeasure& mu, RRange range, unsigned r0, double epsilon);

}  // namespace dyadlab::dim
