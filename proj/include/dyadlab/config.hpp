#pragma once

// Run configuration (key = value text plus overrides) and the textual
// point/set specs accepted on the command line.

#include "dyadlab/dimension.hpp"
#include "dyadlab/domination.hpp"
#include "dyadlab/measures.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dyadlab::cli {

struct RunConfig {
    std::string machine = "tpm-1";
    std::size_t n = 1;
    unsigned L = 22;
    std::uint64_t T = 4096;
    unsigned guard = 2;
    unsigned r_min = 1;
    unsigned r_max = 48;
    unsigned r0 = 32;
    double slope_tol = 0.1;
    double gap_tol = 0.2;
    double epsilon = 1e-6;
    double machine_c = 0;  // additive constant in gamma = 2 + 2 log2(alpha + 2) + c
    std::string registry;  // JSON file; empty selects the built-in registry
    std::optional<std::uint64_t> seed;
    std::string table = "dyadlab.table";
    std::string out = "dyadlab-out";

    /// Lines "key = value"; '#' starts a comment. Unknown keys are errors.
    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    /// Throws ConfigError on non-positive thresholds, an inverted range or a foreign machine.
    void validate() const;
    std::uint64_t require_seed() const;

    dim::RRange range() const { return {r_min, r_max}; }
    dom::Thresholds thresholds() const { return {r0, slope_tol, gap_tol}; }
    nlohmann::json to_json() const;
};

/// "1/3,2" (exact), "random:SEED" or "periodic:PREFIX:PERIOD" (fractional
/// bits of a point in [0,1), one coordinate per ';'-separated item).
geo::PointDescriptor parse_point(const std::string& spec, std::size_t n);
geo::RationalPoint parse_rational_point(const std::string& spec, std::size_t n);

/// "empty", "all", "points:P;P", "cofinite:P;P", "cube:R:A,A", "ball:R:P".
measures::SetQuery parse_set(const std::string& spec, std::size_t n);

}  // namespace dyadlab::cli
