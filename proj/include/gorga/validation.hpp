#pragma once

#include "gorga/fractal.hpp"
#include "gorga/lsystem.hpp"
#include "gorga/turtle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gorga {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Deliberate breakage used to prove the suite can fail.
enum class Fault { None, NegateSlope };

// Throws Error(UnsupportedKind) for an unknown name.
Fault fault_from_name(std::string_view name);

struct ReferenceOracle {
    ReferenceKind kind;
    int depth;
    int size;
    bool offsets;
    double expected;
    double tolerance;
};

// Filled square and line first; `quick` keeps only those two.
std::vector<ReferenceOracle> reference_oracles(bool quick = false);
Check run_oracle(const ReferenceOracle& oracle, Fault fault = Fault::None);

// Box-counting dimension of a drawing rasterized at one pixel per unit.
BoxCountEstimate pattern_estimate(const Drawing& drawing, Fault fault = Fault::None);

struct BandRun {
    BuiltinRule rule = BuiltinRule::Angle;
    std::uint64_t seed = 0;
    Drawing drawing;
    double dimension = 0.0;
};

inline constexpr double kBandLow = 1.35;
inline constexpr double kBandHigh = 1.75;
inline constexpr double kMeanLow = 1.45;
inline constexpr double kMeanHigh = 1.65;

// Every built-in rule with seeds 1..seeds on the default 800x800 rectangle.
std::vector<BandRun> band_runs(int seeds, Fault fault = Fault::None);
Check band_check(const std::vector<BandRun>& runs);

struct OverlapReport {
    std::size_t violations = 0;
    double min_distance = 0.0;  // over pairs that are not lineage-adjacent
    double limit = 0.0;         // clearance - cell_size * sqrt(2)
};

// Exhaustive over all pairs that could be closer than the limit, using a
// bucket grid to skip distant ones.
OverlapReport overlap_report(const Drawing& drawing);

// Segments with an endpoint or midpoint outside the mask.
std::size_t containment_failures(const Drawing& drawing);

// Oracles, then (unless quick) the band, overlap and containment checks.
std::vector<Check> validation_suite(bool quick, Fault fault = Fault::None, int seeds = 10);

}  // namespace gorga
