#include "gorga/validation.hpp"

#include "gorga/config.hpp"
#include "gorga/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <fmt/format.h>

namespace gorga {

namespace {

void apply(Fault fault, BoxCountEstimate& estimate) {
    if (fault == Fault::NegateSlope) estimate.dimension = -estimate.dimension;
}

}  // namespace

Fault fault_from_name(std::string_view name) {
    if (name == "none") return Fault::None;
    if (name == "negate-slope") return Fault::NegateSlope;
    throw Error(ErrorCode::UnsupportedKind, fmt::format("unknown fault '{}'", name));
}

std::vector<ReferenceOracle> reference_oracles(bool quick) {
    std::vector<ReferenceOracle> oracles{
        {ReferenceKind::FilledSquare, 0, 256, false, 2.0, 0.01},
        {ReferenceKind::Line, 0, 256, false, 1.0, 0.01},
    };
    if (quick) return oracles;
    oracles.push_back({ReferenceKind::Sierpinski, 8, 1024, false, std::log2(3.0), 0.06});
    oracles.push_back({ReferenceKind::Dragon, 16, 1024, false, 1.52, 0.06});
    // Koch's scale factor 3 does not nest with power-of-two boxes; averaging
    // over shifted grids removes most of the alignment bias.
    oracles.push_back({ReferenceKind::Koch, 7, 1024, true, std::log(4.0) / std::log(3.0), 0.06});
    return oracles;
}

Check run_oracle(const ReferenceOracle& oracle, Fault fault) {
    const auto raster = reference_fractal(oracle.kind, oracle.depth, oracle.size);
    AnalysisOptions options;
    options.offsets = oracle.offsets;
    auto estimate = analyze_raster(raster, options);
    apply(fault, estimate);
    const double error = std::abs(estimate.dimension - oracle.expected);
    return {fmt::format("oracle:{}", to_string(oracle.kind)), error <= oracle.tolerance,
            fmt::format("{} (expected {:.5f} within {})", format_estimate(estimate),
                        oracle.expected, oracle.tolerance)};
}

BoxCountEstimate pattern_estimate(const Drawing& drawing, Fault fault) {
    auto estimate = analyze_raster(rasterize(drawing, 1.0));
    apply(fault, estimate);
    return estimate;
}

std::vector<BandRun> band_runs(int seeds, Fault fault) {
    std::vector<BandRun> runs;
    for (const auto rule : {BuiltinRule::Random, BuiltinRule::Angle, BuiltinRule::Spiral}) {
        for (int seed = 1; seed <= seeds; ++seed) {
            RunConfig config;
            config.rule.builtin = rule;
            config.seed = static_cast<std::uint64_t>(seed);
            BandRun run{rule, config.seed, interpret(config), 0.0};
            run.dimension = pattern_estimate(run.drawing, fault).dimension;
            runs.push_back(std::move(run));
        }
    }
    return runs;
}

Check band_check(const std::vector<BandRun>& runs) {
    if (runs.empty()) return {"band", false, "no runs"};
    std::vector<std::string> outside;
    double sum = 0.0;
    for (const auto& r : runs) {
        sum += r.dimension;
        if (r.dimension < kBandLow || r.dimension > kBandHigh) {
            outside.push_back(fmt::format("{}/{}: {:.4f}", to_string(r.rule), r.seed, r.dimension));
        }
    }
    const double mean = sum / static_cast<double>(runs.size());
    const auto [lo, hi] = std::minmax_element(runs.begin(), runs.end(), [](const auto& a, const auto& b) {
        return a.dimension < b.dimension;
    });
    const bool ok = outside.empty() && mean >= kMeanLow && mean <= kMeanHigh;
    std::string detail = fmt::format("{} runs, D in [{:.4f}, {:.4f}], mean {:.4f}", runs.size(),
                                     lo->dimension, hi->dimension, mean);
    for (const auto& o : outside) detail += "; outside band " + o;
    return {"band", ok, detail};
}

OverlapReport overlap_report(const Drawing& drawing) {
    const double clearance = drawing.config.clearance;
    const double cell = clearance / 2.0;
    OverlapReport report;
    report.limit = clearance - cell * std::sqrt(2.0);
    report.min_distance = std::numeric_limits<double>::infinity();
    const auto& segs = drawing.segments;
    if (segs.size() < 2) return report;

    double longest = 0.0;
    for (const auto& s : segs) longest = std::max(longest, length(s.b - s.a));
    // Two segments closer than the limit have midpoints at most this far apart.
    const double bucket = longest + std::max(report.limit, 0.0) + 1e-9;
    const auto key = [&](Vec2 p) {
        const auto cx = static_cast<std::int64_t>(std::floor(p.x / bucket));
        const auto cy = static_cast<std::int64_t>(std::floor(p.y / bucket));
        return std::pair{cx, cy};
    };
    const auto pack = [](std::int64_t cx, std::int64_t cy) {
        return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint64_t>(cy & 0xffffffff);
    };
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto [cx, cy] = key((segs[i].a + segs[i].b) * 0.5);
        grid[pack(cx, cy)].push_back(i);
    }
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto [cx, cy] = key((segs[i].a + segs[i].b) * 0.5);
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
            for (std::int64_t dx = -1; dx <= 1; ++dx) {
                const auto it = grid.find(pack(cx + dx, cy + dy));
                if (it == grid.end()) continue;
                for (const auto j : it->second) {
                    if (j <= i || lineage_adjacent(segs, i, j)) continue;
                    const double d = segment_segment_distance(segs[i].a, segs[i].b, segs[j].a, segs[j].b);
                    report.min_distance = std::min(report.min_distance, d);
                    if (d < report.limit) ++report.violations;
                }
            }
        }
    }
    return report;
}

std::size_t containment_failures(const Drawing& drawing) {
    return static_cast<std::size_t>(std::count_if(
        drawing.segments.begin(), drawing.segments.end(), [&](const Segment& s) {
            return !drawing.mask.contains(s.a) || !drawing.mask.contains(s.b) ||
                   !drawing.mask.contains((s.a + s.b) * 0.5);
        }));
}

std::vector<Check> validation_suite(bool quick, Fault fault, int seeds) {
    std::vector<Check> checks;
    for (const auto& oracle : reference_oracles(quick)) checks.push_back(run_oracle(oracle, fault));
    if (quick) return checks;

    const auto runs = band_runs(seeds, fault);
    checks.push_back(band_check(runs));

    std::size_t violations = 0;
    std::size_t outside = 0;
    double closest = std::numeric_limits<double>::infinity();
    double limit = 0.0;
    for (const auto& r : runs) {
        const auto report = overlap_report(r.drawing);
        violations += report.violations;
        closest = std::min(closest, report.min_distance);
        limit = report.limit;
        outside += containment_failures(r.drawing);
    }
    checks.push_back({"no-overlap", violations == 0,
                      fmt::format("{} close pairs, closest {:.3f} (limit {:.3f})", violations,
                                  closest, limit)});
    checks.push_back({"containment", outside == 0,
                      fmt::format("{} segments outside the mask", outside)});
    return checks;
}

}  // namespace gorga
