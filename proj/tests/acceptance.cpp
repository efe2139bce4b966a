// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if any fails.

#include "gorga/config.hpp"
#include "gorga/lsystem.hpp"
#include "gorga/render.hpp"
#include "gorga/turtle.hpp"
#include "gorga/validation.hpp"

#include <chrono>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <fmt/format.h>

using namespace gorga;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& title, bool passed, const std::string& detail) {
    if (!passed) ++failures;
    fmt::print("[{}] {} {}: {}\n", passed ? "PASS" : "FAIL", id, title, detail);
    std::fflush(stdout);
}

constexpr BuiltinRule kRules[] = {BuiltinRule::Random, BuiltinRule::Angle, BuiltinRule::Spiral};
constexpr ShapeKind kShapes[] = {ShapeKind::Rectangle, ShapeKind::Triangle, ShapeKind::Ellipse};

RunConfig config_for(BuiltinRule rule, ShapeKind shape, std::uint64_t seed) {
    RunConfig cfg;
    cfg.rule.builtin = rule;
    cfg.shape = default_shape(shape);
    cfg.seed = seed;
    return cfg;
}

void estimator_oracles() {
    const auto start = Clock::now();
    bool ok = true;
    std::string detail;
    for (const auto& oracle : reference_oracles()) {
        const auto check = run_oracle(oracle);
        ok = ok && check.passed;
        detail += fmt::format("{} {}; ", check.name, check.detail);
    }
    const double t = seconds_since(start);
    report(1, "estimator oracles", ok && t < 30, fmt::format("{}{:.1f} s (limit 30 s)", detail, t));
}

// Criteria 2 to 4 share the 30 default-parameter runs.
void pattern_checks() {
    const auto start = Clock::now();
    const auto runs = band_runs(10);
    const double t = seconds_since(start);
    const auto band = band_check(runs);
    report(2, "dimension band", band.passed && t < 300,
           fmt::format("{}; {:.1f} s (limit 300 s)", band.detail, t));

    std::vector<Drawing> drawings;
    for (const auto& r : runs) drawings.push_back(r.drawing);
    for (const auto rule : kRules) {
        for (const auto shape : {ShapeKind::Triangle, ShapeKind::Ellipse}) {
            for (std::uint64_t seed = 1; seed <= 3; ++seed) drawings.push_back(interpret(config_for(rule, shape, seed)));
        }
    }

    std::size_t violations = 0;
    double closest = std::numeric_limits<double>::infinity();
    double limit = 0.0;
    std::size_t outside = 0;
    std::size_t segments = 0;
    for (const auto& d : drawings) {
        const auto overlap = overlap_report(d);
        violations += overlap.violations;
        closest = std::min(closest, overlap.min_distance);
        limit = overlap.limit;
        outside += containment_failures(d);
        segments += d.segments.size();
    }
    report(3, "no-overlap", violations == 0,
           fmt::format("{} drawings, {} close pairs, closest non-consecutive pair {:.3f} (limit {:.3f})",
                       drawings.size(), violations, closest, limit));
    report(4, "containment", outside == 0,
           fmt::format("{} of {} segments with a point outside rectangle, triangle and ellipse masks",
                       outside, segments));
}

void determinism() {
    bool ok = true;
    int compared = 0;
    for (const auto rule : kRules) {
        for (const auto shape : kShapes) {
            const auto cfg = config_for(rule, shape, 42);
            const auto a = interpret(cfg);
            const auto b = interpret(cfg);
            const Palette palette;
            ok = ok && render_svg(a, palette) == render_svg(b, palette);
            ok = ok && render_raster(a, 1.0) == render_raster(b, 1.0);
            ++compared;
        }
    }
    report(5, "determinism", ok, fmt::format("{} configurations rendered twice, SVG and PNG byte-identical", compared));
}

void rewriting() {
    bool ok = true;
    std::string detail;
    for (const auto rule : kRules) {
        const auto g = builtin_rule(rule);
        ok = ok && rewrite(g, g.axiom(), 1) == *g.successor('F');
        std::size_t expected = 1;
        for (int n = 0; n <= 5; ++n) {
            ok = ok && forward_count(rewrite(g, g.axiom(), n)) == expected;
            expected *= 7;
        }
        detail += fmt::format("{} n=5 count {}; ", to_string(rule),
                              forward_count(rewrite(g, g.axiom(), 5)));
    }
    report(6, "rewriting", ok, detail + "expected 16807");
}

void termination() {
    const auto start = Clock::now();
    int runs = 0;
    int stalled = 0;
    int saturated = 0;
    std::size_t most = 0;
    for (const int scale : {1, 10}) {
        for (const auto rule : kRules) {
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                auto cfg = config_for(rule, ShapeKind::Rectangle, seed);
                cfg.iterations *= scale;
                cfg.stall_budget *= scale;
                const auto d = interpret(cfg);
                ++runs;
                if (d.termination == Termination::Stalled) ++stalled;
                if (d.termination == Termination::Saturated) ++saturated;
                most = std::max(most, d.segments.size());
            }
        }
    }
    const double t = seconds_since(start);
    report(7, "termination", t < 600,
           fmt::format("{} runs at default and 10x budgets finished ({} stalled, {} saturated, largest {} "
                       "segments) in {:.1f} s (limit 600 s)",
                       runs, stalled, saturated, most, t));
}

}  // namespace

int main() {
    estimator_oracles();
    pattern_checks();
    determinism();
    rewriting();
    termination();
    fmt::print("{} of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
